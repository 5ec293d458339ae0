"""Pure-Python kernels. Same contract as the compiled ``_ckernels`` module.

Graphs arrive in CSR form as integer numpy arrays (or sequences):
``ptr[i]:ptr[i+1]`` slices the out-neighbourhood of node ``i``.
"""

from collections import deque

import numpy as np

from .errors import ResourceLimitError

NAME = "python"
N_CODES = 32  # label codes must stay below this; see _key


def _key(code, inner):
    return inner * N_CODES + code


class Interner:
    """Hash-consing table from ``(code, inner id)`` to a dense term id."""

    def __init__(self, cap):
        self.cap = cap
        self._ids = {}
        self._pairs = []
        self._next = 0

    def __len__(self):
        return self._next

    def reserve(self):
        if self._next >= self.cap:
            raise ResourceLimitError(f"provenance-type table exceeded cap of {self.cap} terms")
        tid = self._next
        self._next += 1
        self._pairs.append(None)
        return tid

    def intern(self, code, inner):
        key = _key(code, inner)
        tid = self._ids.get(key)
        if tid is None:
            tid = self.reserve()
            self._ids[key] = tid
            self._pairs[tid] = (code, inner)
        return tid

    def next_level(self, ptr, dst, code, prev_ptr, prev_ids):
        """Lift level-i term sets one edge backwards.

        Returns ``(new_ptr, new_ids, first_new_id)``; terms with ids from
        ``first_new_id`` onward were created by this call.
        """
        first_new = self._next
        ptr = ptr.tolist()
        dst = dst.tolist()
        code = code.tolist()
        prev_ptr = prev_ptr.tolist()
        prev_ids = prev_ids.tolist()
        n = len(ptr) - 1
        out_ptr = [0] * (n + 1)
        out_ids = []
        ids = self._ids
        for x in range(n):
            acc = set()
            for e in range(ptr[x], ptr[x + 1]):
                y = dst[e]
                c = code[e]
                for j in range(prev_ptr[y], prev_ptr[y + 1]):
                    key = prev_ids[j] * N_CODES + c
                    tid = ids.get(key)
                    if tid is None:
                        tid = self.reserve()
                        ids[key] = tid
                        self._pairs[tid] = (c, prev_ids[j])
                    acc.add(tid)
            out_ids.extend(sorted(acc))
            out_ptr[x + 1] = len(out_ids)
        return (
            np.asarray(out_ptr, dtype=np.int64),
            np.asarray(out_ids, dtype=np.int64),
            first_new,
        )

    def lookup_pairs(self, first):
        """(code, inner) of every term id >= first, in id order; None for reserved ids."""
        return self._pairs[first:]


def greatest_simulation(
    out_ptr, out_dst, out_code, in_ptr, in_src, n_types, s_ptr, s_dst, n_codes, rel, order
):
    """Shrink ``rel`` (n_nodes x n_types, uint8, in place) to the largest simulation.

    A pair (u, t) survives when every edge u -c-> v has some summary edge
    t -c-> t' with (v, t') still related. Nodes are revisited from a FIFO
    worklist seeded in ``order``. Returns ``killer``: for each removed pair
    the CSR index of the instance edge that removed it, -1 elsewhere.
    """
    out_ptr = out_ptr.tolist()
    out_dst = out_dst.tolist()
    out_code = out_code.tolist()
    in_ptr = in_ptr.tolist()
    in_src = in_src.tolist()
    s_ptr = s_ptr.tolist()
    s_dst = s_dst.tolist()
    n_nodes = len(out_ptr) - 1
    killer = np.full((n_nodes, n_types), -1, dtype=np.int64)
    rows = [set(np.flatnonzero(rel[u]).tolist()) for u in range(n_nodes)]

    queue = deque(int(u) for u in order)
    queued = [False] * n_nodes
    for u in queue:
        queued[u] = True
    while queue:
        u = queue.popleft()
        queued[u] = False
        removed = []
        for t in sorted(rows[u]):
            for e in range(out_ptr[u], out_ptr[u + 1]):
                v = out_dst[e]
                base = t * n_codes + out_code[e]
                row_v = rows[v]
                if not any(s_dst[j] in row_v for j in range(s_ptr[base], s_ptr[base + 1])):
                    removed.append((t, e))
                    break
        if not removed:
            continue
        for t, e in removed:
            rows[u].discard(t)
            rel[u, t] = 0
            killer[u, t] = e
        for j in range(in_ptr[u], in_ptr[u + 1]):
            p = in_src[j]
            if not queued[p]:
                queued[p] = True
                queue.append(p)
    return killer


def max_finite_distances(out_ptr, out_dst, kind_bits):
    """Longest finite shortest-path distance from each source kind to an Entity.

    ``kind_bits`` holds bit 0 Entity, bit 1 Activity, bit 2 Agent per node.
    Returns a length-3 array (Entity, Activity, Agent sources); -1 means no
    pair at distance >= 1.
    """
    out_ptr = out_ptr.tolist()
    out_dst = out_dst.tolist()
    bits = kind_bits.tolist()
    n = len(out_ptr) - 1
    best = [-1, -1, -1]
    dist = [-1] * n
    for s in range(n):
        if not bits[s] & 7:
            continue
        far = -1
        dist[s] = 0
        frontier = [s]
        seen = [s]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for x in frontier:
                for e in range(out_ptr[x], out_ptr[x + 1]):
                    y = out_dst[e]
                    if dist[y] < 0:
                        dist[y] = d
                        seen.append(y)
                        nxt.append(y)
                        if bits[y] & 1:
                            far = d
            frontier = nxt
        for y in seen:
            dist[y] = -1
        if far > 0:
            for k in range(3):
                if bits[s] >> k & 1 and far > best[k]:
                    best[k] = far
    return np.asarray(best, dtype=np.int64)
