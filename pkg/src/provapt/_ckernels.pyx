# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled kernels. Mirrors ``_pykernels`` call for call."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t, uint64_t
from cython.operator cimport dereference as deref
from libcpp.algorithm cimport sort
from libcpp.deque cimport deque
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

from .errors import ResourceLimitError

cnp.import_array()

NAME = "cython"
DEF N_CODES = 32


cdef class Interner:
    cdef unordered_map[uint64_t, int64_t] _ids
    cdef vector[int64_t] _codes
    cdef vector[int64_t] _inners
    cdef public int64_t cap

    def __init__(self, cap):
        self.cap = cap

    def __len__(self):
        return self._codes.size()

    cdef int64_t _reserve(self) except -1:
        if <int64_t>self._codes.size() >= self.cap:
            raise ResourceLimitError(f"provenance-type table exceeded cap of {self.cap} terms")
        self._codes.push_back(-1)
        self._inners.push_back(-1)
        return self._codes.size() - 1

    def reserve(self):
        return self._reserve()

    cdef int64_t _intern(self, int64_t code, int64_t inner) except -1:
        cdef uint64_t key = <uint64_t>inner * N_CODES + <uint64_t>code
        cdef unordered_map[uint64_t, int64_t].iterator it = self._ids.find(key)
        cdef int64_t tid
        if it != self._ids.end():
            return deref(it).second
        tid = self._reserve()
        self._ids[key] = tid
        self._codes[tid] = code
        self._inners[tid] = inner
        return tid

    def intern(self, code, inner):
        return self._intern(code, inner)

    def next_level(self, ptr_, dst_, code_, prev_ptr_, prev_ids_):
        cdef int64_t[::1] ptr = np.ascontiguousarray(ptr_, dtype=np.int64)
        cdef int64_t[::1] dst = np.ascontiguousarray(dst_, dtype=np.int64)
        cdef int64_t[::1] code = np.ascontiguousarray(code_, dtype=np.int64)
        cdef int64_t[::1] prev_ptr = np.ascontiguousarray(prev_ptr_, dtype=np.int64)
        cdef int64_t[::1] prev_ids = np.ascontiguousarray(prev_ids_, dtype=np.int64)
        cdef Py_ssize_t n = ptr.shape[0] - 1
        cdef int64_t first_new = self._codes.size()
        cdef cnp.ndarray[int64_t, ndim=1] out_ptr = np.zeros(n + 1, dtype=np.int64)
        cdef vector[int64_t] out_ids
        cdef vector[int64_t] acc
        cdef Py_ssize_t x, e, j
        cdef int64_t y, c
        for x in range(n):
            acc.clear()
            for e in range(ptr[x], ptr[x + 1]):
                y = dst[e]
                c = code[e]
                for j in range(prev_ptr[y], prev_ptr[y + 1]):
                    acc.push_back(self._intern(c, prev_ids[j]))
            sort(acc.begin(), acc.end())
            for j in range(<Py_ssize_t>acc.size()):
                if j == 0 or acc[j] != acc[j - 1]:
                    out_ids.push_back(acc[j])
            out_ptr[x + 1] = out_ids.size()
        ids = np.empty(out_ids.size(), dtype=np.int64)
        cdef int64_t[::1] ids_view = ids
        for j in range(<Py_ssize_t>out_ids.size()):
            ids_view[j] = out_ids[j]
        return out_ptr, ids, first_new

    def lookup_pairs(self, first):
        cdef Py_ssize_t i
        out = []
        for i in range(first, self._codes.size()):
            if self._codes[i] < 0:
                out.append(None)
            else:
                out.append((self._codes[i], self._inners[i]))
        return out


def greatest_simulation(out_ptr_, out_dst_, out_code_, in_ptr_, in_src_, int64_t n_types,
                        s_ptr_, s_dst_, int64_t n_codes, rel_, order_):
    cdef int64_t[::1] out_ptr = np.ascontiguousarray(out_ptr_, dtype=np.int64)
    cdef int64_t[::1] out_dst = np.ascontiguousarray(out_dst_, dtype=np.int64)
    cdef int64_t[::1] out_code = np.ascontiguousarray(out_code_, dtype=np.int64)
    cdef int64_t[::1] in_ptr = np.ascontiguousarray(in_ptr_, dtype=np.int64)
    cdef int64_t[::1] in_src = np.ascontiguousarray(in_src_, dtype=np.int64)
    cdef int64_t[::1] s_ptr = np.ascontiguousarray(s_ptr_, dtype=np.int64)
    cdef int64_t[::1] s_dst = np.ascontiguousarray(s_dst_, dtype=np.int64)
    cdef uint8_t[:, ::1] rel = rel_
    cdef int64_t[::1] order = np.ascontiguousarray(order_, dtype=np.int64)
    cdef Py_ssize_t n_nodes = out_ptr.shape[0] - 1
    killer_arr = np.full((n_nodes, n_types), -1, dtype=np.int64)
    cdef int64_t[:, ::1] killer = killer_arr
    cdef vector[uint8_t] queued = vector[uint8_t](n_nodes, 0)
    cdef deque[int64_t] queue
    cdef vector[int64_t] rem_t
    cdef vector[int64_t] rem_e
    cdef Py_ssize_t i, e, j
    cdef int64_t u, v, t, base, p
    cdef bint ok

    for i in range(order.shape[0]):
        u = order[i]
        queue.push_back(u)
        queued[u] = 1
    while not queue.empty():
        u = queue.front()
        queue.pop_front()
        queued[u] = 0
        rem_t.clear()
        rem_e.clear()
        for t in range(n_types):
            if not rel[u, t]:
                continue
            for e in range(out_ptr[u], out_ptr[u + 1]):
                v = out_dst[e]
                base = t * n_codes + out_code[e]
                ok = False
                for j in range(s_ptr[base], s_ptr[base + 1]):
                    if rel[v, s_dst[j]]:
                        ok = True
                        break
                if not ok:
                    rem_t.push_back(t)
                    rem_e.push_back(e)
                    break
        if rem_t.empty():
            continue
        for j in range(<Py_ssize_t>rem_t.size()):
            rel[u, rem_t[j]] = 0
            killer[u, rem_t[j]] = rem_e[j]
        for j in range(in_ptr[u], in_ptr[u + 1]):
            p = in_src[j]
            if not queued[p]:
                queued[p] = 1
                queue.push_back(p)
    return killer_arr


def max_finite_distances(out_ptr_, out_dst_, kind_bits_):
    cdef int64_t[::1] out_ptr = np.ascontiguousarray(out_ptr_, dtype=np.int64)
    cdef int64_t[::1] out_dst = np.ascontiguousarray(out_dst_, dtype=np.int64)
    cdef uint8_t[::1] bits = np.ascontiguousarray(kind_bits_, dtype=np.uint8)
    cdef Py_ssize_t n = out_ptr.shape[0] - 1
    cdef vector[int64_t] dist = vector[int64_t](n, -1)
    cdef vector[int64_t] frontier, nxt, seen
    cdef int64_t best[3]
    cdef int64_t s, x, y, d, far
    cdef Py_ssize_t e, i, k
    best[0] = -1
    best[1] = -1
    best[2] = -1
    for s in range(n):
        if not (bits[s] & 7):
            continue
        far = -1
        dist[s] = 0
        frontier.clear()
        seen.clear()
        frontier.push_back(s)
        seen.push_back(s)
        d = 0
        while not frontier.empty():
            d += 1
            nxt.clear()
            for i in range(<Py_ssize_t>frontier.size()):
                x = frontier[i]
                for e in range(out_ptr[x], out_ptr[x + 1]):
                    y = out_dst[e]
                    if dist[y] < 0:
                        dist[y] = d
                        seen.push_back(y)
                        nxt.push_back(y)
                        if bits[y] & 1:
                            far = d
            frontier.swap(nxt)
        for i in range(<Py_ssize_t>seen.size()):
            dist[seen[i]] = -1
        if far > 0:
            for k in range(3):
                if (bits[s] >> k) & 1 and far > best[k]:
                    best[k] = far
    return np.asarray([best[0], best[1], best[2]], dtype=np.int64)
