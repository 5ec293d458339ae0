"""Conformance of instance graphs to summaries, decided by simulation."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass

import numpy as np

from . import _backend
from .aggregate import Summary
from .model import ProvDocument, ProvEdge
from .ptype import N_LABELS, Direction, adjacency


class Mode(enum.Enum):
    STRUCTURAL = "structural"
    ROOTED = "rooted"

    def __str__(self) -> str:
        return self.value


class NoRootsError(ValueError):
    """Rooted conformance was requested for a graph with no identifiable root."""


@dataclass(frozen=True)
class SimulationRelation:
    pairs: frozenset[tuple[str, str]]
    mode: Mode = Mode.STRUCTURAL

    def types_of(self, node: str) -> set[str]:
        return {t for n, t in self.pairs if n == node}

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class Counterexample:
    node: str
    edge: ProvEdge | None
    reason: str
    type: str | None = None

    def to_json(self) -> dict:
        out = {"node": self.node, "edge": self.edge.to_json() if self.edge else None, "reason": self.reason}
        if self.type is not None:
            out["type"] = self.type
        return out


@dataclass(frozen=True)
class ConformanceVerdict:
    conforms: bool
    mode: Mode
    witness: SimulationRelation | None = None
    counterexample: Counterexample | None = None

    def __post_init__(self):
        if (self.witness is None) == (self.counterexample is None):
            raise ValueError("a verdict carries exactly one of witness and counterexample")

    def to_json(self) -> dict:
        out = {"conforms": self.conforms, "mode": self.mode.value}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json()
        return out


class _Refinement:
    """Arrays for one run of the simulation fixpoint, kept for diagnosis."""

    def __init__(self, g: ProvDocument, s: Summary, strict: bool, order_seed, backend):
        self.g = g
        self.s = s
        self.type_ids = [t.id for t in s.types]
        tindex = {tid: i for i, tid in enumerate(self.type_ids)}
        n, nt = len(g.node_ids), len(self.type_ids)

        ptr, dst, code, self.slot_edges = adjacency(g, Direction.FORWARD)
        src = np.repeat(np.arange(n, dtype=np.int64), np.diff(ptr))
        order = np.argsort(dst, kind="stable")
        in_src = src[order]
        in_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(dst, minlength=n), out=in_ptr[1:])

        # summary successors, bucketed by (type, label code)
        buckets: list[list[int]] = [[] for _ in range(nt * N_LABELS)]
        for e in s.edges:
            buckets[tindex[e.src] * N_LABELS + e.label.index].append(tindex[e.dst])
        s_ptr = np.zeros(len(buckets) + 1, dtype=np.int64)
        np.cumsum([len(b) for b in buckets], out=s_ptr[1:])
        s_dst = np.asarray([t for b in buckets for t in sorted(b)], dtype=np.int64)

        rel = np.ones((n, nt), dtype=np.uint8)
        if strict:
            base = [set(t.base_types) for t in s.types]
            for i, nid in enumerate(g.node_ids):
                have = g.nodes[nid].base_types
                for j in range(nt):
                    if not have <= base[j]:
                        rel[i, j] = 0

        seq = list(range(n))
        if order_seed is not None:
            random.Random(order_seed).shuffle(seq)
        kernels = _backend.get(backend)
        self.killer = kernels.greatest_simulation(
            ptr, dst, code, in_ptr, in_src, nt, s_ptr, s_dst, N_LABELS, rel, np.asarray(seq, dtype=np.int64)
        )
        self.rel = rel
        self.s_ptr, self.s_dst = s_ptr, s_dst

    def relation(self, mode: Mode) -> SimulationRelation:
        ids = self.g.node_ids
        rows, cols = np.nonzero(self.rel)
        return SimulationRelation(
            frozenset((ids[i], self.type_ids[j]) for i, j in zip(rows.tolist(), cols.tolist())), mode
        )

    def _edge_dead_for_all(self, e: ProvEdge) -> bool:
        """No surviving pair of e.dst sits behind a summary edge labelled like e."""
        v = self.g.index_of[e.dst]
        live = set(np.flatnonzero(self.rel[v]).tolist())
        lab = e.label.index
        for t in range(len(self.type_ids)):
            b = t * N_LABELS + lab
            if any(int(x) in live for x in self.s_dst[self.s_ptr[b] : self.s_ptr[b + 1]]):
                return False
        return True

    def counterexample(self) -> Counterexample | None:
        """Explain the elimination of some node, preferring local causes.

        First choice: an edge whose target is still simulated but which no
        summary edge can match. Next: any edge that fails against every
        type. Last: the edge that removed the node's first pair.
        """
        g = self.g
        dead = [nid for i, nid in enumerate(g.node_ids) if not self.rel[i].any()]
        if not dead:
            return None
        first = self.type_ids[0] if self.type_ids else None
        for nid in dead:
            for e in g.out_edges[nid]:
                target_alive = self.rel[g.index_of[e.dst]].any()
                if target_alive and self._edge_dead_for_all(e):
                    return Counterexample(
                        nid, e,
                        f"no summary edge labelled {e.label} leads to a type simulating {e.dst!r}",
                        first,
                    )
        for nid in dead:
            for e in g.out_edges[nid]:
                if self._edge_dead_for_all(e):
                    return Counterexample(
                        nid, e, f"target {e.dst!r} of the {e.label} edge is not simulated by any type", first
                    )
        nid = dead[0]
        i = g.index_of[nid]
        if not self.type_ids:
            return Counterexample(nid, None, "summary has no types", None)
        for j, tid in enumerate(self.type_ids):
            slot = int(self.killer[i, j])
            if slot >= 0:
                e = self.slot_edges[slot]
                return Counterexample(
                    nid, e, f"type {tid} has no {e.label} edge to a type simulating {e.dst!r}", tid
                )
        return Counterexample(nid, None, "base types match no summary type", None)


def greatest_simulation(
    g: ProvDocument,
    s: Summary,
    *,
    strict: bool = False,
    order_seed: int | None = None,
    backend: str | None = None,
) -> SimulationRelation:
    """Largest relation from nodes of ``g`` to types of ``s`` closed under edge matching.

    Starts from every (node, type) pair (restricted to compatible base types
    when ``strict``) and removes pairs whose outgoing edges cannot be
    matched until nothing changes. ``order_seed`` shuffles the visiting
    order; the result does not depend on it.
    """
    return _Refinement(g, s, strict, order_seed, backend).relation(Mode.STRUCTURAL)


def check_conformance(
    g: ProvDocument,
    s: Summary,
    mode: Mode | str = Mode.STRUCTURAL,
    *,
    strict: bool = False,
    backend: str | None = None,
) -> ConformanceVerdict:
    mode = Mode(mode)
    if not g.nodes:
        return ConformanceVerdict(True, mode, witness=SimulationRelation(frozenset(), mode))
    roots = g.roots
    if mode is Mode.ROOTED and not roots:
        raise NoRootsError("graph has no declared roots and every node has an incoming edge")

    run = _Refinement(g, s, strict, None, backend)
    cx = run.counterexample()
    if cx is not None:
        return ConformanceVerdict(False, mode, counterexample=cx)
    relation = run.relation(mode)
    if mode is Mode.ROOTED:
        for r in sorted(roots):
            if not relation.types_of(r) & s.roots:
                return ConformanceVerdict(
                    False,
                    mode,
                    counterexample=Counterexample(r, None, f"root {r!r} is not simulated by any summary root"),
                )
    return ConformanceVerdict(True, mode, witness=relation)
