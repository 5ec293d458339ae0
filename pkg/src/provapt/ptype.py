"""Provenance types: interned label-path terms and per-node signatures.

A level-0 type is a base type name (a PROV core kind or an application
type). A level-(i+1) type ``lab(t)`` is carried by a node with an edge
labelled ``lab`` to a node of level-i type ``t``. Signatures collect, for
each level up to ``k``, the set of types a node carries.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from . import _backend
from .model import LABELS, ProvDocument, RelationLabel

DEFAULT_TERM_CAP = 10_000_000
N_LABELS = len(LABELS)


class Direction(enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"

    def __str__(self) -> str:
        return self.value


def label_code(label: RelationLabel, direction: Direction) -> int:
    return label.index + (N_LABELS if direction is Direction.INVERSE else 0)


def code_label(code: int) -> tuple[RelationLabel, bool]:
    return LABELS[code % N_LABELS], code >= N_LABELS


def render_label(label: RelationLabel, inverse: bool) -> str:
    return f"inv-{label.value}" if inverse else label.value


class PType:
    """An interned provenance-type term.

    Build terms through a :class:`TermTable`. Equality and hashing follow
    the canonical text, so terms from different tables compare as expected.
    """

    __slots__ = ("id", "name", "label", "inverse", "inner", "level", "text")

    def __init__(self, id, name, label, inverse, inner):
        self.id = id
        self.name = name
        self.label = label
        self.inverse = inverse
        self.inner = inner
        if inner is None:
            self.level = 0
            self.text = name
        else:
            self.level = inner.level + 1
            self.text = f"{render_label(label, inverse)}({inner.text})"

    @property
    def is_base(self) -> bool:
        return self.inner is None

    def labels(self) -> tuple[str, ...]:
        """Rendered labels, outermost first."""
        out = []
        t = self
        while t.inner is not None:
            out.append(render_label(t.label, t.inverse))
            t = t.inner
        return tuple(out)

    def base(self) -> "PType":
        t = self
        while t.inner is not None:
            t = t.inner
        return t

    def __str__(self):
        return self.text

    def __repr__(self):
        return f"PType({self.text!r})"

    def __eq__(self, other):
        if self is other:
            return True
        if isinstance(other, PType):
            return self.text == other.text
        return NotImplemented

    def __hash__(self):
        return hash(self.text)

    def __lt__(self, other):
        return self.text < other.text


class TermTable:
    """Hash-consing store for :class:`PType` terms.

    Structurally equal terms get the same object and integer id. The
    table refuses to grow past ``cap`` terms.
    """

    def __init__(self, cap: int = DEFAULT_TERM_CAP, backend: str | None = None):
        self.kernels = _backend.get(backend)
        self.interner = self.kernels.Interner(cap)
        self.terms: list[PType | None] = []
        self._base_ids: dict[str, int] = {}

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def cap(self) -> int:
        return self.interner.cap

    def base(self, name: str) -> PType:
        tid = self._base_ids.get(name)
        if tid is None:
            tid = self.interner.reserve()
            self._base_ids[name] = tid
            self._sync()
            self.terms[tid] = PType(tid, name, None, False, None)
        return self.terms[tid]

    def app(self, label: RelationLabel, inner: PType, inverse: bool = False) -> PType:
        code = label.index + (N_LABELS if inverse else 0)
        tid = self.interner.intern(code, inner.id)
        self._sync()
        return self.terms[tid]

    def _sync(self):
        """Materialize PType objects for ids the interner handed out."""
        first = len(self.terms)
        if len(self.interner) == first:
            return
        for offset, pair in enumerate(self.interner.lookup_pairs(first)):
            if pair is None:
                self.terms.append(None)  # base term, filled by base()
                continue
            code, inner_id = pair
            label, inverse = code_label(code)
            self.terms.append(PType(first + offset, None, label, inverse, self.terms[inner_id]))

    def parse(self, text: str) -> PType:
        """Inverse of canonical rendering: ``"used(wat(Agent))"`` -> term."""
        labels = []
        rest = text
        while rest.endswith(")") and "(" in rest:
            head, _, inner = rest.partition("(")
            lab, inverse = head, False
            if lab.startswith("inv-"):
                lab, inverse = lab[4:], True
            try:
                label = RelationLabel(lab)
            except ValueError:
                break
            labels.append((label, inverse))
            rest = inner[:-1]
        term = self.base(rest)
        for label, inverse in reversed(labels):
            term = self.app(label, term, inverse)
        return term


@dataclass(frozen=True)
class Signature:
    """The provenance types of one node at every level 0..k."""

    node: str
    levels: tuple[frozenset[PType], ...]

    @property
    def k(self) -> int:
        return len(self.levels) - 1

    def strings(self) -> tuple[tuple[str, ...], ...]:
        return tuple(tuple(sorted(t.text for t in level)) for level in self.levels)

    @cached_property
    def key(self) -> str:
        return signature_key(self.strings())

    def prefix(self, j: int) -> "Signature":
        return Signature(self.node, self.levels[: j + 1])

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)


def signature_key(levels: Iterable[Iterable[str]]) -> str:
    """Canonical, unambiguous string for a signature given as sorted strings per level."""
    return json.dumps([sorted(level) for level in levels], separators=(",", ":"), ensure_ascii=False)


def level0_types(doc: ProvDocument, node: str, table: TermTable | None = None) -> frozenset[PType]:
    try:
        n = doc.nodes[node]
    except KeyError:
        raise KeyError(f"unknown node {node!r}") from None
    if table is None:
        table = TermTable()
    return frozenset(table.base(name) for name in sorted(n.base_types))


def next_level(
    doc: ProvDocument,
    prev: Mapping[str, Iterable[PType]],
    direction: Direction = Direction.FORWARD,
    table: TermTable | None = None,
) -> dict[str, frozenset[PType]]:
    """One step of type propagation over plain Python sets."""
    if table is None:
        table = TermTable()
    out: dict[str, set[PType]] = {nid: set() for nid in doc.node_ids}
    inverse = direction is Direction.INVERSE
    for e in doc.sorted_edges:
        x, y = (e.dst, e.src) if inverse else (e.src, e.dst)
        for t in prev.get(y, ()):
            inner = t if t.id < len(table.terms) and table.terms[t.id] is t else table.parse(t.text)
            out[x].add(table.app(e.label, inner, inverse))
    return {nid: frozenset(ts) for nid, ts in out.items()}


def adjacency(doc: ProvDocument, direction: Direction = Direction.FORWARD):
    """CSR out-adjacency ``(ptr, dst, code, edges)`` with direction applied.

    ``edges[j]`` is the document edge behind CSR slot ``j``. Cached on the
    document, which is immutable.
    """
    cache = doc.__dict__.setdefault("_adjacency", {})
    if direction in cache:
        return cache[direction]
    idx = doc.index_of
    n = len(doc.node_ids)
    inverse = direction is Direction.INVERSE
    rows = []
    for e in doc.edges:
        s, d = idx[e.src], idx[e.dst]
        if inverse:
            s, d = d, s
        rows.append((s, label_code(e.label, direction), d, e))
    rows.sort(key=lambda r: r[:3])
    src = np.fromiter((r[0] for r in rows), dtype=np.int64, count=len(rows))
    code = np.fromiter((r[1] for r in rows), dtype=np.int64, count=len(rows))
    dst = np.fromiter((r[2] for r in rows), dtype=np.int64, count=len(rows))
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=ptr[1:])
    result = (ptr, dst, code, tuple(r[3] for r in rows))
    cache[direction] = result
    return result


def compute_level_ids(
    doc: ProvDocument,
    k: int,
    direction: Direction = Direction.FORWARD,
    table: TermTable | None = None,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Per-level CSR arrays of term ids, levels 0..k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if table is None:
        table = TermTable()
    n = len(doc.node_ids)
    ptr0 = np.zeros(n + 1, dtype=np.int64)
    ids0: list[int] = []
    for i, nid in enumerate(doc.node_ids):
        ids0.extend(sorted(table.base(name).id for name in doc.nodes[nid].base_types))
        ptr0[i + 1] = len(ids0)
    levels = [(ptr0, np.asarray(ids0, dtype=np.int64))]
    ptr, dst, code, _ = adjacency(doc, direction)
    for _ in range(k):
        prev_ptr, prev_ids = levels[-1]
        new_ptr, new_ids, _first = table.interner.next_level(ptr, dst, code, prev_ptr, prev_ids)
        levels.append((new_ptr, new_ids))
    table._sync()
    return levels


def compute_signatures(
    doc: ProvDocument,
    k: int,
    direction: Direction = Direction.FORWARD,
    *,
    cap: int = DEFAULT_TERM_CAP,
    backend: str | None = None,
    table: TermTable | None = None,
) -> dict[str, Signature]:
    """Signature of every node for levels 0..k.

    Raises :class:`~provapt.errors.ResourceLimitError` when more than
    ``cap`` distinct terms would be needed.
    """
    if table is None:
        table = TermTable(cap, backend)
    levels = compute_level_ids(doc, k, direction, table)
    terms = table.terms
    sigs = {}
    for i, nid in enumerate(doc.node_ids):
        sigs[nid] = Signature(
            nid,
            tuple(frozenset(terms[t] for t in ids[ptr[i] : ptr[i + 1]].tolist()) for ptr, ids in levels),
        )
    return sigs
