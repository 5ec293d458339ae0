"""Aggregation by provenance types: summaries of PROV graphs."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

from .model import ProvDocument, RelationLabel
from .ptype import DEFAULT_TERM_CAP, Direction, Signature, compute_signatures, signature_key


@dataclass(frozen=True)
class SummaryType:
    id: str
    signature: tuple[tuple[str, ...], ...]
    nodes: int

    @property
    def key(self) -> str:
        return signature_key(self.signature)

    @property
    def base_types(self) -> tuple[str, ...]:
        return self.signature[0] if self.signature else ()


@dataclass(frozen=True, order=True)
class SummaryEdge:
    src: str
    dst: str
    label: RelationLabel
    count: int


@dataclass(frozen=True)
class Summary:
    k: int
    direction: Direction
    types: tuple[SummaryType, ...]
    edges: tuple[SummaryEdge, ...]
    roots: frozenset[str] = frozenset()
    assignment: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(sorted(self.types, key=lambda t: _id_order(t.id))))
        object.__setattr__(
            self, "edges", tuple(sorted(self.edges, key=lambda e: (_id_order(e.src), _id_order(e.dst), e.label.value)))
        )
        object.__setattr__(self, "roots", frozenset(self.roots))
        ids = {t.id for t in self.types}
        if len(ids) != len(self.types):
            raise ValueError("duplicate summary type ids")
        for t in self.types:
            if t.nodes < 1:
                raise ValueError(f"type {t.id}: node weight must be >= 1")
        seen = set()
        for e in self.edges:
            if e.src not in ids or e.dst not in ids:
                raise ValueError(f"summary edge {e} refers to an unknown type")
            if e.count < 1:
                raise ValueError(f"summary edge {e}: count must be >= 1")
            if (e.src, e.dst, e.label) in seen:
                raise ValueError(f"duplicate summary edge {e.src} -{e.label}-> {e.dst}")
            seen.add((e.src, e.dst, e.label))
        bad = self.roots - ids
        if bad:
            raise ValueError(f"roots are not types: {sorted(bad)}")

    @property
    def type_by_id(self) -> dict[str, SummaryType]:
        return {t.id: t for t in self.types}

    def edge_count(self, src: str, dst: str, label: RelationLabel) -> int:
        for e in self.edges:
            if e.src == src and e.dst == dst and e.label is label:
                return e.count
        return 0

    def to_json(self, include_assignment: bool = True) -> dict:
        out = {
            "k": self.k,
            "direction": self.direction.value,
            "types": [
                {
                    "id": t.id,
                    "signature": {str(i): list(level) for i, level in enumerate(t.signature)},
                    "nodes": t.nodes,
                }
                for t in self.types
            ],
            "edges": [
                {"src": e.src, "dst": e.dst, "label": e.label.value, "count": e.count} for e in self.edges
            ],
            "roots": sorted(self.roots, key=_id_order),
        }
        if include_assignment and self.assignment:
            out["assignment"] = {n: self.assignment[n] for n in sorted(self.assignment)}
        return out

    def dumps(self, include_assignment: bool = True) -> str:
        return json.dumps(self.to_json(include_assignment), indent=1, ensure_ascii=False)

    @classmethod
    def from_json(cls, data: Mapping) -> "Summary":
        try:
            types = []
            for t in data["types"]:
                sig = t["signature"]
                levels = tuple(tuple(sorted(sig[str(i)])) for i in range(len(sig)))
                types.append(SummaryType(str(t["id"]), levels, int(t["nodes"])))
            edges = [
                SummaryEdge(str(e["src"]), str(e["dst"]), RelationLabel.parse(e["label"]), int(e["count"]))
                for e in data.get("edges", [])
            ]
            return cls(
                k=int(data["k"]),
                direction=Direction(data.get("direction", "forward")),
                types=tuple(types),
                edges=tuple(edges),
                roots=frozenset(data.get("roots", [])),
                assignment=dict(data.get("assignment", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed summary JSON: {exc}") from exc

    @classmethod
    def loads(cls, text) -> "Summary":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed JSON: {exc}") from exc
        return cls.from_json(data)


def _id_order(tid: str):
    # t_2 sorts before t_10
    prefix, _, num = tid.rpartition("_")
    return (prefix, int(num), "") if num.isdigit() else (tid, -1, tid)


def aggregate_nodes(signatures: Mapping[str, Signature]) -> tuple[tuple[SummaryType, ...], dict[str, str]]:
    """Group nodes with equal signatures.

    Ids ``t_0, t_1, ...`` follow the signatures in lexicographic order,
    compared level by level as sorted string tuples (an empty level sorts
    first).
    """
    classes: dict[str, list[str]] = {}
    strings: dict[str, tuple] = {}
    for nid, sig in signatures.items():
        key = sig.key
        classes.setdefault(key, []).append(nid)
        if key not in strings:
            strings[key] = sig.strings()
    types = []
    assignment = {}
    for i, key in enumerate(sorted(classes, key=strings.__getitem__)):
        tid = f"t_{i}"
        types.append(SummaryType(tid, strings[key], len(classes[key])))
        for nid in classes[key]:
            assignment[nid] = tid
    return tuple(types), assignment


def aggregate_edges(doc: ProvDocument, assignment: Mapping[str, str]) -> tuple[SummaryEdge, ...]:
    counts = Counter((assignment[e.src], assignment[e.dst], e.label) for e in doc.edges)
    return tuple(sorted(SummaryEdge(s, d, lab, c) for (s, d, lab), c in counts.items()))


def apt(
    doc: ProvDocument,
    k: int,
    direction: Direction = Direction.FORWARD,
    *,
    cap: int = DEFAULT_TERM_CAP,
    backend: str | None = None,
) -> Summary:
    """Summarize ``doc`` by grouping nodes whose provenance types agree up to level ``k``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    sigs = compute_signatures(doc, k, direction, cap=cap, backend=backend)
    return summarize_signatures(doc, sigs, k, direction)


def summarize_signatures(doc: ProvDocument, sigs: Mapping[str, Signature], k: int, direction: Direction) -> Summary:
    types, assignment = aggregate_nodes(sigs)
    edges = aggregate_edges(doc, assignment)
    roots = frozenset(assignment[r] for r in doc.roots)
    return Summary(k, direction, types, edges, roots, assignment)


def _canonical(s: Summary, with_counts: bool = True):
    key = {t.id: t.key for t in s.types}
    types = sorted((t.key, t.nodes if with_counts else None) for t in s.types)
    edges = sorted(
        (key[e.src], key[e.dst], e.label.value, e.count if with_counts else None) for e in s.edges
    )
    roots = sorted(key[r] for r in s.roots)
    return types, edges, roots


def summaries_equivalent(s1: Summary, s2: Summary, *, ignore_weights: bool = False) -> bool:
    """Equal after renaming every type to its signature key.

    With ``ignore_weights`` node weights and edge counts are not compared,
    only the typed structure.
    """
    if s1.k != s2.k or s1.direction is not s2.direction:
        return False
    return _canonical(s1, not ignore_weights) == _canonical(s2, not ignore_weights)
