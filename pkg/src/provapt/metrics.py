"""Measurements over PROV graphs and their summaries."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .aggregate import Summary, SummaryEdge, aggregate_nodes
from .model import CORE_KINDS, ProvDocument
from .ptype import DEFAULT_TERM_CAP, Direction, adjacency, compute_signatures

NOT_REACHED = "not-reached"
NO_MFD = "none"

_KIND_BIT = {kind: 1 << i for i, kind in enumerate(CORE_KINDS)}


def compute_mfd(doc: ProvDocument, *, backend: str | None = None) -> int | None:
    """Maximum finite distance towards entities.

    The largest shortest-path length from an entity, activity or agent to
    a distinct entity, following edges forward. ``None`` when no entity is
    reachable from anything.
    """
    ptr, dst, _, _ = adjacency(doc, Direction.FORWARD)
    bits = np.zeros(len(doc.node_ids), dtype=np.uint8)
    for i, nid in enumerate(doc.node_ids):
        for kind in doc.nodes[nid].core_types:
            bits[i] |= _KIND_BIT[kind]
    best = _backend.get(backend).max_finite_distances(ptr, dst, bits)
    value = int(best.max()) if len(best) else -1
    return value if value > 0 else None


def max_in_degree(doc: ProvDocument) -> int:
    return max(doc.in_degree.values(), default=0)


def type_counts_over_k(
    doc: ProvDocument, k_max: int, *, cap: int = DEFAULT_TERM_CAP, backend: str | None = None
) -> dict[int, int]:
    """Number of summary types for every k in 0..k_max."""
    return {k: len(types) for k, (types, _) in _partitions(doc, k_max, cap, backend).items()}


def _partitions(doc, k_max, cap, backend):
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    sigs = compute_signatures(doc, k_max, Direction.FORWARD, cap=cap, backend=backend)
    # signatures are prefix-closed, so one run at k_max serves every smaller k
    return {k: aggregate_nodes({n: s.prefix(k) for n, s in sigs.items()}) for k in range(k_max + 1)}


def detect_plateau(counts: dict[int, int], mfd: int | None = None) -> int | str:
    """Least k from which the count stays constant through the largest probed k.

    Reported only when the probe reaches the MFD (when one exists), since an
    early flat stretch can still be followed by growth.
    """
    if not counts:
        return NOT_REACHED
    ks = sorted(counts)
    k_max = ks[-1]
    if mfd is not None and k_max < mfd:
        return NOT_REACHED
    plateau = k_max
    for k in reversed(ks[:-1]):
        if counts[k] != counts[k_max]:
            break
        plateau = k
    return plateau


def compression_ratios(
    doc: ProvDocument,
    k: int,
    *,
    summary: Summary | None = None,
    cap: int = DEFAULT_TERM_CAP,
    backend: str | None = None,
) -> dict[str, float]:
    """Per core kind: types holding nodes of that kind over nodes of that kind."""
    if summary is None:
        from .aggregate import apt

        summary = apt(doc, k, cap=cap, backend=backend)
    return _ratios(doc, summary.assignment)


def _ratios(doc, assignment):
    out = {}
    for kind in CORE_KINDS:
        nodes = doc.nodes_of_kind(kind)
        if nodes:
            out[kind] = len({assignment[n] for n in nodes}) / len(nodes)
    return out


@dataclass
class MetricsReport:
    n_nodes: int
    n_edges: int
    max_in_degree: int
    mfd: int | str
    type_counts: dict[int, int]
    plateau_k: int | str
    compression: dict[int, dict[str, float]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n_nodes": self.n_nodes,
            "n_edges": self.n_edges,
            "max_in_degree": self.max_in_degree,
            "mfd": self.mfd,
            "type_counts": {str(k): v for k, v in sorted(self.type_counts.items())},
            "plateau_k": self.plateau_k,
            "compression": {
                str(k): {kind: ratios[kind] for kind in CORE_KINDS if kind in ratios}
                for k, ratios in sorted(self.compression.items())
            },
        }


def metrics_report(
    doc: ProvDocument, k_max: int, *, cap: int = DEFAULT_TERM_CAP, backend: str | None = None
) -> MetricsReport:
    parts = _partitions(doc, k_max, cap, backend)
    counts = {k: len(types) for k, (types, _) in parts.items()}
    mfd = compute_mfd(doc, backend=backend)
    return MetricsReport(
        n_nodes=len(doc.nodes),
        n_edges=len(doc.edges),
        max_in_degree=max_in_degree(doc),
        mfd=NO_MFD if mfd is None else mfd,
        type_counts=counts,
        plateau_k=detect_plateau(counts, mfd),
        compression={k: _ratios(doc, assignment) for k, (_, assignment) in parts.items()},
    )


@dataclass(frozen=True)
class OutlierEdge:
    edge: SummaryEdge
    sibling_max: int
    ratio: float

    def to_json(self) -> dict:
        e = self.edge
        return {
            "edge": {"src": e.src, "dst": e.dst, "label": e.label.value, "count": e.count},
            "sibling_max_count": self.sibling_max,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class OutlierReport:
    threshold: float
    flagged: tuple[OutlierEdge, ...]

    def to_json(self) -> dict:
        return {"threshold": self.threshold, "flagged": [o.to_json() for o in self.flagged]}


def outlier_edges(s: Summary, threshold: float = 0.2) -> OutlierReport:
    """Flag summary edges much thinner than the heaviest edge sharing an endpoint."""
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    heaviest: dict[str, int] = {}
    for e in s.edges:
        for t in (e.src, e.dst):
            heaviest[t] = max(heaviest.get(t, 0), e.count)
    flagged = []
    for e in s.edges:
        sibling_max = max(heaviest[e.src], heaviest[e.dst])
        ratio = e.count / sibling_max
        if ratio < threshold:
            flagged.append(OutlierEdge(e, sibling_max, ratio))
    return OutlierReport(threshold, tuple(flagged))


def scatter_data(s: Summary) -> list[tuple[str, int]]:
    return [(t.id, t.nodes) for t in s.types]

