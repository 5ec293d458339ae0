"""Summaries of W3C PROV graphs by aggregation over provenance types."""

from ._backend import default as _default_kernels
from .aggregate import Summary, apt, summaries_equivalent
from .conformance import check_conformance, greatest_simulation
from .errors import ResourceLimitError
from .metrics import compute_mfd, metrics_report, outlier_edges
from .model import ParseError, ProvDocument, RelationLabel, infer_core_types, load_document, parse_document
from .ptype import Direction, compute_signatures

backend = _default_kernels.NAME

__all__ = [
    "Direction",
    "ParseError",
    "ProvDocument",
    "RelationLabel",
    "ResourceLimitError",
    "Summary",
    "apt",
    "backend",
    "check_conformance",
    "compute_mfd",
    "compute_signatures",
    "greatest_simulation",
    "infer_core_types",
    "load_document",
    "metrics_report",
    "outlier_edges",
    "parse_document",
    "summaries_equivalent",
]
