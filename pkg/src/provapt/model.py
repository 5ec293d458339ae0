"""PROV instance graphs: relation labels, nodes, edges and PROV-JSON I/O."""

from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterable, Mapping, Union

logger = logging.getLogger(__name__)

ENTITY = "Entity"
ACTIVITY = "Activity"
AGENT = "Agent"
CORE_KINDS = (ENTITY, ACTIVITY, AGENT)

_SECTION_KIND = {"entity": ENTITY, "activity": ACTIVITY, "agent": AGENT}


class ParseError(ValueError):
    """Raised when a PROV-JSON document cannot be turned into a graph."""


class RelationLabel(enum.Enum):
    """The thirteen forward PROV relations, valued by their short label."""

    USED = "used"
    WGB = "wgb"
    WDF = "wdf"
    WAW = "waw"
    WAT = "wat"
    AOBO = "aobo"
    WIB = "wib"
    WSB = "wsb"
    WEB = "web"
    WIFB = "wifb"
    MEM = "mem"
    SPEC = "spec"
    ALT = "alt"

    def __str__(self) -> str:
        return self.value

    def __lt__(self, other: "RelationLabel") -> bool:
        return self.value < other.value

    @property
    def index(self) -> int:
        return _LABEL_INDEX[self]

    @property
    def signature(self) -> tuple[str, str]:
        """(source kind, target kind) implied by the relation."""
        return _SIGNATURES[self]

    @property
    def prov_name(self) -> str:
        return _PROV_NAMES[self]

    @classmethod
    def parse(cls, text: str) -> "RelationLabel":
        """Accept either the short label ("wdf") or the PROV name ("wasDerivedFrom")."""
        try:
            return cls(text)
        except ValueError:
            pass
        try:
            return _BY_PROV_NAME[text]
        except KeyError:
            raise ValueError(f"unknown relation {text!r}") from None


LABELS: tuple[RelationLabel, ...] = tuple(RelationLabel)
_LABEL_INDEX = {lab: i for i, lab in enumerate(LABELS)}

_SIGNATURES = {
    RelationLabel.USED: (ACTIVITY, ENTITY),
    RelationLabel.WGB: (ENTITY, ACTIVITY),
    RelationLabel.WDF: (ENTITY, ENTITY),
    RelationLabel.WAW: (ACTIVITY, AGENT),
    RelationLabel.WAT: (ENTITY, AGENT),
    RelationLabel.AOBO: (AGENT, AGENT),
    RelationLabel.WIB: (ENTITY, ACTIVITY),
    RelationLabel.WSB: (ACTIVITY, ENTITY),
    RelationLabel.WEB: (ACTIVITY, ENTITY),
    RelationLabel.WIFB: (ACTIVITY, ACTIVITY),
    RelationLabel.MEM: (ENTITY, ENTITY),
    RelationLabel.SPEC: (ENTITY, ENTITY),
    RelationLabel.ALT: (ENTITY, ENTITY),
}

# PROV-JSON section name -> (label, source field, target field)
RELATION_SECTIONS: dict[str, tuple[RelationLabel, str, str]] = {
    "used": (RelationLabel.USED, "prov:activity", "prov:entity"),
    "wasGeneratedBy": (RelationLabel.WGB, "prov:entity", "prov:activity"),
    "wasDerivedFrom": (RelationLabel.WDF, "prov:generatedEntity", "prov:usedEntity"),
    "wasAssociatedWith": (RelationLabel.WAW, "prov:activity", "prov:agent"),
    "wasAttributedTo": (RelationLabel.WAT, "prov:entity", "prov:agent"),
    "actedOnBehalfOf": (RelationLabel.AOBO, "prov:delegate", "prov:responsible"),
    "wasInvalidatedBy": (RelationLabel.WIB, "prov:entity", "prov:activity"),
    "wasStartedBy": (RelationLabel.WSB, "prov:activity", "prov:trigger"),
    "wasEndedBy": (RelationLabel.WEB, "prov:activity", "prov:trigger"),
    "wasInformedBy": (RelationLabel.WIFB, "prov:informed", "prov:informant"),
    "hadMember": (RelationLabel.MEM, "prov:collection", "prov:entity"),
    "specializationOf": (RelationLabel.SPEC, "prov:specificEntity", "prov:generalEntity"),
    "alternateOf": (RelationLabel.ALT, "prov:alternate1", "prov:alternate2"),
}
_PROV_NAMES = {lab: name for name, (lab, _, _) in RELATION_SECTIONS.items()}
_BY_PROV_NAME = {name: lab for name, (lab, _, _) in RELATION_SECTIONS.items()}
_SECTION_FOR = {lab: (name, s, d) for name, (lab, s, d) in RELATION_SECTIONS.items()}


@dataclass(frozen=True)
class ProvNode:
    id: str
    core_types: frozenset[str] = frozenset()
    app_types: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.id:
            raise ValueError("node id must be non-empty")
        object.__setattr__(self, "core_types", frozenset(self.core_types))
        object.__setattr__(self, "app_types", frozenset(self.app_types))
        unknown = self.core_types - set(CORE_KINDS)
        if unknown:
            raise ValueError(f"node {self.id!r}: unknown core types {sorted(unknown)}")

    @property
    def base_types(self) -> frozenset[str]:
        return self.core_types | self.app_types


@dataclass(frozen=True, order=True)
class ProvEdge:
    src: str
    dst: str
    label: RelationLabel

    def to_json(self) -> dict:
        return {"src": self.src, "dst": self.dst, "label": self.label.value}


@dataclass(frozen=True, eq=True)
class ProvDocument:
    """An immutable PROV instance graph.

    ``nodes`` maps id to :class:`ProvNode`; ``edges`` is a set, so repeated
    statements collapse to one edge.
    """

    nodes: Mapping[str, ProvNode]
    edges: frozenset[ProvEdge] = frozenset()
    declared_roots: frozenset[str] | None = None

    def __post_init__(self):
        nodes = self.nodes
        if not isinstance(nodes, dict):
            nodes = {n.id: n for n in nodes}
        for key, node in nodes.items():
            if key != node.id:
                raise ValueError(f"node key {key!r} does not match id {node.id!r}")
        object.__setattr__(self, "nodes", dict(nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for e in self.edges:
            if e.src not in nodes or e.dst not in nodes:
                missing = e.src if e.src not in nodes else e.dst
                raise ValueError(f"edge {e.src} -{e.label}-> {e.dst} refers to unknown node {missing!r}")
        if self.declared_roots is not None:
            roots = frozenset(self.declared_roots)
            bad = sorted(r for r in roots if r not in nodes)
            if bad:
                raise ValueError(f"declared roots are not nodes: {bad}")
            object.__setattr__(self, "declared_roots", roots)

    @classmethod
    def build(
        cls,
        nodes: Iterable[ProvNode] | Mapping[str, Iterable[str]],
        edges: Iterable[tuple[str, str, Union[str, RelationLabel]]] = (),
        declared_roots: Iterable[str] | None = None,
    ) -> "ProvDocument":
        """Convenience constructor.

        ``nodes`` may be ProvNode objects or a mapping ``id -> core types``;
        edges are ``(src, dst, label)`` triples with string or enum labels.
        """
        if isinstance(nodes, Mapping):
            node_objs = [ProvNode(i, frozenset(_as_list(kinds))) for i, kinds in nodes.items()]
        else:
            node_objs = list(nodes)
        edge_objs = frozenset(
            ProvEdge(s, d, lab if isinstance(lab, RelationLabel) else RelationLabel.parse(lab))
            for s, d, lab in edges
        )
        roots = None if declared_roots is None else frozenset(declared_roots)
        return cls({n.id: n for n in node_objs}, edge_objs, roots)

    def __len__(self) -> int:
        return len(self.nodes)

    @cached_property
    def node_ids(self) -> tuple[str, ...]:
        """Node ids in sorted order; positions are the integer node indices."""
        return tuple(sorted(self.nodes))

    @cached_property
    def index_of(self) -> dict[str, int]:
        return {nid: i for i, nid in enumerate(self.node_ids)}

    @cached_property
    def sorted_edges(self) -> tuple[ProvEdge, ...]:
        return tuple(sorted(self.edges, key=lambda e: (e.src, e.dst, e.label.value)))

    @cached_property
    def out_edges(self) -> dict[str, tuple[ProvEdge, ...]]:
        out: dict[str, list[ProvEdge]] = {nid: [] for nid in self.node_ids}
        for e in self.sorted_edges:
            out[e.src].append(e)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def in_degree(self) -> dict[str, int]:
        deg = dict.fromkeys(self.node_ids, 0)
        for e in self.edges:
            deg[e.dst] += 1
        return deg

    @property
    def roots(self) -> frozenset[str]:
        """Declared roots if any, else the nodes nothing points to."""
        if self.declared_roots is not None:
            return self.declared_roots
        return frozenset(n for n, d in self.in_degree.items() if d == 0)

    def nodes_of_kind(self, kind: str) -> list[str]:
        return [nid for nid in self.node_ids if kind in self.nodes[nid].core_types]

    def replace(self, nodes=None, edges=None, declared_roots=...) -> "ProvDocument":
        return ProvDocument(
            self.nodes if nodes is None else nodes,
            self.edges if edges is None else edges,
            self.declared_roots if declared_roots is ... else declared_roots,
        )


def _as_list(value) -> list:
    if value is None:
        return []
    if isinstance(value, (str, dict)):
        return [value]
    return list(value)


def _type_value(raw) -> str:
    # PROV-JSON allows typed literals: {"$": "ex:Vote", "type": "xsd:QName"}
    if isinstance(raw, dict):
        if "$" not in raw:
            raise ParseError(f"prov:type value {raw!r} has no '$' member")
        raw = raw["$"]
    if not isinstance(raw, str):
        raise ParseError(f"prov:type value must be a string, got {raw!r}")
    return raw


def parse_document(source: Union[str, bytes, IO], *, allow_undeclared: bool = False) -> ProvDocument:
    """Parse the supported PROV-JSON subset.

    Nodes come from the ``entity``/``activity``/``agent`` sections, with
    ``prov:type`` values recorded as application types. Edges come from the
    thirteen relation sections. Attributes other than ``prov:type`` are
    dropped. An edge endpoint that no section declares is an error unless
    ``allow_undeclared`` is set, in which case it becomes an untyped node
    (see :func:`infer_core_types`).
    """
    if hasattr(source, "read"):
        source = source.read()
    try:
        data = json.loads(source)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("top-level PROV-JSON value must be an object")

    core: dict[str, set[str]] = {}
    app: dict[str, set[str]] = {}
    edges: set[ProvEdge] = set()
    pending: list[tuple[str, str, RelationLabel]] = []

    for section, body in data.items():
        if section == "prefix":
            continue
        if not isinstance(body, dict):
            raise ParseError(f"section {section!r} must be an object")
        if section in _SECTION_KIND:
            kind = _SECTION_KIND[section]
            for nid, attrs in body.items():
                if not nid:
                    raise ParseError(f"empty id in section {section!r}")
                core.setdefault(nid, set()).add(kind)
                types = app.setdefault(nid, set())
                for attr_map in _as_list(attrs):
                    if not isinstance(attr_map, dict):
                        raise ParseError(f"{section} {nid!r}: attributes must be an object")
                    types.update(_type_value(t) for t in _as_list(attr_map.get("prov:type")))
        elif section in RELATION_SECTIONS:
            label, src_field, dst_field = RELATION_SECTIONS[section]
            for rid, records in body.items():
                for rec in _as_list(records):
                    if not isinstance(rec, dict):
                        raise ParseError(f"{section} {rid!r}: record must be an object")
                    for fld in (src_field, dst_field):
                        if not isinstance(rec.get(fld), str) or not rec.get(fld):
                            raise ParseError(
                                f"{section} {rid!r}: relation record missing endpoint {fld!r}"
                            )
                    pending.append((rec[src_field], rec[dst_field], label))
        else:
            raise ParseError(f"unknown section {section!r}")

    for src, dst, label in pending:
        for nid in (src, dst):
            if nid not in core:
                if not allow_undeclared:
                    raise ParseError(f"dangling node reference {nid!r} in {label.prov_name}")
                core[nid] = set()
                app[nid] = set()
        edges.add(ProvEdge(src, dst, label))

    nodes = {nid: ProvNode(nid, frozenset(core[nid]), frozenset(app.get(nid, ()))) for nid in core}
    return ProvDocument(nodes, frozenset(edges))


def load_document(path, **kwargs) -> ProvDocument:
    with open(path, "rb") as fh:
        return parse_document(fh, **kwargs)


def document_to_json(doc: ProvDocument) -> dict:
    """Serialize to the PROV-JSON subset read by :func:`parse_document`.

    Relation statements get generated ids. Nodes without any core type can
    only be represented through their edges, so isolated untyped nodes are
    rejected.
    """
    out: dict[str, dict] = {}
    connected = {e.src for e in doc.edges} | {e.dst for e in doc.edges}
    for nid in doc.node_ids:
        node = doc.nodes[nid]
        if not node.core_types and nid not in connected:
            raise ValueError(f"isolated untyped node {nid!r} has no PROV-JSON representation")
        for section, kind in _SECTION_KIND.items():
            if kind in node.core_types:
                attrs = {}
                if node.app_types:
                    types = sorted(node.app_types)
                    attrs["prov:type"] = types[0] if len(types) == 1 else types
                out.setdefault(section, {})[nid] = attrs
    counters: dict[str, int] = {}
    for e in doc.sorted_edges:
        section, sf, df = _SECTION_FOR[e.label]
        n = counters.get(section, 0)
        counters[section] = n + 1
        out.setdefault(section, {})[f"_:{e.label.value}{n}"] = {sf: e.src, df: e.dst}
    return out


def dump_document(doc: ProvDocument) -> str:
    return json.dumps(document_to_json(doc), indent=1, sort_keys=True)


def infer_core_types(doc: ProvDocument) -> tuple[ProvDocument, list[str]]:
    """Add the core kinds implied by each edge's relation signature.

    Returns the new document and a list of warnings. Declared kinds are
    kept. A node that ends up with more than one core kind is kept as is
    and reported; so is a node left with no base type at all.
    """
    implied: dict[str, set[str]] = {nid: set() for nid in doc.nodes}
    for e in doc.edges:
        src_kind, dst_kind = e.label.signature
        implied[e.src].add(src_kind)
        implied[e.dst].add(dst_kind)

    warnings: list[str] = []
    nodes = {}
    for nid in doc.node_ids:
        node = doc.nodes[nid]
        if node.core_types:
            # an explicit declaration resolves conflicting evidence
            core = node.core_types
            mismatch = implied[nid] - core
            if mismatch:
                warnings.append(
                    f"node {nid!r}: declared {sorted(core)} but relation positions imply {sorted(mismatch)}"
                )
        else:
            core = frozenset(implied[nid])
            if len(core) > 1:
                warnings.append(
                    f"node {nid!r}: relation positions imply several core types {sorted(core)}"
                )
        if not core and not node.app_types:
            warnings.append(f"node {nid!r}: no type declared and none inferable")
        nodes[nid] = ProvNode(nid, core, node.app_types)
    for w in warnings:
        logger.warning(w)
    return doc.replace(nodes=nodes), warnings
