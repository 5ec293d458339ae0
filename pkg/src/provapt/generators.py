"""Synthetic PROV documents: derivation chains, repeated motifs, random graphs."""

from __future__ import annotations

import random

from .model import ACTIVITY, AGENT, CORE_KINDS, ENTITY, LABELS, ProvDocument, ProvEdge, ProvNode, RelationLabel

_MAX_SEED = 2**64 - 1


def _check_seed(seed: int) -> int:
    if not 0 <= seed <= _MAX_SEED:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return seed


def _width(n: int) -> int:
    return len(str(max(n - 1, 0)))


def generate_chain(n: int) -> ProvDocument:
    """Entities ``e{n-1} wdf ... wdf e0``."""
    if n < 1:
        raise ValueError("chain length must be >= 1")
    w = _width(n)
    ids = [f"e{i:0{w}d}" for i in range(n)]
    nodes = [ProvNode(i, {ENTITY}) for i in ids]
    edges = [ProvEdge(ids[i + 1], ids[i], RelationLabel.WDF) for i in range(n - 1)]
    return ProvDocument({x.id: x for x in nodes}, frozenset(edges))


def generate_pattern_graph(repeats: int, seed: int = 0) -> ProvDocument:
    """``repeats`` copies of a small crowd-sourcing motif around one shared agent.

    Each copy ``i`` has an output entity ``out{i}`` generated by activity
    ``act{i}``, which used input entity ``in{i}`` and was associated with
    the agent; the output is attributed to the agent. ``seed`` only shuffles
    the copy numbering, never the shape.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    rng = random.Random(_check_seed(seed))
    w = _width(repeats)
    labels = [f"{i:0{w}d}" for i in range(repeats)]
    rng.shuffle(labels)
    nodes = [ProvNode("agent", {AGENT})]
    edges = []
    for tag in labels:
        out, act, inp = f"out{tag}", f"act{tag}", f"in{tag}"
        nodes += [ProvNode(out, {ENTITY}), ProvNode(act, {ACTIVITY}), ProvNode(inp, {ENTITY})]
        edges += [
            ProvEdge(out, act, RelationLabel.WGB),
            ProvEdge(act, inp, RelationLabel.USED),
            ProvEdge(act, "agent", RelationLabel.WAW),
            ProvEdge(out, "agent", RelationLabel.WAT),
        ]
    return ProvDocument({x.id: x for x in nodes}, frozenset(edges))


def inject_cross_use(doc: ProvDocument, activity: str, entity: str) -> ProvDocument:
    """Add ``activity used entity``, e.g. an activity reading another copy's output."""
    return doc.replace(edges=doc.edges | {ProvEdge(activity, entity, RelationLabel.USED)})


def generate_random(
    n: int,
    edge_density: float,
    seed: int,
    *,
    kinds: tuple[str, ...] = CORE_KINDS,
    app_types: tuple[str, ...] = (),
    app_type_rate: float = 0.0,
) -> ProvDocument:
    """A reproducible random document.

    Each node draws a core kind uniformly from ``kinds`` (and, with
    probability ``app_type_rate``, one of ``app_types``). About
    ``edge_density * n`` edges are drawn: a uniform label, then endpoints of
    the kinds that label connects. Self-loops are skipped and repeated
    draws collapse, so the edge count can fall short.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if edge_density < 0:
        raise ValueError("edge_density must be >= 0")
    rng = random.Random(_check_seed(seed))
    w = _width(n)
    by_kind: dict[str, list[str]] = {k: [] for k in CORE_KINDS}
    nodes = []
    for i in range(n):
        nid = f"n{i:0{w}d}"
        kind = rng.choice(kinds)
        apps = {rng.choice(app_types)} if app_types and rng.random() < app_type_rate else set()
        nodes.append(ProvNode(nid, {kind}, apps))
        by_kind[kind].append(nid)
    usable = [lab for lab in LABELS if all(by_kind[k] for k in lab.signature)]
    edges = set()
    if usable:
        for _ in range(round(edge_density * n)):
            lab = rng.choice(usable)
            src_kind, dst_kind = lab.signature
            s = rng.choice(by_kind[src_kind])
            d = rng.choice(by_kind[dst_kind])
            if s != d:
                edges.add(ProvEdge(s, d, lab))
    return ProvDocument({x.id: x for x in nodes}, frozenset(edges))
