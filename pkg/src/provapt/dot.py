"""Graphviz rendering of weighted summaries."""

from __future__ import annotations

import math

from .aggregate import Summary


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def export_dot(s: Summary, name: str = "summary") -> str:
    """Render ``s`` as a DOT digraph.

    Edge pen width is ``1 + 4 * count / max_count``; node area grows with
    the node weight. Labels show the type id and its level-0 types; the
    full signature goes into the tooltip.
    """
    lines = [f"digraph {_quote(name)} {{"]
    if s.types:
        lines.append("  node [shape=ellipse];")
    max_w = max((t.nodes for t in s.types), default=1)
    for t in s.types:
        base = ", ".join(t.base_types) if t.base_types else "-"
        label = f"{t.id}\n{base}\n({t.nodes})"
        tooltip = "\n".join(f"{i}: {' '.join(level) if level else '-'}" for i, level in enumerate(t.signature))
        # side ~ sqrt(weight) keeps the area proportional to the weight
        side = 2.0 * math.sqrt(t.nodes / max_w)
        attrs = [
            f"label={_quote(label)}",
            f"tooltip={_quote(tooltip)}",
            f"width={side:.3f}",
            f"height={side / 2:.3f}",
        ]
        if t.id in s.roots:
            attrs.append("peripheries=2")
        lines.append(f"  {_quote(t.id)} [{', '.join(attrs)}];")
    max_c = max((e.count for e in s.edges), default=1)
    for e in s.edges:
        pen = 1 + 4 * e.count / max_c
        lines.append(
            f"  {_quote(e.src)} -> {_quote(e.dst)} "
            f"[label={_quote(f'{e.label.value} ({e.count})')}, penwidth={pen:.3f}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
