"""Command-line interface.

JSON (or DOT) goes to standard output or ``--out``; diagnostics go to
standard error. Exit codes: 0 success or conformant, 1 unreadable input,
2 provenance-type table limit hit, 3 not conformant.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass

from . import generators
from .aggregate import Summary, apt
from .conformance import Mode, NoRootsError, check_conformance
from .dot import export_dot
from .errors import ResourceLimitError
from .metrics import metrics_report, outlier_edges
from .model import ParseError, dump_document, infer_core_types, load_document
from .ptype import DEFAULT_TERM_CAP, Direction, compute_signatures

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_RESOURCE = 2
EXIT_NONCONFORMANT = 3

log = logging.getLogger("provapt")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    graph: str | None = None
    summary: str | None = None
    k: int = 1
    k_max: int = 6
    direction: Direction = Direction.FORWARD
    mode: Mode = Mode.STRUCTURAL
    strict_types: bool = False
    threshold: float = 0.2
    out: str | None = None
    format: str = "json"
    seed: int = 0
    node: str | None = None
    cap: int = DEFAULT_TERM_CAP
    generator: str | None = None
    size: int = 10
    density: float = 2.0

    def __post_init__(self):
        if self.k < 0 or self.k_max < 0:
            raise ValueError("levels must be >= 0")
        if not 0 < self.threshold < 1:
            raise ValueError("threshold must lie in (0, 1)")
        if self.format not in ("json", "dot"):
            raise ValueError(f"unknown format {self.format!r}")


def _read_graph(path):
    try:
        doc = load_document(path)
    except (OSError, ParseError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    doc, warnings = infer_core_types(doc)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    return doc


def _read_summary(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return Summary.loads(fh.read())
    except (OSError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _emit(cfg: RunConfig, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1, ensure_ascii=False)


def cmd_summarize(cfg: RunConfig) -> int:
    doc = _read_graph(cfg.input)
    s = apt(doc, cfg.k, cfg.direction, cap=cfg.cap)
    _emit(cfg, export_dot(s) if cfg.format == "dot" else s.dumps())
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    g = _read_graph(cfg.graph)
    s = _read_summary(cfg.summary)
    try:
        verdict = check_conformance(g, s, cfg.mode, strict=cfg.strict_types)
    except NoRootsError as exc:
        raise InputError(str(exc)) from exc
    _emit(cfg, _dumps(verdict.to_json()))
    return EXIT_OK if verdict.conforms else EXIT_NONCONFORMANT


def cmd_metrics(cfg: RunConfig) -> int:
    doc = _read_graph(cfg.input)
    _emit(cfg, _dumps(metrics_report(doc, cfg.k_max, cap=cfg.cap).to_json()))
    return EXIT_OK


def cmd_outliers(cfg: RunConfig) -> int:
    if cfg.summary:
        s = _read_summary(cfg.summary)
    else:
        s = apt(_read_graph(cfg.input), cfg.k, cfg.direction, cap=cfg.cap)
    _emit(cfg, _dumps(outlier_edges(s, cfg.threshold).to_json()))
    return EXIT_OK


def cmd_types(cfg: RunConfig) -> int:
    doc = _read_graph(cfg.input)
    if cfg.node is not None and cfg.node not in doc.nodes:
        raise InputError(f"unknown node {cfg.node!r}")
    sigs = compute_signatures(doc, cfg.k, cfg.direction, cap=cfg.cap)
    wanted = [cfg.node] if cfg.node is not None else list(doc.node_ids)
    out = {
        "k": cfg.k,
        "direction": cfg.direction.value,
        "nodes": {
            nid: {str(i): list(level) for i, level in enumerate(sigs[nid].strings())} for nid in wanted
        },
    }
    _emit(cfg, _dumps(out))
    return EXIT_OK


def cmd_generate(cfg: RunConfig) -> int:
    if cfg.generator == "chain":
        doc = generators.generate_chain(cfg.size)
    elif cfg.generator == "pattern":
        doc = generators.generate_pattern_graph(cfg.size, cfg.seed)
    else:
        doc = generators.generate_random(cfg.size, cfg.density, cfg.seed)
    _emit(cfg, dump_document(doc))
    return EXIT_OK


COMMANDS = {
    "summarize": cmd_summarize,
    "check": cmd_check,
    "metrics": cmd_metrics,
    "outliers": cmd_outliers,
    "types": cmd_types,
    "generate": cmd_generate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="provapt", description="Summarize PROV graphs by provenance types.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, k=True, direction=True):
        p.add_argument("--out", help="write output here instead of standard output")
        p.add_argument("--cap", type=int, default=DEFAULT_TERM_CAP, help="maximum number of interned types")
        if k:
            p.add_argument("--k", type=int, default=1, help="type level (default: 1)")
        if direction:
            p.add_argument("--direction", choices=[d.value for d in Direction], default="forward")

    p = sub.add_parser("summarize", help="build the provenance-type summary of a graph")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["json", "dot"], default="json")
    common(p)

    p = sub.add_parser("check", help="check that a graph conforms to a summary")
    p.add_argument("--graph", required=True)
    p.add_argument("--summary", required=True)
    p.add_argument("--rooted", action="store_true", help="also require roots to map onto summary roots")
    p.add_argument("--strict-types", action="store_true", help="only pair nodes with types sharing their base types")
    common(p, k=False, direction=False)

    p = sub.add_parser("metrics", help="type counts, plateau, MFD and compression")
    p.add_argument("--input", required=True)
    p.add_argument("--k-max", type=int, default=6)
    common(p, k=False, direction=False)

    p = sub.add_parser("outliers", help="thin summary edges")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="graph to summarize first")
    src.add_argument("--summary", help="existing summary JSON")
    p.add_argument("--threshold", type=float, default=0.2)
    common(p)

    p = sub.add_parser("types", help="per-node provenance types")
    p.add_argument("--input", required=True)
    p.add_argument("--node")
    common(p)

    p = sub.add_parser("generate", help="write a synthetic PROV-JSON document")
    p.add_argument("generator", choices=["chain", "pattern", "random"])
    p.add_argument("--size", type=int, default=10, help="chain length, motif repeats or node count")
    p.add_argument("--density", type=float, default=2.0, help="edges per node for random graphs")
    p.add_argument("--seed", type=int, default=0)
    common(p, k=False, direction=False)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.ERROR, stream=sys.stderr)
    opts = vars(args).copy()
    opts.pop("verbose")
    if "direction" in opts:
        opts["direction"] = Direction(opts["direction"])
    if opts.pop("rooted", False):
        opts["mode"] = Mode.ROOTED
    if "strict_types" in opts:
        opts["strict_types"] = bool(opts["strict_types"])
    try:
        cfg = RunConfig(**opts)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        return COMMANDS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
