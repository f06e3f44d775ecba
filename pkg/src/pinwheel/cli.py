"""Command-line driver: ``pinwheel verify|homology|example|enumerate``."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
import time

from .cache import CacheError
from .complexes import AFFINE, KONTSEVICH, PROJECTIVE_BASED
from .graph import dumps, SignedCanonicalGraph
from .homology import InfeasibleError, check_feasible, homology_report
from .suites import FAIL, INFO, SUITES, Row, RunConfig, plus_graph_example

log = logging.getLogger("pinwheel")

HEADER = ("suite", "parameter", "expected", "actual", "status")
EXAMPLES = ("plus-graph",)
LARGE_ARITY, LARGE_INTERNAL = 4, 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--arity", type=int, default=3, help="number of external vertices n")
    common.add_argument("--mode", choices=("projective", "kontsevich", "affine"), default="projective")
    common.add_argument("--max-internal", type=int, default=2, help="truncation M")
    common.add_argument("--degree-min", type=int)
    common.add_argument("--degree-max", type=int)
    common.add_argument("--suite", action="append", default=[], help="suite to run (repeatable)")
    common.add_argument("--format", choices=("text", "csv"), default="text")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--cache-dir", help="basis cache directory (default $PINWHEEL_CACHE_DIR)")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="pinwheel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run verification suites")
    sub.add_parser("homology", parents=[common], help="truncation homology and the image of q")
    ex = sub.add_parser("example", parents=[common], help="worked examples")
    ex.add_argument("name", choices=EXAMPLES)
    sub.add_parser("enumerate", parents=[common], help="basis block sizes")
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(arity=args.arity, mode=args.mode, max_internal=args.max_internal,
                    degree_min=args.degree_min, degree_max=args.degree_max,
                    suites=tuple(args.suite) or tuple(SUITES), fmt=args.format, out=args.out,
                    cache_dir=args.cache_dir, workers=args.workers, seed=args.seed)
    cfg.validate()
    return cfg


def format_rows(rows: list[Row], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(HEADER)
        w.writerows(rows)
        return buf.getvalue()
    lines, current = [], None
    for r in rows:
        if r.suite != current:
            current = r.suite
            lines.append(f"[{current}]")
        lines.append(f"  {r.status:<4}  {r.parameter}: expected {r.expected}, got {r.actual}")
    failed = sum(r.status == FAIL for r in rows)
    checked = sum(r.status != INFO for r in rows)
    lines.append(f"{checked - failed} of {checked} checks passed")
    return "\n".join(lines) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def estimate(cfg: RunConfig) -> None:
    cost = check_feasible(cfg.arity, cfg.max_internal)
    if cfg.arity > LARGE_ARITY or cfg.max_internal > LARGE_INTERNAL:
        print(f"cost estimate: {cost} candidate edge sets for n={cfg.arity}, "
              f"M={cfg.max_internal}", file=sys.stderr)


def cmd_verify(cfg: RunConfig) -> int:
    estimate(cfg)
    rows = []
    for name in cfg.suites:
        start = time.perf_counter()
        got = SUITES[name](cfg)
        log.info("suite %s: %d rows in %.2fs", name, len(got), time.perf_counter() - start)
        rows.extend(got)
    emit(format_rows(rows, cfg.fmt), cfg.out)
    return 1 if any(r.status == FAIL for r in rows) else 0


def homology_table(cfg: RunConfig) -> str:
    b = cfg.basis()
    rep = homology_report(cfg.arity, cfg.max_internal, b.cache, cfg.workers)
    top = cfg.max_internal
    head = ["d"] + [f"M={M}" for M in range(top + 1)]
    if top:
        head.append(f"exact(m<{top})")
    head += ["betti", "rank q", "q onto", "stable"]
    table = [head]
    for d in rep.degrees:
        if not cfg.in_range(d):
            continue
        row = [str(d)] + [str(rep.raw[M][d]) for M in range(top + 1)]
        if top:
            row.append(str(rep.exact[d]))
        row += [str(rep.betti_at(d)), str(rep.q_rank[d]),
                "yes" if rep.q_surjective(d) else "no",
                {True: "yes", False: "FLAG", None: "n/a"}[rep.stable(d)]]
        table.append(row)
    widths = [max(len(r[i]) for r in table) for i in range(len(head))]
    lines = [f"homology of the truncated projective complex, n={cfg.arity}"]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in table]
    return "\n".join(lines) + "\n"


def cmd_homology(cfg: RunConfig) -> int:
    estimate(cfg)
    if cfg.fmt == "csv":
        rows = SUITES["homology"](cfg)
        emit(format_rows(rows, "csv"), cfg.out)
        return 1 if any(r.status == FAIL for r in rows) else 0
    emit(homology_table(cfg), cfg.out)
    return 0


def _graph_text(g) -> str:
    return dumps(SignedCanonicalGraph(g, 1))


def cmd_example(name: str, cfg: RunConfig) -> int:
    if name != "plus-graph":
        raise ValueError(f"unknown example {name!r}")
    ex = plus_graph_example()
    lines = [f"plus graph: {_graph_text(ex['graph'])}",
             f"d(plus graph) has {len(ex['terms'])} terms:"]
    for g, c in sorted(ex["terms"].items()):
        lines.append(f"  {c:+d}  {_graph_text(g)}")
    lines.append("q-image as alpha words:")
    for w, c in sorted(ex["alpha_words"].items()):
        lines.append(f"  {c:+d}  " + " ".join(f"a{u}{v}" for u, v in w))
    same = ex["alpha_words"] == ex["cyclic"]
    lines.append(f"q-image equals the cyclic Arnold sum: {'PASS' if same else 'FAIL'}")
    zero = not ex["q_image"]
    lines.append(f"q(d γ) reduces to 0: {'PASS' if zero else 'FAIL'}")
    emit("\n".join(lines) + "\n", cfg.out)
    return 0 if same and zero else 1


def cmd_enumerate(cfg: RunConfig) -> int:
    mode = {"projective": PROJECTIVE_BASED, "kontsevich": KONTSEVICH, "affine": AFFINE}[cfg.mode]
    estimate(cfg)
    b = cfg.basis(mode=mode)
    rows = []
    for m in range(cfg.max_internal + 1):
        for d in b.degree_range(m):
            if cfg.in_range(d) and b.block(d, m):
                rows.append(Row("enumerate", f"{mode} n={cfg.arity} d={d} m={m}", "-",
                                str(len(b.block(d, m))), INFO))
    emit(format_rows(rows, cfg.fmt), cfg.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(message)s")
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "homology":
            return cmd_homology(cfg)
        if args.command == "example":
            return cmd_example(args.name, cfg)
        return cmd_enumerate(cfg)
    except InfeasibleError as exc:
        print(f"refusing to run: {exc}", file=sys.stderr)
        return 3
    except CacheError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
