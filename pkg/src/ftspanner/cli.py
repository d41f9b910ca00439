"""Command line: ``ftspanner {gen, build, verify, experiment, report}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiment import (
    BASES,
    PIPELINES,
    ExperimentSpec,
    PipelineOptions,
    build_pipeline,
    load_witnesses,
    rows_from_csv,
    rows_to_csv,
    run_experiment,
    summarize,
    witnesses_json,
)
from .generators import KINDS, generate, prng_metadata
from .graph import FAULT_KINDS, Graph, read_edge_list, write_edge_list
from .spanners import Spanner
from .verify import EXHAUSTIVE, VerificationError, sampled, verify_claim

EXIT_FAIL = 1
EXIT_NO_ROWS = 2


def _generator_params(args) -> dict:
    params = {}
    for key in ("n", "prob", "d", "rows", "cols"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    if args.connected:
        params["connected"] = True
    return params


def _add_generator_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--generator", choices=KINDS, help="graph family to generate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int)
    p.add_argument("--prob", type=float, help="edge probability for gnp")
    p.add_argument("--d", type=int, help="degree for random_regular")
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--connected", action="store_true", help="gnp: keep the largest component")


def _add_pipeline_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=int, help="degree threshold for alg1 (default: recommended)")
    p.add_argument("--k", type=int, help="stretch parameter of the multiplicative spanner")
    p.add_argument("--faults", type=int, default=1, help="fault budget f")
    p.add_argument("--fault-kind", choices=FAULT_KINDS, default="edge")
    p.add_argument("--base", choices=BASES, help="clustering-based additive spanner A")


def _options(args) -> PipelineOptions:
    return PipelineOptions(args.p, args.k, args.faults, args.fault_kind, args.base)


def _load_graph(args) -> Graph:
    if getattr(args, "graph", None):
        return read_edge_list(Path(args.graph).read_text())
    if args.generator:
        return generate(args.generator, args.seed, **_generator_params(args))
    raise SystemExit("need --graph FILE or --generator KIND")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    g = _load_graph(args)
    meta = {"generator": args.generator, "seed": args.seed, "params": _generator_params(args), **prng_metadata()}
    _emit(f"# {json.dumps(meta, sort_keys=True)}\n" + write_edge_list(g), args.out)
    return 0


def cmd_build(args) -> int:
    g = _load_graph(args)
    sp = build_pipeline(args.pipeline, g, _options(args))
    _emit(sp.to_json() + "\n", args.out)
    print(f"{sp.provenance}: {sp.size}/{g.m} edges, claim {sp.claim.as_dict()}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    g = _load_graph(args)
    sp = Spanner.from_json(Path(args.spanner).read_text(), g)
    mode = EXHAUSTIVE if args.sample is None else sampled(args.sample, args.seed)
    try:
        report = verify_claim(g, sp, mode)
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(report.to_json() + "\n", args.out)
    return 0 if report.passed else EXIT_FAIL


def _seed_list(text: str) -> tuple[int, ...]:
    if "-" in text:
        lo, hi = text.split("-", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(s) for s in text.split(","))


def cmd_experiment(args) -> int:
    spec = ExperimentSpec(
        args.generator,
        _generator_params(args),
        _seed_list(args.seeds) if args.seeds else (args.seed,),
        tuple(args.pipeline),
        _options(args),
        tuple(args.sizes or ()),
        args.sample,
        timing=not args.no_timing,
    )
    rows = run_experiment(spec)
    text = rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
        Path(args.out + ".witness.jsonl").write_text(witnesses_json(rows))
        Path(args.out + ".spec.json").write_text(spec.to_json() + "\n")
    else:
        sys.stdout.write(text)
    if not rows:
        print("no rows", file=sys.stderr)
        return EXIT_NO_ROWS
    print(summarize(rows), file=sys.stderr)
    return 0 if all(r.passed for r in rows) else EXIT_FAIL


def cmd_report(args) -> int:
    path = Path(args.csv)
    side = Path(str(path) + ".witness.jsonl")
    witnesses = load_witnesses(side.read_text()) if side.exists() else {}
    rows = rows_from_csv(path.read_text(), witnesses)
    if args.construction:
        rows = [r for r in rows if r.construction == args.construction]
    if not rows:
        print("no rows")
        return EXIT_NO_ROWS
    _emit(summarize(rows) + "\n", args.out)
    return 0 if all(r.passed for r in rows) else EXIT_FAIL


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ftspanner", description="Fault-tolerant additive spanners with exhaustive certification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a generated graph as an edge list")
    _add_generator_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build", help="build a spanner and write it as JSON")
    p.add_argument("--graph")
    _add_generator_args(p)
    p.add_argument("--pipeline", choices=sorted(PIPELINES), required=True)
    _add_pipeline_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="certify a spanner's claim by fault enumeration")
    p.add_argument("--graph")
    _add_generator_args(p)
    p.add_argument("--spanner", required=True)
    p.add_argument("--sample", type=int, help="check N seeded random fault sets instead of all")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="run pipelines over seeded graphs and emit CSV rows")
    _add_generator_args(p)
    p.add_argument("--seeds", help="seed range 'a-b' or list 'a,b,c' (default: --seed)")
    p.add_argument("--sizes", type=int, nargs="+", help="vertex counts overriding --n")
    p.add_argument("--pipeline", action="append", choices=sorted(PIPELINES), required=True)
    _add_pipeline_args(p)
    p.add_argument("--sample", type=int)
    p.add_argument("--no-timing", action="store_true", help="write wall_time as 0 for byte-identical output")
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("report", help="summarize an experiment CSV")
    p.add_argument("csv")
    p.add_argument("--construction", help="keep only rows of this construction")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    if args.command == "experiment" and not args.generator:
        print("experiment needs --generator", file=sys.stderr)
        return EXIT_FAIL
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
