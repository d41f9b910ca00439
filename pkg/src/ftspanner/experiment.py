"""Named construction pipelines, the experiment runner and CSV reporting."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .cluster import build_alg2_spanner
from .ftblocks import AUGMENTED, PRESERVER, SourcewiseFactory, eft_multiplicative
from .generators import generate, prng_metadata
from .graph import EDGE, FAULT_KINDS, Graph
from .sourcewise import Alg1Params, build_alg1_spanner, recommended_p
from .spanners import Spanner, acim_2additive, bkmp_6additive, greedy_multiplicative
from .union import union_spanner
from .verify import DEFAULT_BUDGET, EXHAUSTIVE, Mode, StretchReport, VerificationError, sampled, verify_claim

COLUMNS = (
    "n",
    "m",
    "construction",
    "params",
    "spanner_edges",
    "claimed_beta",
    "observed_max_additive",
    "pass",
    "wall_time",
)

BASES = ("acim2", "bkmp6")
FALLBACK_SAMPLES = 200


@dataclass(frozen=True)
class PipelineOptions:
    p: int | None = None
    k: int | None = None
    faults: int = 1
    fault_kind: str = EDGE
    base: str | None = None

    def __post_init__(self):
        if self.fault_kind not in FAULT_KINDS:
            raise ValueError(f"unknown fault kind {self.fault_kind!r}")
        if self.base is not None and self.base not in BASES:
            raise ValueError(f"unknown base spanner {self.base!r}; choose from {', '.join(BASES)}")


def _base(g: Graph, name: str):
    return acim_2additive(g) if name == "acim2" else bkmp_6additive(g)


def _alg1(kind: str) -> Callable[[Graph, PipelineOptions], Spanner]:
    def build(g: Graph, opt: PipelineOptions) -> Spanner:
        p = opt.p or recommended_p(g.n, kind, opt.fault_kind)
        factory = SourcewiseFactory(kind, opt.fault_kind)
        return build_alg1_spanner(g, Alg1Params(p, opt.faults, opt.fault_kind), factory)

    return build


def _alg2(g: Graph, opt: PipelineOptions) -> Spanner:
    if opt.fault_kind != EDGE or opt.faults != 1:
        raise ValueError("alg2-bkmp6 tolerates exactly one edge fault")
    A, clustering = _base(g, opt.base or "bkmp6")
    M = eft_multiplicative(g, opt.k or 3, 1)
    return build_alg2_spanner(g, A, clustering, M)


def _union(g: Graph, opt: PipelineOptions) -> Spanner:
    if opt.fault_kind != EDGE:
        raise ValueError("union-f tolerates edge faults only")
    A, _ = _base(g, opt.base or "acim2")
    return union_spanner(A, eft_multiplicative(g, opt.k or 2, opt.faults))


PIPELINES: dict[str, Callable[[Graph, PipelineOptions], Spanner]] = {
    "alg1-preserver": _alg1(PRESERVER),
    "alg1-2additive": _alg1(AUGMENTED),
    "alg2-bkmp6": _alg2,
    "union-f": _union,
    "acim2": lambda g, opt: acim_2additive(g)[0],
    "bkmp6": lambda g, opt: bkmp_6additive(g)[0],
    "greedy": lambda g, opt: greedy_multiplicative(g, opt.k or 2),
    "eft": lambda g, opt: eft_multiplicative(g, opt.k or 2, opt.faults),
}


def build_pipeline(name: str, g: Graph, opt: PipelineOptions = PipelineOptions()) -> Spanner:
    try:
        builder = PIPELINES[name]
    except KeyError:
        raise ValueError(f"unknown pipeline {name!r}; choose from {', '.join(PIPELINES)}") from None
    return builder(g, opt)


@dataclass(frozen=True)
class ExperimentSpec:
    """Graphs from ``generator`` (one per size and seed) crossed with ``pipelines``.

    ``sizes`` overrides ``params["n"]``; ``sample`` switches verification to
    that many seeded fault sets; ``timing=False`` zeroes ``wall_time`` so the
    CSV is byte-reproducible.
    """

    generator: str
    params: dict = field(default_factory=dict)
    seeds: tuple[int, ...] = (0,)
    pipelines: tuple[str, ...] = ("alg1-preserver",)
    options: PipelineOptions = PipelineOptions()
    sizes: tuple[int, ...] = ()
    sample: int | None = None
    budget: float = DEFAULT_BUDGET
    timing: bool = True

    def graphs(self) -> Iterable[tuple[int, Graph]]:
        for n in self.sizes or (None,):
            params = dict(self.params) if n is None else {**self.params, "n": n}
            for seed in self.seeds:
                yield seed, generate(self.generator, seed, **params)

    def to_json(self) -> str:
        doc = asdict(self)
        doc["prng"] = prng_metadata()
        return json.dumps(doc, sort_keys=True)


@dataclass(frozen=True)
class Row:
    n: int
    m: int
    construction: str
    params: str
    spanner_edges: int
    claimed_beta: int
    observed_max_additive: int | None
    passed: bool
    wall_time: float
    witness: str = ""

    def csv_values(self) -> list[str]:
        observed = "" if self.observed_max_additive is None else str(self.observed_max_additive)
        return [
            str(self.n),
            str(self.m),
            self.construction,
            self.params,
            str(self.spanner_edges),
            str(self.claimed_beta),
            observed,
            "true" if self.passed else "false",
            f"{self.wall_time:.3f}",
        ]


def _format_params(seed: int, opt: PipelineOptions, sp: Spanner, mode: Mode) -> str:
    parts = [f"seed={seed}"]
    if "p" in sp.info:
        parts.append(f"p={sp.info['p']}")
    if opt.k is not None:
        parts.append(f"k={opt.k}")
    if opt.base is not None:
        parts.append(f"base={opt.base}")
    parts.append(f"f={sp.claim.f}")
    parts.append(f"kind={sp.claim.kind}")
    parts.append("mode=exhaustive" if mode.kind == "exhaustive" else f"mode=sampled({mode.count})")
    return ";".join(parts)


def format_witness(report: StretchReport) -> str:
    if report.witness is None:
        return ""
    s, t, F = report.witness
    items = ",".join(str(i) for i in F.items)
    return f"s={s} t={t} F={F.kind}[{items}]"


def verify_with_fallback(g: Graph, sp: Spanner, mode: Mode, budget: float, seed: int) -> StretchReport:
    """Verify in ``mode``; an over-budget exhaustive run falls back to seeded sampling."""
    try:
        return verify_claim(g, sp, mode, budget=budget)
    except VerificationError:
        if mode.kind != "exhaustive":
            raise
        return verify_claim(g, sp, sampled(FALLBACK_SAMPLES, seed), budget=budget)


def run_experiment(spec: ExperimentSpec) -> list[Row]:
    rows = []
    for seed, g in spec.graphs():
        for name in spec.pipelines:
            start = time.perf_counter()
            sp = build_pipeline(name, g, spec.options)
            mode = EXHAUSTIVE if spec.sample is None else sampled(spec.sample, seed)
            report = verify_with_fallback(g, sp, mode, spec.budget, seed)
            elapsed = time.perf_counter() - start if spec.timing else 0.0
            rows.append(
                Row(
                    g.n,
                    g.m,
                    name,
                    _format_params(seed, spec.options, sp, report.mode),
                    sp.size,
                    sp.claim.beta,
                    report.max_additive,
                    report.passed,
                    elapsed,
                    format_witness(report),
                )
            )
    return rows


def rows_to_csv(rows: Sequence[Row]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow(row.csv_values())
    return buf.getvalue()


def rows_from_csv(text: str, witnesses: dict[int, str] | None = None) -> list[Row]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    rows = []
    for i, rec in enumerate(reader):
        observed = rec["observed_max_additive"]
        rows.append(
            Row(
                int(rec["n"]),
                int(rec["m"]),
                rec["construction"],
                rec["params"],
                int(rec["spanner_edges"]),
                int(rec["claimed_beta"]),
                int(observed) if observed else None,
                rec["pass"] == "true",
                float(rec["wall_time"]),
                (witnesses or {}).get(i, ""),
            )
        )
    return rows


def summarize(rows: Sequence[Row]) -> str:
    """``k/N pass``, failures first with witnesses, then worst observed stretch per construction."""
    if not rows:
        raise ValueError("no rows")
    lines = [f"{sum(r.passed for r in rows)}/{len(rows)} pass"]
    for r in sorted(rows, key=lambda r: r.passed):
        status = "PASS" if r.passed else "FAIL"
        line = f"{status} {r.construction} n={r.n} m={r.m} {r.params} observed={r.observed_max_additive} claim={r.claimed_beta}"
        if not r.passed and r.witness:
            line += f" witness: {r.witness}"
        lines.append(line)
    worst: dict[str, tuple[int, int]] = {}
    for r in rows:
        obs = -1 if r.observed_max_additive is None else r.observed_max_additive
        prev = worst.get(r.construction, (-1, r.claimed_beta))
        worst[r.construction] = (max(prev[0], obs), max(prev[1], r.claimed_beta))
    for name, (obs, claim) in worst.items():
        lines.append(f"worst {name}: observed {obs if obs >= 0 else '-'} vs claim {claim}")
    return "\n".join(lines)


def fit_exponent(rows: Sequence[Row], construction: str) -> float:
    """Least-squares slope of log(spanner edges) against log(n), averaging rows per n."""
    by_n: dict[int, list[int]] = {}
    for r in rows:
        if r.construction == construction:
            by_n.setdefault(r.n, []).append(r.spanner_edges)
    if len(by_n) < 2:
        raise ValueError(f"need at least two sizes for {construction!r}")
    ns = sorted(by_n)
    x = np.log(ns)
    y = np.log([sum(by_n[n]) / len(by_n[n]) for n in ns])
    return float(np.polyfit(x, y, 1)[0])


def witnesses_json(rows: Sequence[Row]) -> str:
    return "\n".join(json.dumps({"row": i, "witness": r.witness}) for i, r in enumerate(rows) if r.witness) + "\n"


def load_witnesses(text: str) -> dict[int, str]:
    out = {}
    for line in text.splitlines():
        if line.strip():
            rec = json.loads(line)
            out[int(rec["row"])] = rec["witness"]
    return out


__all__ = [
    "COLUMNS",
    "PIPELINES",
    "ExperimentSpec",
    "PipelineOptions",
    "Row",
    "build_pipeline",
    "fit_exponent",
    "run_experiment",
    "rows_from_csv",
    "rows_to_csv",
    "summarize",
]
