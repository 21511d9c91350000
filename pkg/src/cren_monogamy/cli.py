"""Command line front end.

Subcommands: measure, bounds, sweep-w, random-suite, fixtures, oracle-check.
Each exits 0 iff every verdict it checks is satisfied.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import DomainError
from .linalg import EPS_NORM, schmidt
from .measures import coa_2q, concurrence_2q, concurrence_pure, cren_oracle, negativity, pair_measures
from .monogamy import (
    BoundReport,
    PairTable,
    PartitionContext,
    cor1_upper,
    cren_sandwich,
    evaluate_all,
    linear_entropy_triangle,
    negativity_rank_sandwich,
    thm1_lower,
    thm3_lower,
    thm4_upper,
    tian_counterexamples,
    tian_lower,
    tian_upper,
    wclass_closed_forms,
)
from .states import (
    Bipartition,
    PureState,
    WClassParams,
    bell,
    fixture_example3,
    fixture_example4,
    ghz,
    haar_random_pure,
    load_state,
    w_class_state,
)

FIXTURES = ("example1", "example2", "example3", "example4", "bell", "ghz")


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    tolerance: float = EPS_NORM
    trials: int = 1000
    output_path: str | None = None
    output_format: str = "json"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance}")
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        if self.output_format not in ("csv", "json"):
            raise DomainError(f"unknown output format {self.output_format!r}")


def fixture(name: str, amps: Sequence[float] | None = None) -> PureState:
    if name == "example1":
        a = amps if amps else [1 / math.sqrt(3)] * 3
        return w_class_state(WClassParams(tuple(a)))
    if name == "example2":
        a = amps if amps else [0.5] * 4
        return w_class_state(WClassParams(tuple(a)))
    table = {"example3": fixture_example3, "example4": fixture_example4, "bell": bell, "ghz": ghz}
    if name not in table:
        raise DomainError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return table[name]()


def _parse_block(text: str) -> list[int]:
    text = text.strip()
    if not text:
        raise DomainError("empty block in cut")
    if text.isalpha():
        return [ord(ch) - ord("A") for ch in text.upper()]
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise DomainError(f"cannot parse cut block {text!r}") from None


def parse_cut(text: str, n_qubits: int) -> Bipartition:
    """``0,1|2,3`` by index, or ``AB|CD`` with letters naming qubits 0, 1, 2, ..."""
    if text.count("|") != 1:
        raise DomainError(f"cut must have exactly one '|': {text!r}")
    left, right = text.split("|")
    cut = Bipartition(tuple(_parse_block(left)), tuple(_parse_block(right)))
    cut.check(n_qubits)
    return cut


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _emit(args, payload, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    fmt_name = args.format or args.default_format
    if fmt_name == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, float) else v for v in row])
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _source(args) -> PureState:
    if args.state and args.fixture:
        raise DomainError("give either --state or --fixture, not both")
    if args.state:
        return load_state(args.state)
    if args.fixture:
        amps = [float(a) for a in args.amps.split(",")] if args.amps else None
        return fixture(args.fixture, amps)
    raise DomainError("a state source is required (--state PATH or --fixture NAME)")


def cmd_measure(args) -> int:
    psi = _source(args)
    cut = parse_cut(args.cut, psi.n_qubits) if args.cut else Bipartition.split((0,), psi.n_qubits)
    sd = schmidt(psi, cut)
    pairs = []
    for i, j in combinations(range(psi.n_qubits), 2):
        pm = pair_measures(psi, i, j)
        pairs.append({"i": i, "j": j, **vars(pm)})
    payload = {
        "cut": str(cut),
        "concurrence": concurrence_pure(psi, cut),
        "negativity": negativity(psi, cut),
        "schmidt_rank": sd.rank,
        "schmidt_coefficients": sd.coefficients.tolist(),
        "pairs": pairs,
    }
    rows = [
        ["cut", "", "concurrence", payload["concurrence"]],
        ["cut", "", "negativity", payload["negativity"]],
        ["cut", "", "schmidt_rank", sd.rank],
    ]
    rows += [["cut", "", f"schmidt_coefficient_{k}", float(v)] for k, v in enumerate(sd.coefficients)]
    for p in pairs:
        for key in ("concurrence", "coa", "negativity", "cren", "crenoa"):
            rows.append(["pair", f"{p['i']},{p['j']}", key, p[key]])
    _emit(args, payload, ["scope", "pair", "quantity", "value"], rows)
    return 0


def _report_rows(name: str, rep: BoundReport) -> list[list]:
    return [
        [name, rep.quantity_name, rep.quantity_value, b.name, b.side, b.value, str(b.satisfied).lower(), b.slack,
         rep.schmidt_rank]
        for b in rep.bounds
    ]


def cmd_bounds(args) -> int:
    psi = _source(args)
    ctx = PartitionContext.parse(args.roles, psi.n_qubits) if args.roles else PartitionContext.default(psi.n_qubits)
    reports = evaluate_all(psi, ctx, args.tol)
    ok = all(r.satisfied for r in reports.values())
    checks = {"tian_upper": tian_upper(psi, ctx, args.tol), "tian_lower": tian_lower(psi, ctx, args.tol)}
    notes = []
    for name, rep in checks.items():
        for b in rep.bounds:
            if not b.satisfied:
                notes.append(f"{name}: cited bound {fmt(b.value)} contradicts N^2 = {fmt(rep.quantity_value)}")
    payload = {
        "roles": ctx.describe(),
        "satisfied": ok,
        "reports": {k: v.to_dict() for k, v in reports.items()},
        "cited_bounds": {k: v.to_dict() for k, v in checks.items()},
        "notes": notes,
    }
    rows = [row for k, v in reports.items() for row in _report_rows(k, v)]
    rows += [row for k, v in checks.items() for row in _report_rows(k, v)]
    _emit(args, payload, ["report", "quantity_name", "quantity", "bound", "side", "value", "satisfied", "slack",
                          "schmidt_rank"], rows)
    for note in notes:
        print(note, file=sys.stderr)
    return 0 if ok else 1


def sweep_w(n: int = 3, rest_weight: float | None = None, steps: int = 100, tol: float = EPS_NORM) -> list[dict]:
    """W-class sweep of ``|a_2|^2`` with ``|a_1|^2 >= |a_2|^2``.

    The tail ``a_3 .. a_N`` carries ``rest_weight`` in equal shares (default
    ``1/N``); ``|a_2|^2`` runs over ``[0, (1 - rest_weight) / 2]``.
    """
    if n < 3:
        raise DomainError("the sweep needs N >= 3")
    if steps < 1:
        raise DomainError("steps must be >= 1")
    w = 1 / n if rest_weight is None else rest_weight
    if not 0 < w < 1:
        raise DomainError(f"rest weight must lie strictly between 0 and 1, got {w}")
    head = 1 - w
    rows = []
    for k in range(steps + 1):
        a2sq = head / 2 * k / steps
        a1sq = head - a2sq
        amps = [math.sqrt(a1sq), math.sqrt(a2sq)] + [math.sqrt(w / (n - 2))] * (n - 2)
        psi = w_class_state(WClassParams(tuple(amps)))
        t = PairTable(psi)
        low = thm1_lower(psi, tol=tol, table=t)
        up = cor1_upper(psi, tol=tol, table=t)
        rows.append({
            "a2_sq": a2sq,
            "quantity": low.quantity_value,
            "thm1_lower": low.bounds[0].value,
            "cor1_upper": up.bounds[0].value,
            "satisfied": low.satisfied and up.satisfied,
        })
    return rows


def cmd_sweep_w(args) -> int:
    rows = sweep_w(args.n, args.rest_weight, args.steps, args.tol)
    header = ["a2_sq", "quantity", "thm1_lower", "cor1_upper"]
    _emit(args, {"rows": rows}, header, [[r[h] for h in header] for r in rows])
    return 0 if all(r["satisfied"] for r in rows) else 1


def _all_cuts(n: int):
    for size in range(1, n):
        for rest in combinations(range(1, n), size - 1):
            yield Bipartition.split((0, *rest), n)


def suite_reports(psi: PureState, tol: float = EPS_NORM) -> dict[str, BoundReport]:
    """Every randomized check applied to one state."""
    n = psi.n_qubits
    ctx = PartitionContext.default(n)
    t = PairTable(psi)
    out = evaluate_all(psi, ctx, tol, t)
    for q in range(n):
        out[f"cren_sandwich[{q}]"] = cren_sandwich(psi, q, tol, t)
    out["linear_entropy_triangle[A|B]"] = linear_entropy_triangle(psi.reduced([0, 1]), Bipartition((0,), (1,)), tol)
    out["linear_entropy_triangle[AB|C1]"] = linear_entropy_triangle(
        psi.reduced([0, 1, 2]), Bipartition((0, 1), (2,)), tol)
    for cut in _all_cuts(n):
        out[f"rank_sandwich[{cut}]"] = negativity_rank_sandwich(psi, cut, tol)
    return out


def random_suite(cfg: RunConfig, sizes: Sequence[int]) -> dict:
    """Run :func:`suite_reports` on ``cfg.trials`` Haar states per size.

    Sample ``k`` of size ``n`` is ``haar_random_pure(n, cfg.seed + k)``.
    """
    result = {"seed": cfg.seed, "tolerance": cfg.tolerance, "trials": cfg.trials, "sizes": {}}
    failures = 0
    for n in sizes:
        if n < 3:
            raise DomainError(f"random suite sizes must be >= 3, got {n}")
        checks: dict[str, dict] = {}
        failing = []
        for k in range(cfg.trials):
            seed = cfg.seed + k
            bad = False
            for name, rep in suite_reports(haar_random_pure(n, seed), cfg.tolerance).items():
                for b in rep.bounds:
                    key = name.split("[")[0] + "." + b.name
                    entry = checks.setdefault(key, {"pass": 0, "fail": 0, "worst_slack": math.inf})
                    entry["pass" if b.satisfied else "fail"] += 1
                    entry["worst_slack"] = min(entry["worst_slack"], b.slack)
                    bad |= not b.satisfied
            if bad:
                failing.append(seed)
        failures += len(failing)
        result["sizes"][str(n)] = {"checks": dict(sorted(checks.items())), "failing_seeds": failing}
    result["failures"] = failures
    return result


def cmd_random_suite(args) -> int:
    cfg = _config(args)
    sizes = [int(s) for s in args.n_qubits.split(",")]
    summary = random_suite(cfg, sizes)
    rows = [
        [n, key, c["pass"], c["fail"], c["worst_slack"]]
        for n, block in summary["sizes"].items()
        for key, c in block["checks"].items()
    ]
    _emit(args, summary, ["n_qubits", "check", "pass", "fail", "worst_slack"], rows)
    return 0 if summary["failures"] == 0 else 1


def _config(args) -> RunConfig:
    return RunConfig(seed=args.seed, tolerance=args.tol, trials=args.trials, output_path=args.out,
                     output_format=args.format or args.default_format)


def fixture_table(tol: float = EPS_NORM) -> list[dict]:
    """Reference values from the worked examples beside the computed values."""
    rows = []

    def add(name, expected, computed, verdict=None):
        delta = abs(computed - expected)
        ok = delta <= tol
        rows.append({"name": name, "expected": float(expected), "computed": float(computed), "delta": delta,
                     "verdict": ("ok" if ok else "MISMATCH") if verdict is None else verdict, "ok": ok})

    ex3, ex4 = fixture_example3(), fixture_example4()
    ab_cd = Bipartition((0, 1), (2, 3))
    radical = math.sqrt(3 + 2 * math.sqrt(2)) / 3 + math.sqrt(3 - 2 * math.sqrt(2)) / 3
    add("example3.negativity", 2, negativity(ex3, ab_cd))
    add("example3.schmidt_rank", 3, schmidt(ex3, ab_cd).rank)
    add("example3.N2", 4, negativity(ex3, ab_cd) ** 2)
    for label, pair in (("AB", (0, 1)), ("AD", (0, 3)), ("BC", (1, 2))):
        add(f"example3.crenoa_{label}", 2 / 3, coa_2q(ex3.reduced(list(pair))))
    for label, pair in (("AC", (0, 2)), ("BD", (1, 3))):
        add(f"example3.crenoa_{label}", radical, coa_2q(ex3.reduced(list(pair))))
    rep3, rep4 = tian_counterexamples(tol)
    add("example3.thm2_upper", 32 / 3, rep3.bound("thm2").value)
    tu = rep3.bound("tian_upper")
    add("example3.tian_upper", 32 / 9, tu.value,
        None if tu.satisfied else f"violates N^2={rep3.quantity_value:.6g}")

    add("example4.N2", 1, negativity(ex4, ab_cd) ** 2)
    for label, pair in (("AC", (0, 2)), ("AD", (0, 3))):
        rho = ex4.reduced(list(pair))
        add(f"example4.crenoa_{label}", 1, coa_2q(rho))
        add(f"example4.cren_{label}", 0, concurrence_2q(rho))
    for label, pair in (("BC", (1, 2)), ("BD", (1, 3))):
        rho = ex4.reduced(list(pair))
        add(f"example4.crenoa_{label}", 0, coa_2q(rho))
        add(f"example4.cren_{label}", 0, concurrence_2q(rho))
    tl = rep4.bound("tian_lower")
    add("example4.tian_rhs", 2, tl.value, None if tl.satisfied else f"violates N^2={rep4.quantity_value:.6g}")
    add("example4.thm1_lower", 0, rep4.bound("thm1").value)

    uniform3 = WClassParams((1 / math.sqrt(3),) * 3)
    w3 = w_class_state(uniform3)
    cf = wclass_closed_forms(uniform3, 2)
    add("example1.uniform3.N2", cf.quantity, thm1_lower(w3).quantity_value)
    add("example1.uniform3.thm1_lower", cf.lower, thm1_lower(w3).bounds[0].value)
    add("example1.uniform3.cor1_upper", cf.upper, cor1_upper(w3).bounds[0].value)
    add("example1.uniform3.pair", 2 / 3, coa_2q(w3.reduced([0, 1])))
    sweep = sweep_w(3, 1 / 3, 100, tol)
    for key in ("quantity", "thm1_lower", "cor1_upper"):
        add(f"figure1.start.{key}", 8 / 9, sweep[0][key])
    for key, value in (("thm1_lower", 0.0), ("quantity", 8 / 9), ("cor1_upper", 16 / 9)):
        add(f"figure1.end.{key}", value, sweep[-1][key])

    uniform4 = WClassParams((0.5,) * 4)
    w4 = w_class_state(uniform4)
    cf4 = wclass_closed_forms(uniform4, 3)
    add("example2.uniform4.N2", cf4.quantity, thm4_upper(w4).quantity_value)
    add("example2.uniform4.thm4_upper", cf4.upper, thm4_upper(w4).bounds[0].value)
    edge = WClassParams((0.0, 0.0, math.sqrt(0.3), math.sqrt(0.7)))
    we = w_class_state(edge)
    cfe = wclass_closed_forms(edge, 3)
    add("example2.a1=a2=0.thm3_bound2", cfe.lower, thm3_lower(we).bound("thm3_bound2").value)
    add("example2.a1=a2=0.thm4_upper", cfe.upper, thm4_upper(we).bounds[0].value)
    return rows


def cmd_fixtures(args) -> int:
    rows = fixture_table(args.tol)
    header = ["name", "expected", "computed", "delta", "verdict"]
    _emit(args, {"rows": rows}, header, [[r[h] for h in header] for r in rows])
    return 0 if all(r["ok"] for r in rows) else 1


def oracle_check(cfg: RunConfig, samples: int) -> dict:
    """Compare sampled decomposition averages with the closed forms.

    State ``k`` is the (0, 1) reduction of ``haar_random_pure(4, cfg.seed + k)``.
    """
    worst_low, worst_high, violations = math.inf, math.inf, []
    for k in range(cfg.trials):
        seed = cfg.seed + k
        rho = haar_random_pure(4, seed).reduced([0, 1])
        lo, hi = cren_oracle(rho, samples, seed)
        c, ca = concurrence_2q(rho), coa_2q(rho)
        worst_low, worst_high = min(worst_low, lo - c), min(worst_high, ca - hi)
        if c > lo + cfg.tolerance or hi > ca + cfg.tolerance:
            violations.append(seed)
    return {"states": cfg.trials, "samples": samples, "seed": cfg.seed, "violations": violations,
            "min_margin_cren": worst_low, "min_margin_crenoa": worst_high}


def cmd_oracle_check(args) -> int:
    summary = oracle_check(_config(args), args.samples)
    rows = [[k, summary[k]] for k in ("states", "samples", "min_margin_cren", "min_margin_crenoa")]
    rows.append(["violations", len(summary["violations"])])
    _emit(args, summary, ["field", "value"], rows)
    return 0 if not summary["violations"] else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=EPS_NORM)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"))

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--state", help="state JSON file")
    source.add_argument("--fixture", choices=FIXTURES)
    source.add_argument("--amps", help="comma-separated W amplitudes for example1/example2")

    parser = argparse.ArgumentParser(prog="cren-monogamy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", parents=[common, source], help="measures across a cut")
    p.add_argument("--cut", help="e.g. 0,1|2,3 or AB|CD (default: 0|rest)")
    p.set_defaults(func=cmd_measure, default_format="json")

    p = sub.add_parser("bounds", parents=[common, source], help="evaluate all monogamy bounds")
    p.add_argument("--roles", help="e.g. A=0,B=1,C=2,3 (default: A=0, B=1, C=rest)")
    p.set_defaults(func=cmd_bounds, default_format="json")

    p = sub.add_parser("sweep-w", parents=[common], help="W-class sweep over |a2|^2")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--rest-weight", type=float, help="total weight of a3..aN (default 1/N)")
    p.add_argument("--steps", type=int, default=100)
    p.set_defaults(func=cmd_sweep_w, default_format="csv")

    p = sub.add_parser("random-suite", parents=[common], help="bounds on Haar-random states")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--n-qubits", default="3,4,5")
    p.set_defaults(func=cmd_random_suite, default_format="json")

    p = sub.add_parser("fixtures", parents=[common], help="regression table of the worked examples")
    p.set_defaults(func=cmd_fixtures, default_format="csv")

    p = sub.add_parser("oracle-check", parents=[common], help="decomposition-sampling consistency check")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--samples", type=int, default=500)
    p.set_defaults(func=cmd_oracle_check, default_format="json")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
