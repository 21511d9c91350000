"""Monogamy bounds on squared negativity under AB|C1..C(N-2) and ABC1|C2..C(N-2).

Every evaluator returns a :class:`BoundReport`. Pair terms use the two-qubit
closed forms: CREN is the Wootters concurrence and CRENOA the concurrence of
assistance of the pair's reduced state. Lower bounds that come out negative
are reported as-is (trivially satisfied).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .linalg import EPS_NORM, num_qubits, partial_trace, schmidt
from .measures import coa_2q, concurrence_2q, concurrence_pure, linear_entropy, negativity
from .states import (
    Bipartition,
    PureState,
    WClassParams,
    fixture_example3,
    fixture_example4,
    reduced_two_qubit,
)

LOWER, UPPER = "lower", "upper"


@dataclass(frozen=True)
class PartitionContext:
    """Assignment of register qubits to the roles A, B, C1, C2, ..."""

    n_qubits: int
    a: int
    b: int
    c: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(int(q) for q in self.c))
        roles = [self.a, self.b, *self.c]
        if sorted(roles) != list(range(self.n_qubits)):
            raise DomainError(f"roles {self.describe()} must cover qubits 0..{self.n_qubits - 1} exactly once")

    @classmethod
    def default(cls, n_qubits: int) -> "PartitionContext":
        """A = qubit 0, B = qubit 1, C_i = qubit i + 1."""
        if n_qubits < 3:
            raise DomainError(f"monogamy roles need N >= 3 qubits, got {n_qubits}")
        return cls(n_qubits, 0, 1, tuple(range(2, n_qubits)))

    @classmethod
    def parse(cls, text: str, n_qubits: int) -> "PartitionContext":
        """Parse ``A=0,B=1,C=2,3,...``."""
        current, found = None, {"A": [], "B": [], "C": []}
        for token in (t.strip() for t in text.split(",")):
            if "=" in token:
                current, token = (s.strip() for s in token.split("=", 1))
                if current not in found:
                    raise DomainError(f"unknown role label {current!r} in {text!r}")
            if current is None or not token.lstrip("-").isdigit():
                raise DomainError(f"cannot parse roles {text!r}")
            found[current].append(int(token))
        if len(found["A"]) != 1 or len(found["B"]) != 1:
            raise DomainError(f"roles need exactly one A and one B qubit: {text!r}")
        return cls(n_qubits, found["A"][0], found["B"][0], tuple(found["C"]))

    @property
    def ab_cut(self) -> Bipartition:
        return Bipartition((self.a, self.b), self.c)

    @property
    def abc1_cut(self) -> Bipartition:
        return Bipartition((self.a, self.b, self.c[0]), self.c[1:])

    @property
    def j_set(self) -> tuple[int, ...]:
        """Partners of C1 in the ABC1|C2.. bounds: A, B, C2, ..."""
        return (self.a, self.b, *self.c[1:])

    def swapped(self) -> "PartitionContext":
        return PartitionContext(self.n_qubits, self.b, self.a, self.c)

    def describe(self) -> str:
        return f"A={self.a},B={self.b},C={','.join(map(str, self.c))}"


@dataclass(frozen=True)
class Bound:
    name: str
    side: str
    value: float
    satisfied: bool
    slack: float


@dataclass
class BoundReport:
    quantity_name: str
    quantity_value: float
    bounds: list[Bound]
    schmidt_rank: int
    details: dict = field(default_factory=dict)

    @property
    def satisfied(self) -> bool:
        return all(b.satisfied for b in self.bounds)

    def bound(self, name: str) -> Bound:
        for b in self.bounds:
            if b.name == name:
                return b
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "quantity_name": self.quantity_name,
            "quantity_value": self.quantity_value,
            "schmidt_rank": self.schmidt_rank,
            "satisfied": self.satisfied,
            "bounds": [vars(b).copy() for b in self.bounds],
            "details": _jsonable(self.details),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def make_report(quantity_name: str, quantity: float, bounds: Iterable[tuple[str, str, float]],
                rank: int, tol: float = EPS_NORM, **details) -> BoundReport:
    """Build a report; ``slack`` is positive when an inequality holds."""
    out = []
    for name, side, value in bounds:
        slack = quantity - value if side == LOWER else value - quantity
        out.append(Bound(name, side, float(value), bool(slack >= -tol), float(slack)))
    return BoundReport(quantity_name, float(quantity), out, int(rank), details)


def rank_prefactor(r: int) -> float:
    return r * (r - 1) / 2


class PairTable:
    """Cached unclamped two-qubit CREN (= concurrence) and CRENOA (= COA) of a state."""

    def __init__(self, psi: PureState):
        self.psi = psi
        self._cache: dict[tuple[int, int], tuple[float, float]] = {}

    def _get(self, i: int, j: int) -> tuple[float, float]:
        key = (min(i, j), max(i, j))
        if key not in self._cache:
            rho = reduced_two_qubit(self.psi, *key)
            self._cache[key] = (concurrence_2q(rho), coa_2q(rho))
        return self._cache[key]

    def cren(self, i: int, j: int) -> float:
        return self._get(i, j)[0]

    def crenoa(self, i: int, j: int) -> float:
        return self._get(i, j)[1]


def _table(psi: PureState, table: PairTable | None) -> PairTable:
    if table is None or table.psi is not psi:
        return PairTable(psi)
    return table


def _ctx(psi: PureState, ctx: PartitionContext | None, min_n: int) -> PartitionContext:
    if psi.n_qubits < min_n:
        raise DomainError(f"this bound needs N >= {min_n} qubits, got {psi.n_qubits}")
    if ctx is None:
        return PartitionContext.default(psi.n_qubits)
    if ctx.n_qubits != psi.n_qubits:
        raise DomainError(f"roles cover {ctx.n_qubits} qubits, state has {psi.n_qubits}")
    return ctx


def _n2(psi: PureState, cut: Bipartition) -> float:
    return negativity(psi, cut) ** 2


def _thm1_terms(t: PairTable, ctx: PartitionContext) -> tuple[float, float]:
    a_side = sum(t.cren(ctx.a, c) ** 2 - t.crenoa(ctx.b, c) ** 2 for c in ctx.c)
    b_side = sum(t.cren(ctx.b, c) ** 2 - t.crenoa(ctx.a, c) ** 2 for c in ctx.c)
    return a_side, b_side


def _assisted_bracket(t: PairTable, ctx: PartitionContext) -> float:
    """``2 Na^2(AB) + sum_i (Na^2(AC_i) + Na^2(BC_i))``."""
    return 2 * t.crenoa(ctx.a, ctx.b) ** 2 + sum(
        t.crenoa(ctx.a, c) ** 2 + t.crenoa(ctx.b, c) ** 2 for c in ctx.c
    )


def thm1_lower(psi: PureState, ctx: PartitionContext | None = None, tol: float = EPS_NORM,
               table: PairTable | None = None) -> BoundReport:
    ctx, t = _ctx(psi, ctx, 3), _table(psi, table)
    a_side, b_side = _thm1_terms(t, ctx)
    return make_report(
        "N^2(AB|C)", _n2(psi, ctx.ab_cut), [("thm1", LOWER, max(a_side, b_side))],
        schmidt(psi, ctx.ab_cut).rank, tol, a_side=a_side, b_side=b_side,
    )


def thm2_upper(psi: PureState, ctx: PartitionContext | None = None, tol: float = EPS_NORM,
               table: PairTable | None = None) -> BoundReport:
    ctx, t = _ctx(psi, ctx, 3), _table(psi, table)
    r = schmidt(psi, ctx.ab_cut).rank
    bracket = _assisted_bracket(t, ctx)
    return make_report(
        "N^2(AB|C)", _n2(psi, ctx.ab_cut), [("thm2", UPPER, rank_prefactor(r) * bracket)],
        r, tol, bracket=bracket, prefactor=rank_prefactor(r),
    )


def _require_rank2(psi: PureState, ctx: PartitionContext) -> None:
    r = schmidt(psi, ctx.ab_cut).rank
    if r != 2:
        raise PreconditionError(f"Schmidt rank across {ctx.ab_cut} must be 2, measured {r}")


def cor1_upper(psi: PureState, ctx: PartitionContext | None = None, tol: float = EPS_NORM,
               table: PairTable | None = None) -> BoundReport:
    ctx, t = _ctx(psi, ctx, 3), _table(psi, table)
    _require_rank2(psi, ctx)
    return make_report("N^2(AB|C)", _n2(psi, ctx.ab_cut), [("cor1", UPPER, _assisted_bracket(t, ctx))], 2, tol)


def _triangle(name: str, x: float, y: float, z: float, rank: int, tol: float, **details) -> BoundReport:
    """Bounds on ``z`` from ``|x - y| <= z <= x + y`` and the three triangle relations."""
    return make_report(
        name, z,
        [
            ("abs_difference", LOWER, abs(x - y)),
            ("sum", UPPER, x + y),
            ("triangle_x", LOWER, x - y),
            ("triangle_y", LOWER, y - x),
            ("triangle_z", UPPER, x + y),
        ],
        rank, tol, x=x, y=y, **details,
    )


def cor2_relations(psi: PureState, ctx: PartitionContext | None = None, tol: float = EPS_NORM) -> BoundReport:
    """Squared-negativity triangle among A|rest, B|rest and AB|C for rank-2 AB|C states.

    ``details["equalities_hold"]`` records whether both sandwich bounds are
    tight; they must be when B is unentangled from the rest.
    """
    ctx = _ctx(psi, ctx, 3)
    _require_rank2(psi, ctx)
    n = psi.n_qubits
    x = _n2(psi, Bipartition.split((ctx.a,), n))
    y = _n2(psi, Bipartition.split((ctx.b,), n))
    z = _n2(psi, ctx.ab_cut)
    tight = abs(z - abs(x - y)) <= tol and abs(z - (x + y)) <= tol
    return _triangle("N^2(AB|C)", x, y, z, 2, tol, b_unentangled=bool(y <= tol), equalities_hold=bool(tight))


def concurrence_triangle(psi: PureState, ctx: PartitionContext | None = None, tol: float = EPS_NORM) -> BoundReport:
    ctx = _ctx(psi, ctx, 3)
    n = psi.n_qubits
    x = concurrence_pure(psi, Bipartition.split((ctx.a,), n)) ** 2
    y = concurrence_pure(psi, Bipartition.split((ctx.b,), n)) ** 2
    z = concurrence_pure(psi, ctx.ab_cut) ** 2
    return _triangle("C^2(AB|C)", x, y, z, schmidt(psi, ctx.ab_cut).rank, tol)


def linear_entropy_triangle(rho_ab, cut: Bipartition, tol: float = EPS_NORM) -> BoundReport:
    """``T(A) + T(B) >= T(AB) >= |T(A) - T(B)|`` for a state over the qubits of ``cut``."""
    rho_ab = np.asarray(rho_ab, dtype=complex)
    cut.check(num_qubits(rho_ab.shape[0]))
    t_a = linear_entropy(partial_trace(rho_ab, cut.block_a))
    t_b = linear_entropy(partial_trace(rho_ab, cut.block_b))
    t_ab = linear_entropy(rho_ab)
    return make_report(
        "T(AB)", t_ab, [("abs_difference", LOWER, abs(t_a - t_b)), ("sum", UPPER, t_a + t_b)],
        0, tol, t_a=t_a, t_b=t_b,
    )


def thm3_lower(psi: PureState, ctx: PartitionContext | None = None, tol: float = EPS_NORM,
               table: PairTable | None = None) -> BoundReport:
    """Two lower bounds on ``N^2(ABC1|C2..)``, both using the AB|C.. Schmidt rank.

    For rank 1 the inverse prefactor ``2 / (r (r - 1))`` is replaced by 1; the
    ``thm1`` maximum is then non-positive, so the bound stays valid.
    """
    ctx, t = _ctx(psi, ctx, 4), _table(psi, table)
    r = schmidt(psi, ctx.ab_cut).rank
    r_abc1 = schmidt(psi, ctx.abc1_cut).rank
    c1 = ctx.c[0]
    inverse = 2 / (r * (r - 1)) if r >= 2 else 1.0
    bound1 = inverse * max(_thm1_terms(t, ctx)) - sum(t.crenoa(c1, j) ** 2 for j in ctx.j_set)
    bound2 = sum(t.cren(c1, j) ** 2 for j in ctx.j_set) - rank_prefactor(r) * _assisted_bracket(t, ctx)
    return make_report(
        "N^2(ABC1|C2)", _n2(psi, ctx.abc1_cut),
        [("thm3_bound1", LOWER, bound1), ("thm3_bound2", LOWER, bound2)],
        r, tol, rank_ab=r, rank_abc1=r_abc1,
    )


def thm4_upper(psi: PureState, ctx: PartitionContext | None = None, tol: float = EPS_NORM,
               table: PairTable | None = None) -> BoundReport:
    ctx, t = _ctx(psi, ctx, 4), _table(psi, table)
    r = schmidt(psi, ctx.abc1_cut).rank
    c1 = ctx.c[0]
    bracket = _assisted_bracket(t, ctx) + sum(t.crenoa(c1, j) ** 2 for j in ctx.j_set)
    return make_report(
        "N^2(ABC1|C2)", _n2(psi, ctx.abc1_cut), [("thm4", UPPER, rank_prefactor(r) * bracket)],
        r, tol, bracket=bracket, rank_ab=schmidt(psi, ctx.ab_cut).rank,
    )


def cren_sandwich(psi: PureState, focus: int = 0, tol: float = EPS_NORM,
                  table: PairTable | None = None) -> BoundReport:
    """``sum_i N~^2(rho_{A B_i}) <= C^2(A|rest) <= sum_i Na~^2(rho_{A B_i})`` with A = ``focus``."""
    if psi.n_qubits < 2:
        raise DomainError("the sandwich needs at least two qubits")
    t = _table(psi, table)
    cut = Bipartition.split((focus,), psi.n_qubits)
    others = cut.block_b
    return make_report(
        "C^2(A|rest)", concurrence_pure(psi, cut) ** 2,
        [
            ("cren_sum", LOWER, sum(t.cren(focus, q) ** 2 for q in others)),
            ("crenoa_sum", UPPER, sum(t.crenoa(focus, q) ** 2 for q in others)),
        ],
        schmidt(psi, cut).rank, tol, focus=focus,
    )


def negativity_rank_sandwich(psi: PureState, cut: Bipartition, tol: float = EPS_NORM) -> BoundReport:
    """``C <= N <= sqrt(r (r - 1) / 2) C`` for a pure state across ``cut``."""
    r = schmidt(psi, cut).rank
    c = concurrence_pure(psi, cut)
    return make_report(
        "N", negativity(psi, cut),
        [("concurrence", LOWER, c), ("rank_scaled_concurrence", UPPER, math.sqrt(rank_prefactor(r)) * c)],
        r, tol, cut=str(cut),
    )


def tian_upper(psi: PureState, ctx: PartitionContext | None = None, tol: float = EPS_NORM,
               table: PairTable | None = None) -> BoundReport:
    """The ``thm2`` bracket without the rank prefactor; only valid for rank 2."""
    ctx, t = _ctx(psi, ctx, 3), _table(psi, table)
    return make_report(
        "N^2(AB|C)", _n2(psi, ctx.ab_cut), [("tian_upper", UPPER, _assisted_bracket(t, ctx))],
        schmidt(psi, ctx.ab_cut).rank, tol,
    )


def tian_lower(psi: PureState, ctx: PartitionContext | None = None, tol: float = EPS_NORM,
               table: PairTable | None = None) -> BoundReport:
    """``|sum_i [Na^2(AC_i) - Na^2(BC_i)]|``, a lower bound that can fail."""
    ctx, t = _ctx(psi, ctx, 3), _table(psi, table)
    value = abs(sum(t.crenoa(ctx.a, c) ** 2 - t.crenoa(ctx.b, c) ** 2 for c in ctx.c))
    return make_report(
        "N^2(AB|C)", _n2(psi, ctx.ab_cut), [("tian_lower", LOWER, value)],
        schmidt(psi, ctx.ab_cut).rank, tol,
    )


def _merge(name: str, reports: Sequence[BoundReport], **details) -> BoundReport:
    first = reports[0]
    merged = BoundReport(first.quantity_name, first.quantity_value, [], first.schmidt_rank, dict(details))
    for rep in reports:
        merged.bounds.extend(rep.bounds)
        merged.details.update(rep.details)
    merged.details["report"] = name
    return merged


def tian_counterexamples(tol: float = EPS_NORM) -> tuple[BoundReport, BoundReport]:
    """Reports on the two fixtures where the prefactor-free bounds fail.

    The first shows ``N^2 = 4`` above the rank-free upper expression ``32/9``
    with the rank-scaled bound holding; the second shows the COA-only lower
    expression ``2`` above ``N^2 = 1`` while the ``thm1`` bound (0) holds.
    """
    ex3 = fixture_example3()
    t3 = PairTable(ex3)
    first = _merge("example3", [thm2_upper(ex3, tol=tol, table=t3), tian_upper(ex3, tol=tol, table=t3)])
    ex4 = fixture_example4()
    t4 = PairTable(ex4)
    second = _merge("example4", [thm1_lower(ex4, tol=tol, table=t4), tian_lower(ex4, tol=tol, table=t4)])
    return first, second


@dataclass(frozen=True)
class WClassClosedForms:
    """Printed W-class formulas for a 2|rest or 3|rest split.

    ``lower`` is the ``thm1`` form (split 2) or the ``thm3_bound2`` form
    (split 3) as printed, with an absolute value; ``lower_signed`` is the same
    expression without it, which is what :func:`thm3_lower` evaluates to.
    """

    split: int
    quantity: float
    lower: float
    lower_signed: float
    upper: float
    pairs: dict


def wclass_closed_forms(params: WClassParams, split: int) -> WClassClosedForms:
    w = params.weights
    n = params.n
    if split == 2:
        head, tail = w[0] + w[1], w[2:].sum()
        quantity = 4 * head * tail
        lower = 4 * abs(w[0] - w[1]) * tail
        lower_signed = lower
        upper = 8 * w[0] * w[1] + 4 * head * tail
    elif split == 3:
        if n < 4:
            raise DomainError("the 3|rest split needs N >= 4")
        tail = w[3:].sum()
        quantity = 4 * w[:3].sum() * tail
        lower = 4 * abs(w[2] - w[0] - w[1]) * tail - 8 * w[0] * w[1]
        lower_signed = 4 * (w[2] - w[0] - w[1]) * tail - 8 * w[0] * w[1]
        upper = 8 * w[0] * w[1] + 8 * w[2] * (w[0] + w[1]) + 4 * w[:3].sum() * tail
    else:
        raise DomainError(f"split must be 2 or 3, got {split}")
    amp = np.abs(np.array(params.a))
    pairs = {(i, j): float(2 * amp[i] * amp[j]) for i in range(n) for j in range(i + 1, n)}
    return WClassClosedForms(split, float(quantity), float(lower), float(lower_signed), float(upper), pairs)


def evaluate_all(psi: PureState, ctx: PartitionContext | None = None, tol: float = EPS_NORM,
                 table: PairTable | None = None) -> dict[str, BoundReport]:
    """Every bound that applies to ``psi`` under ``ctx``.

    The rank-2 corollaries are included only at Schmidt rank 2 across AB|C, and the
    ABC1|C2 bounds only for N >= 4.
    """
    ctx, t = _ctx(psi, ctx, 3), _table(psi, table)
    out = {
        "thm1_lower": thm1_lower(psi, ctx, tol, t),
        "thm2_upper": thm2_upper(psi, ctx, tol, t),
        "concurrence_triangle": concurrence_triangle(psi, ctx, tol),
    }
    if schmidt(psi, ctx.ab_cut).rank == 2:
        out["cor1_upper"] = cor1_upper(psi, ctx, tol, t)
        out["cor2_relations"] = cor2_relations(psi, ctx, tol)
    if psi.n_qubits >= 4:
        out["thm3_lower"] = thm3_lower(psi, ctx, tol, t)
        out["thm4_upper"] = thm4_upper(psi, ctx, tol, t)
    return out
