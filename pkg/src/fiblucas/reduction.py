"""Continued fractions, the Dujella–Pethő reduction and the Λ → Γ bridge.

The reduction lemma: let τ be irrational, M a positive integer, p/q a
convergent of τ with q > 6M, and ε = ‖μq‖ − M‖τq‖.  If ε > 0 there is no
solution of 0 < mτ − n + μ < A·B^(−k) with m <= M and
k >= log(Aq/ε)/log B.

When τ = p/q is rational the same conclusion holds for every m, with
ε = ‖qμ‖, because q(mτ − n + μ) lies in qμ + Z and so
|mτ − n + μ| >= ‖qμ‖/q.  :func:`dp_reduce` takes that path whenever τ is
given as a :class:`~fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence, Union

from .algebraic import ALPHA, QuadraticNumber
from .certified import (
    CertifiedReal,
    RealSource,
    alpha,
    current_policy,
    escalate,
    log_alpha,
    pi,
    realize,
    sqrt5,
)
from .equations import FORMS, EquationKind, form_exponent
from .errors import PrecisionExhausted, Undecided
from .sequences import _check_index, lucas

Real = Union[CertifiedReal, int, Fraction]


# continued fractions ------------------------------------------------------


@dataclass(frozen=True)
class CFExpansion:
    partial_quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]

    @property
    def denominators(self) -> tuple[int, ...]:
        return tuple(q for _, q in self.convergents)


def convergents(quotients: Sequence[int]) -> list[tuple[int, int]]:
    out = []
    p0, p1, q0, q1 = 0, 1, 1, 0
    for a in quotients:
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
        out.append((p1, q1))
    return out


def _certified_quotients(lo: Fraction, hi: Fraction) -> Iterator[int]:
    """Quotients shared by every real number in [lo, hi].

    Stops as soon as the floor is ambiguous or the remainder interval would
    reach an integer exactly (a possibly terminating expansion).
    """
    while True:
        a = math.floor(lo)
        if math.floor(hi) != a or lo == a:
            return
        yield a
        lo, hi = 1 / (hi - a), 1 / (lo - a)


def _rational_quotients(x: Fraction) -> Iterator[int]:
    while True:
        a = math.floor(x)
        yield a
        if x == a:
            return
        x = 1 / (x - a)


def cf_expand(x: RealSource | Fraction, count: int) -> CFExpansion:
    """First ``count`` partial quotients of x, each certified.

    A :class:`~fractions.Fraction` is expanded exactly and may return fewer
    terms.  A callable source is re-evaluated at doubling precision until
    ``count`` quotients are certified; a fixed enclosure gets one attempt.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if isinstance(x, Fraction):
        qs = []
        for a in _rational_quotients(x):
            qs.append(a)
            if len(qs) == count:
                break
        return CFExpansion(tuple(qs), tuple(convergents(qs)))

    def compute(prec: int) -> CFExpansion:
        lo, hi = realize(x, prec).endpoints()
        qs = []
        for a in _certified_quotients(lo, hi):
            qs.append(a)
            if len(qs) == count:
                return CFExpansion(tuple(qs), tuple(convergents(qs)))
        raise Undecided("cf_expand", prec, f"only {len(qs)} of {count} partial quotients certified")

    if isinstance(x, CertifiedReal):
        return escalate(compute, "cf_expand", start=x.precision, cap=x.precision)
    return escalate(compute, "cf_expand")


def nearest_int_distance(x: CertifiedReal) -> CertifiedReal:
    """‖x‖, the distance from x to the nearest integer.

    Raises :class:`Undecided` when the enclosure straddles a half-integer.
    """
    n = (x + Fraction(1, 2)).floor("nearest_int_distance")
    return abs(x - n)


# the reduction lemma --------------------------------------------------------


@dataclass(frozen=True)
class ReductionInstance:
    """Data for 0 < mτ − n + μ < A·B^(−k) with m <= M."""

    tau: RealSource | Fraction
    mu: RealSource | Fraction
    A: Real
    B: RealSource | Real
    M: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.M, int) or self.M < 1:
            raise ValueError("M must be a positive integer")
        prec = current_policy().start
        if _as_real(self.A, prec).hi <= 0:
            raise ValueError("A must be positive")
        if _as_real(self.B, prec).hi <= 1:
            raise ValueError("B must exceed 1")


def _as_real(value, prec: int) -> CertifiedReal:
    if isinstance(value, CertifiedReal):
        return value.at(prec)
    if callable(value):
        return value(prec)
    return CertifiedReal.exact(value, prec)


@dataclass(frozen=True)
class Attempt:
    convergent_index: int
    q: int
    epsilon: CertifiedReal
    accepted: bool


@dataclass(frozen=True)
class ReductionResult:
    status: str  # "reduced" or "inconclusive"
    method: str  # "convergent" or "rational"
    q: int | None
    epsilon: CertifiedReal | None
    k_bound: int | None
    convergent_index: int | None
    attempts: tuple[Attempt, ...] = field(default_factory=tuple)
    detail: str = ""

    @property
    def reduced(self) -> bool:
        return self.status == "reduced"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "method": self.method,
            "q": None if self.q is None else str(self.q),
            "epsilon": None if self.epsilon is None else self.epsilon.to_dict(),
            "k_bound": self.k_bound,
            "convergent_index": self.convergent_index,
            "attempts": [
                {"convergent_index": a.convergent_index, "q": str(a.q),
                 "epsilon": a.epsilon.to_dict(), "accepted": a.accepted}
                for a in self.attempts
            ],
            "detail": self.detail,
        }


def _k_bound(A: CertifiedReal, q: int, eps: CertifiedReal, B: CertifiedReal) -> int:
    return ((A * q / eps).log() / B.log()).ceil("dp_reduce")


def dp_reduce(inst: ReductionInstance, max_tries: int = 16) -> ReductionResult:
    """Apply the reduction lemma, scanning convergents with q > 6M.

    Convergents with ε <= 0 are recorded and skipped; after ``max_tries``
    of them the result is inconclusive.  An irrational τ that cannot be
    expanded far enough at the precision cap propagates
    :class:`PrecisionExhausted`.
    """
    if isinstance(inst.tau, Fraction):
        return _reduce_rational(inst)

    def compute(prec: int) -> ReductionResult:
        tau, mu = realize(inst.tau, prec), realize(inst.mu, prec)
        A, B = _as_real(inst.A, prec), _as_real(inst.B, prec)
        lo, hi = tau.endpoints()
        attempts: list[Attempt] = []
        p0, p1, q0, q1 = 0, 1, 1, 0
        for i, a in enumerate(_certified_quotients(lo, hi)):
            p0, p1 = p1, a * p1 + p0
            q0, q1 = q1, a * q1 + q0
            if q1 <= 6 * inst.M:
                continue
            eps = nearest_int_distance(mu * q1) - nearest_int_distance(tau * q1) * inst.M
            ok = eps.sign("dp_reduce") > 0
            attempts.append(Attempt(i, q1, eps, ok))
            if ok:
                return ReductionResult("reduced", "convergent", q1, eps, _k_bound(A, q1, eps, B), i, tuple(attempts))
            if len(attempts) >= max_tries:
                return ReductionResult("inconclusive", "convergent", None, None, None, None, tuple(attempts),
                                       f"ε <= 0 at {max_tries} convergents")
        raise Undecided("dp_reduce", prec, "continued fraction of τ exhausted before a usable convergent")

    return escalate(compute, "dp_reduce")


def _reduce_rational(inst: ReductionInstance) -> ReductionResult:
    q = inst.tau.denominator

    def compute(prec: int) -> ReductionResult:
        A, B = _as_real(inst.A, prec), _as_real(inst.B, prec)
        if isinstance(inst.mu, Fraction):
            # exact: ‖qμ‖ for a rational μ, so an integer qμ is recognised
            qmu = inst.mu * q
            eps = CertifiedReal.exact(abs(qmu - round(qmu)), prec)
        else:
            eps = nearest_int_distance(realize(inst.mu, prec) * q)
        if eps.hi == 0:
            return ReductionResult("inconclusive", "rational", q, eps, None, None, detail="qμ is an integer")
        eps.sign("dp_reduce")  # certify ε > 0
        return ReductionResult("reduced", "rational", q, eps, _k_bound(A, q, eps, B), None)

    return escalate(compute, "dp_reduce")


# Λ → Γ bridge --------------------------------------------------------------


def exp_bridge_holds(x: CertifiedReal | Real) -> bool:
    """Certified truth of |x| < 2|e^x − 1| for 0 < |x| < 1/2."""
    x = x if isinstance(x, CertifiedReal) else CertifiedReal.exact(x)
    if not (_certainly_less(-0.5, x) and _certainly_less(x, 0.5)):
        raise ValueError("exp_bridge_holds needs x in (-1/2, 1/2)")
    if x.lo <= 0 <= x.hi:
        raise ValueError("exp_bridge_holds needs x certainly non-zero")

    def compute(prec: int) -> bool:
        y = x.at(prec)
        return (abs(y.exp() - 1) * 2 - abs(y)).sign("exp_bridge_holds") > 0

    return escalate(compute, "exp_bridge_holds")


def _certainly_less(a, b) -> bool:
    a = a if isinstance(a, CertifiedReal) else CertifiedReal.exact(a)
    try:
        return a.compare(b) < 0
    except Undecided:
        return False


# 1 − e^(−1/2): below this, |e^Γ − 1| < U forces |Γ| < 1/2.
def bridge_limit(prec: int) -> CertifiedReal:
    return 1 - CertifiedReal.exact(Fraction(-1, 2), prec).exp()


def log_form_bound(U: CertifiedReal) -> CertifiedReal | None:
    """2U when |e^Γ − 1| < U certifies |Γ| < 2U, else None."""
    if U.compare(bridge_limit(U.precision), "log_form_bound") < 0:
        return U * 2
    return None


# linear forms at concrete triples --------------------------------------------


@dataclass(frozen=True)
class LinearFormResidual:
    kind: EquationKind
    shape: str
    triple: tuple[int, int, int]
    exact: QuadraticNumber
    value: CertifiedReal
    K: int
    bound: CertifiedReal
    within_bound: bool


def linear_form_residual(
    k: int, m: int, n: int, kind: EquationKind, shape: str = "lambda1", K: int | None = None
) -> LinearFormResidual:
    """|coefficient·α^e − 1| for the chosen form, with its bound K/α^(rate·x).

    The comparison with the bound is exact: |Λ|·α^(rate·x) < K in Q(√5).
    """
    for v in (k, m, n):
        _check_index(v)
        if v < 1:
            raise ValueError("linear_form_residual needs k, m, n >= 1")
    kind = EquationKind.parse(kind) if isinstance(kind, str) and not isinstance(kind, EquationKind) else kind
    shp = {s.name: s for s in FORMS[kind]}[shape]
    lam = abs(shp.coefficient(m) * ALPHA ** form_exponent(shp, k, m, n) - 1)
    K = shp.k_chain if K is None else K
    x = m if shape == "lambda1" else n
    scale = ALPHA ** (shp.rate_power * x)
    prec = current_policy().start
    bound = CertifiedReal.exact(K, prec) / scale.to_certified(prec)
    return LinearFormResidual(kind, shape, (k, m, n), lam, lam.to_certified(prec), K, bound, lam * scale < K)


# published reduction fixtures ------------------------------------------------


@dataclass(frozen=True)
class FixtureCandidate:
    """One reading of (τ, μ, μ_m) for the published reduction step."""

    name: str
    description: str
    tau: RealSource | Fraction
    mu: RealSource
    mu_m: Callable[[int], RealSource] | None = None


def _abs_log_beta_complex(prec: int) -> CertifiedReal:
    # |log β| for the principal branch: log β = log|β| + iπ
    la, p = log_alpha(prec), pi(prec)
    return (la * la + p * p).sqrt()


def fixture_candidates() -> list[FixtureCandidate]:
    def log_sqrt5(prec):
        return sqrt5(prec).log()

    def log_sqrt5_lucas(m):
        return lambda prec: (sqrt5(prec) * lucas(m)).log()

    return [
        FixtureCandidate(
            "real-branch",
            "τ = log α / log|β| (equal to −1), μ = log(1/√5)/log|β|",
            Fraction(-1),
            lambda prec: log_sqrt5(prec) / log_alpha(prec),
            lambda m: (lambda prec: log_sqrt5_lucas(m)(prec) / log_alpha(prec)),
        ),
        FixtureCandidate(
            "complex-branch-modulus",
            "τ = |log α / log β|, μ = |log(1/√5) / log β| with log β = log|β| + iπ",
            lambda prec: log_alpha(prec) / _abs_log_beta_complex(prec),
            lambda prec: log_sqrt5(prec) / _abs_log_beta_complex(prec),
            lambda m: (lambda prec: log_sqrt5_lucas(m)(prec) / _abs_log_beta_complex(prec)),
        ),
    ]


@dataclass(frozen=True)
class FixtureEvaluation:
    candidate: str
    q_exceeds_6M: bool
    q_is_convergent: bool
    convergent_index: int | None
    epsilon: CertifiedReal | None
    epsilon_status: str  # reproduced | not-reproduced | undecided
    epsilon_m_min: CertifiedReal | None
    epsilon_m_argmin: int | None
    epsilon_m_status: str
    implied_m_bound: int | None
    implied_n_bound: int | None

    def to_dict(self) -> dict:
        return {
            "candidate": self.candidate,
            "q_exceeds_6M": self.q_exceeds_6M,
            "q_is_convergent": self.q_is_convergent,
            "convergent_index": self.convergent_index,
            "epsilon": None if self.epsilon is None else self.epsilon.to_dict(),
            "epsilon_status": self.epsilon_status,
            "epsilon_m_min": None if self.epsilon_m_min is None else self.epsilon_m_min.to_dict(),
            "epsilon_m_argmin": self.epsilon_m_argmin,
            "epsilon_m_status": self.epsilon_m_status,
            "implied_m_bound": self.implied_m_bound,
            "implied_n_bound": self.implied_n_bound,
        }


def fixture_epsilon(tau: RealSource | Fraction, mu: RealSource, q: int, M: int, prec: int) -> CertifiedReal:
    """ε = ‖μq‖ − M‖τq‖ at one precision."""
    t = CertifiedReal.exact(tau, prec) if isinstance(tau, Fraction) else realize(tau, prec)
    return nearest_int_distance(realize(mu, prec) * q) - nearest_int_distance(t * q) * M


def _threshold_status(eps_source: Callable[[int], CertifiedReal], threshold: Fraction, operation: str):
    try:
        eps = escalate(lambda p: _decided(eps_source(p), threshold, operation), operation)
    except PrecisionExhausted:
        return None, "undecided"
    value, above = eps
    return value, "reproduced" if above else "not-reproduced"


def _decided(eps: CertifiedReal, threshold: Fraction, operation: str):
    return eps, eps.compare(threshold, operation) > 0


def evaluate_fixture(
    candidate: FixtureCandidate,
    q: int,
    M: int,
    epsilon_threshold: Fraction = Fraction(486, 1000),
    epsilon_m_threshold: Fraction = Fraction(34, 1000),
    m_range: range = range(1, 74),
    A1: int = 34,
    A2: int = 138,
) -> FixtureEvaluation:
    """Check a printed convergent and ε thresholds against one (τ, μ) reading.

    Nothing here is asserted; each threshold is reported as reproduced, not
    reproduced, or undecided at the precision cap.  Implied bounds use the
    lemma only where it applies.
    """
    exceeds = q > 6 * M
    if isinstance(candidate.tau, Fraction):
        cf = cf_expand(candidate.tau, 200)
        index = cf.denominators.index(q) if q in cf.denominators else None
    else:
        try:
            cf = cf_expand(candidate.tau, 80)
            index = cf.denominators.index(q) if q in cf.denominators else None
        except PrecisionExhausted:
            index = None

    eps, status = _threshold_status(
        lambda p: fixture_epsilon(candidate.tau, candidate.mu, q, M, p), epsilon_threshold, "fixture_epsilon")

    worst, worst_m, m_status = None, None, "not-evaluated"
    if candidate.mu_m is not None:
        for m in m_range:
            try:
                e = escalate(lambda p: _checked(fixture_epsilon(candidate.tau, candidate.mu_m(m), q, M, p)),
                             "fixture_epsilon_m")
            except PrecisionExhausted:
                worst, worst_m = None, m
                break
            if worst is None or e.midpoint < worst.midpoint:
                worst, worst_m = e, m
        if worst is None:
            m_status = "undecided"
        else:
            try:
                above = worst.compare(epsilon_m_threshold, "fixture_epsilon_m") > 0
                m_status = "reproduced" if above else "not-reproduced"
            except Undecided:
                m_status = "undecided"

    prec = current_policy().start
    m_bound = n_bound = None
    # the lemma needs q to be a convergent of τ, or any multiple of its denominator when τ is rational
    applicable = index is not None or (isinstance(candidate.tau, Fraction) and q % candidate.tau.denominator == 0)
    if applicable and eps is not None and eps.lo > 0:
        m_bound = _k_bound(CertifiedReal.exact(A1, prec), q, eps.at(prec), alpha(prec) ** 2) - 1
    if applicable and worst is not None and worst.lo > 0:
        n_bound = _k_bound(CertifiedReal.exact(A2, prec), q, worst.at(prec), alpha(prec)) - 1
    return FixtureEvaluation(candidate.name, exceeds, index is not None, index, eps, status,
                             worst, worst_m, m_status, m_bound, n_bound)


def _checked(eps: CertifiedReal) -> CertifiedReal:
    # resolve the sign so comparisons between different m are meaningful
    eps.sign("fixture_epsilon_m")
    return eps


# reduction of the two equations ----------------------------------------------


@dataclass(frozen=True)
class EquationReduction:
    """Reduced bounds for one equation from the rational-τ form of the lemma.

    Dividing Γ = e·log α + log c by log α gives |e + μ| < (2K/log α)·B^(−x)
    with an integer e, μ = log c/log α and B = α^rate, so the rational path
    applies with τ = 1.
    """

    kind: EquationKind
    m_bound: int
    n_bound: int
    m_bridge_start: int
    n_bridge_start: int
    case1: ReductionResult
    case2: tuple[tuple[int, ReductionResult], ...]

    def to_dict(self) -> dict:
        return {
            "equation": self.kind.value,
            "m_bound": self.m_bound,
            "n_bound": self.n_bound,
            "m_bridge_start": self.m_bridge_start,
            "n_bridge_start": self.n_bridge_start,
            "case1": self.case1.to_dict(),
            "case2": [{"m": m, "result": r.to_dict()} for m, r in self.case2],
        }


def bridge_start(K: int, rate_power: int) -> int:
    """Least x >= 1 with K/α^(rate·x) < 1 − e^(−1/2)."""
    def below(x: int) -> bool:
        return escalate(
            lambda p: (CertifiedReal.exact(K, p) / alpha(p) ** (rate_power * x)).compare(bridge_limit(p), "bridge_start") < 0,
            "bridge_start",
        )

    x = 1
    while not below(x):
        x += 1
    return x


def reduce_equation(kind: EquationKind) -> EquationReduction:
    first, second = FORMS[kind]

    def a_const(K: int) -> Callable[[int], CertifiedReal]:
        return lambda prec: CertifiedReal.exact(2 * K, prec) / log_alpha(prec)

    def mu_of(c: QuadraticNumber) -> Callable[[int], CertifiedReal]:
        return lambda prec: c.to_certified(prec).log() / log_alpha(prec)

    m_start = bridge_start(first.k_derived, first.rate_power)
    case1 = dp_reduce(ReductionInstance(
        Fraction(1), mu_of(first.coefficient(1)), a_const(first.k_derived), lambda p: alpha(p) ** first.rate_power))
    if not case1.reduced:
        raise PrecisionExhausted("reduce_equation", current_policy().cap, case1.detail)
    m_bound = max(m_start, case1.k_bound) - 1

    n_start = bridge_start(second.k_derived, second.rate_power)
    case2 = []
    n_bound = max(n_start - 1, m_bound)
    for m in range(1, m_bound + 1):
        r = dp_reduce(ReductionInstance(
            Fraction(1), mu_of(second.coefficient(m)), a_const(second.k_derived), lambda p: alpha(p) ** second.rate_power))
        if not r.reduced:
            raise PrecisionExhausted("reduce_equation", current_policy().cap, r.detail)
        case2.append((m, r))
        n_bound = max(n_bound, r.k_bound - 1)
    return EquationReduction(kind, m_bound, n_bound, m_start, n_start, case1, tuple(case2))
