"""Matveev lower bounds, their chaining, and explicit index bounds.

Matveev's inequality for a non-zero Λ = η_1^b_1 ⋯ η_s^b_s − 1 over a real
field of degree D reads

    log |Λ| > −C · (1 + log B),
    C = 1.4 · 30^(s+3) · s^4.5 · D² · (1 + log D) · A_1 ⋯ A_s,

with B >= max |b_j| and A_j >= max(D·h(η_j), |log η_j|, 0.16).  Pairing it
with an upper bound log |Λ| < log K − rate·x yields a relation
x < (log K + C(1 + log(a·y))^p) / rate, stored as a :class:`GrowthBound`.
All logarithms are natural.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import mpmath

from .algebraic import (
    ABS_BETA,
    ALPHA,
    ONE,
    ProductForm,
    QuadraticNumber,
    log_height,
    minimal_polynomial,
    product_equals_one,
    unit_exponent,
)
from .certified import CertifiedReal, current_policy, escalate, log_alpha
from .equations import FORMS, EquationKind, FormShape
from .errors import InvariantViolation, NonConvergence, Undecided
from .fixtures import PUBLISHED_CONSTANTS

Real = Union[CertifiedReal, int, float, Fraction]

A_FLOOR = Fraction(4, 25)  # 0.16


def _cr(value: Real, prec: int | None = None) -> CertifiedReal:
    if isinstance(value, CertifiedReal):
        return value
    return CertifiedReal.exact(value, prec)


def a_value(x: QuadraticNumber, D: int, prec: int | None = None) -> CertifiedReal:
    """max(D·h(x), |log x|, 0.16) for a positive x."""
    if not x.is_positive():
        raise ValueError(f"{x} is not positive under the real embedding")
    prec = prec or current_policy().start
    height_term = log_height(x, prec) * D
    log_term = abs(x.to_certified(prec).log())
    return height_term.max(log_term).max(A_FLOOR)


@dataclass(frozen=True)
class MatveevInstance:
    s: int
    D: int
    A: tuple[CertifiedReal, ...]
    B: Real = 1
    etas: tuple[QuadraticNumber, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", tuple(_cr(a) for a in self.A))
        if self.s < 1 or self.D < 1:
            raise ValueError("s and D must be positive")
        if len(self.A) != self.s:
            raise ValueError(f"expected {self.s} values of A, got {len(self.A)}")
        if _cr(self.B).hi < 1:
            raise ValueError("B must be at least 1")
        for j, a in enumerate(self.A, 1):
            if a.hi * 25 < 4:  # certainly below 0.16
                raise ValueError(f"A_{j} is below 0.16")
        if self.etas is not None:
            if len(self.etas) != self.s:
                raise ValueError("etas must match s")
            for j, (a, eta) in enumerate(zip(self.A, self.etas), 1):
                # A_j may equal its own lower limit, so reject only certain violations
                if a.hi < a_value(eta, self.D, a.precision).lo:
                    raise ValueError(f"A_{j} is smaller than max(D·h, |log η|, 0.16) for {eta}")


def matveev_coefficient(inst: MatveevInstance) -> CertifiedReal:
    prec = max(a.precision for a in inst.A)
    s, D = inst.s, inst.D
    one = CertifiedReal.exact(1, prec)
    c = one * Fraction(7, 5) * 30 ** (s + 3) * s**4 * CertifiedReal.exact(s, prec).sqrt()
    c = c * D * D * (one + CertifiedReal.exact(D, prec).log())
    for a in inst.A:
        c = c * a
    return c


def matveev_log_lower_bound(inst: MatveevInstance) -> CertifiedReal:
    """The right-hand side −C(1 + log B) for a concrete B."""
    B = _cr(inst.B, max(a.precision for a in inst.A))
    return -(matveev_coefficient(inst) * (B.log() + 1))


@dataclass(frozen=True)
class GrowthBound:
    """The relation  x·rate < log K + C·(1 + log(a·y))^p.

    With y = x it is a self-referential inequality that
    :func:`solve_growth_bound` turns into an explicit integer bound.
    """

    C: CertifiedReal
    a: Fraction
    p: int
    rate: CertifiedReal
    log_K: CertifiedReal

    @property
    def K(self) -> CertifiedReal:
        return self.log_K.exp()

    @property
    def coefficient(self) -> CertifiedReal:
        """Coefficient of (1 + log(a·y))^p after dividing by the rate."""
        return self.C / self.rate

    @property
    def additive(self) -> CertifiedReal:
        return self.log_K / self.rate

    def _conservative(self, prec: int):
        # largest C and log K, smallest rate: the bound is sound for every
        # value inside the parameter intervals
        return (
            CertifiedReal.exact(self.C.hi, prec),
            CertifiedReal.exact(self.log_K.hi, prec),
            CertifiedReal.exact(self.rate.lo, prec),
        )

    def margin(self, x: int, prec: int) -> CertifiedReal:
        """log K + C(1 + log(a·x))^p − x·rate, with conservative parameters."""
        C, log_K, rate = self._conservative(prec)
        inner = CertifiedReal.exact(self.a * x, prec).log() + 1
        return log_K + C * inner**self.p - rate * x

    def holds(self, x: int) -> bool:
        return escalate(lambda prec: self.margin(x, prec).sign("growth_bound") > 0, "growth_bound")


def chain_upper_lower(
    C: Real, a: Real, logK: Real, rate: Real, power: int = 1
) -> GrowthBound:
    """Combine log|Λ| > −C(1+log(a·y))^p with log|Λ| < logK − rate·x."""
    rate = _cr(rate)
    if rate.lo <= 0:
        raise ValueError("rate must be positive")
    C = _cr(C, rate.precision)
    if C.lo < 0:
        raise ValueError("C must be non-negative")
    return GrowthBound(C, Fraction(a), power, rate, _cr(logK, rate.precision))


def substitute_bound(per_unit: CertifiedReal, inner: GrowthBound) -> CertifiedReal:
    """Eliminate m from  C_m·m·(1 + L)  using  m < coef·(1 + L)^p + add.

    Since 1 + L >= 1 whenever a·y >= 1, the additive part can be folded into
    the leading power:  C_m·m·(1+L) < C_m·(coef + add)·(1+L)^(p+1).
    """
    add = inner.additive.max(0)
    return per_unit * (inner.coefficient + add)


@dataclass(frozen=True)
class FixedPoint:
    value: int  # floor of the last iterate
    iterations: int


def fixed_point(gb: GrowthBound, max_iterations: int = 200) -> FixedPoint:
    """Iterate x <- (log K + C(1 + log(a*x))^p)/rate from x0 = 10*max(C, e).

    The map f is increasing and concave, so iterates rise monotonically to
    the crossing x*.  With c = f'(x_n) < 1 the remaining error is at most
    c/(1 - c)*|x_{n+1} - x_n|; iteration stops once that is below 1/2.
    """
    C, log_K, rate = gb.C.hi, gb.log_K.hi, gb.rate.lo
    bits = max(128, int(mpmath.log(max(C, 2), 2)) + 96)
    with mpmath.workprec(bits):
        a = mpmath.mpf(gb.a.numerator) / gb.a.denominator
        x = max(mpmath.mpf(C), mpmath.e) * 10
        for i in range(1, max_iterations + 1):
            inner = 1 + mpmath.log(a * x)
            nxt = (log_K + C * inner**gb.p) / rate
            slope = C * gb.p * inner ** (gb.p - 1) / (x * rate) if gb.p else mpmath.mpf(0)
            if slope < 1 and slope / (1 - slope) * abs(nxt - x) < mpmath.mpf(1) / 2:
                return FixedPoint(int(mpmath.floor(nxt)), i)
            x = nxt
    raise NonConvergence(f"fixed point not reached in {max_iterations} iterations")


def solve_growth_bound(gb: GrowthBound, max_iterations: int = 200) -> int:
    """Least integer N such that every x >= N violates the relation.

    The fixed point locates the crossing; N is then confirmed by certified
    substitution (the relation holds at N − 1, fails at N) and by checking
    that x·rate − RHS is increasing from N on.
    """
    if gb.p not in (0, 1, 2):
        raise ValueError("only powers 0, 1 and 2 are supported")
    if gb.p == 0:
        def closed(prec: int) -> int:
            C, log_K, rate = gb._conservative(prec)
            x = (log_K + C) / rate
            fl = x.floor("solve_growth_bound")
            return fl if x.is_exact() and x.lo == fl else fl + 1
        return escalate(closed, "solve_growth_bound")

    fp = fixed_point(gb, max_iterations)
    N = max(1, fp.value + 1)
    steps = 0
    while N > 1 and not gb.holds(N - 1):
        N -= 1
        steps += 1
        if steps > 64:
            raise NonConvergence("fixed point far from the integer crossing")
    while gb.holds(N):
        N += 1
        steps += 1
        if steps > 64:
            raise NonConvergence("fixed point far from the integer crossing")
    _check_increasing(gb, N)
    return N


def _check_increasing(gb: GrowthBound, N: int) -> None:
    # d/dx of x·rate − C(1+log ax)^p is rate − C·p·(1+log ax)^(p−1)/x, and the
    # subtracted term decreases for a·x >= 1, so positivity at N suffices.
    def compute(prec: int) -> bool:
        C, _, rate = gb._conservative(prec)
        if gb.a * N < 1:
            return False
        inner = CertifiedReal.exact(gb.a * N, prec).log() + 1
        slope = rate - C * gb.p * inner ** (gb.p - 1) / N
        return slope.sign("solve_growth_bound") > 0

    if not escalate(compute, "solve_growth_bound"):
        raise NonConvergence("relation is not eventually violated beyond the fixed point")


def index_upper_bound(m: int, n: int) -> int:
    """k <= n + m + 4 for any solution of F_k = L_m L_n.

    α^(k−2) <= F_k = L_m L_n <= α^(m+1) α^(n+1), using |β|^-1 = α.  The looser
    k < 4n follows for n >= 3.
    """
    if not 1 <= m <= n:
        raise ValueError("index_upper_bound needs 1 <= m <= n")
    bound = n + m + 4
    if n >= 3 and not bound < 4 * n:
        raise InvariantViolation(f"k <= {bound} does not imply k < 4n at n = {n}")
    return bound


# explicit chains for the two equations ------------------------------------


@dataclass(frozen=True)
class ChainStep:
    label: str
    description: str
    value: CertifiedReal | int
    published: str | None = None


@dataclass(frozen=True)
class IndexBoundReport:
    equation: EquationKind
    k_bound: int
    m_bound: int
    n_bound: int
    m_relation: GrowthBound
    n_relation: GrowthBound
    provenance: tuple[ChainStep, ...] = field(default_factory=tuple)


# Both chains take B = 4n (k < 4n), so a = 4 inside log(a·n).
CHAIN_A = Fraction(4)


def _published(kind: EquationKind, label: str) -> str | None:
    entry = PUBLISHED_CONSTANTS.get(f"{kind.value}.{label}")
    return entry.printed if entry else None


def first_form_instance(kind: EquationKind, prec: int | None = None) -> MatveevInstance:
    """s = 3 over Q(√5) with bases α, |β| and the constant of the first form."""
    prec = prec or current_policy().start
    eta3 = FORMS[kind][0].coefficient(1)
    A = (a_value(ALPHA, 2, prec), a_value(ABS_BETA, 2, prec), a_value(eta3, 2, prec))
    return MatveevInstance(3, 2, A, etas=(ALPHA, ABS_BETA, eta3))


def second_form_instance(kind: EquationKind, m: int, prec: int | None = None) -> MatveevInstance:
    """Second form at a fixed m, with A_3 replaced by its linear majorant c·m."""
    prec = prec or current_policy().start
    shape = FORMS[kind][1]
    eta3 = shape.coefficient(m)
    A = (a_value(ALPHA, 2, prec), a_value(ABS_BETA, 2, prec), majorant_value(shape, m, prec))
    return MatveevInstance(3, 2, A, etas=(ALPHA, ABS_BETA, eta3))


def majorant_value(shape: FormShape, m: int, prec: int | None = None) -> CertifiedReal:
    prec = prec or current_policy().start
    return shape.majorant_base.to_certified(prec).log() * m


def mahler_measure(x: QuadraticNumber) -> QuadraticNumber:
    """a_0 * prod max(|x_i|, 1) over the conjugates of x, exactly."""
    poly = minimal_polynomial(x)
    conjugates = [x] if poly.degree == 1 else [x, x.conjugate()]
    result = QuadraticNumber(poly.leading)
    for conj in conjugates:
        result = result * max(abs(conj), ONE)
    return result


def majorant_holds(shape: FormShape, m: int) -> bool:
    """Exact check that a_value(eta_3(m), D=2) <= m*log E.

    With D = 2 the three terms of the max become exact comparisons after
    exponentiating: M(x)^(2/d) <= E^m, max(x, 1/x) <= E^m, and 0.16 <= m*log E
    (the last is decided on intervals; log E is irrational or large here).
    """
    x, bound = shape.coefficient(m), shape.majorant_base**m
    M = mahler_measure(x)
    height_term = M if minimal_polynomial(x).degree == 2 else M * M
    if height_term > bound or max(x, x.inverse()) > bound:
        return False
    return escalate(lambda p: majorant_value(shape, m, p).compare(A_FLOOR, "majorant") >= 0, "majorant_holds")


def vanishing_exponent(shape: FormShape, m: int) -> int | None:
    """Exponent e with coefficient(m)·α^e = 1, or None when the form cannot vanish.

    A coefficient that is not a unit of Z[α] is never a power of α, so the
    form is non-zero for every exponent.  A unit coefficient is written as a
    power of α and the vanishing exponent is confirmed by the product test.
    """
    c = shape.coefficient(m)
    if not c.is_unit():
        return None
    e = unit_exponent(c)
    if e is None:
        return None
    if not product_equals_one(ProductForm((c, ALPHA), (1, -e))):
        raise InvariantViolation(f"{c} = α^{e} but the product test disagrees")
    return -e


def vanishing_cases(kind: EquationKind, m_max: int) -> dict[str, list[tuple[int, int]]]:
    """(m, e) with a vanishing form, per form, for 1 <= m <= m_max."""
    out = {}
    for shape in FORMS[kind]:
        hits = []
        for m in range(1, m_max + 1):
            e = vanishing_exponent(shape, m)
            if e is not None:
                hits.append((m, e))
        out[shape.name] = hits
    return out


def equation_chain(
    kind: EquationKind,
    m_coefficient: Real | None = None,
    prec: int | None = None,
) -> IndexBoundReport:
    """Run the two-step chain for one equation.

    ``m_coefficient`` overrides the recomputed coefficient of (1 + log 4n)
    in the bound for m, so published figures can be fed through the rest
    of the chain.
    """
    prec = prec or current_policy().start
    first, second = FORMS[kind]
    la = log_alpha(prec)
    steps: list[ChainStep] = []

    c1 = matveev_coefficient(first_form_instance(kind, prec))
    steps.append(ChainStep("lambda1.coefficient", "Matveev coefficient of the first form", c1,
                           _published(kind, "lambda1.coefficient")))
    m_rel = chain_upper_lower(c1, CHAIN_A, CertifiedReal.exact(first.k_chain, prec).log(), la * first.rate_power)
    if m_coefficient is not None:
        m_rel = GrowthBound(_cr(m_coefficient, prec) * m_rel.rate, m_rel.a, m_rel.p, m_rel.rate, m_rel.log_K)
    steps.append(ChainStep("m.coefficient", "m < coef·(1 + log 4n) + add", m_rel.coefficient,
                           _published(kind, "m.coefficient")))
    steps.append(ChainStep("m.additive", "additive term log K / rate of the m bound", m_rel.additive))

    c2 = matveev_coefficient(second_form_instance(kind, 1, prec))
    steps.append(ChainStep("lambda2.coefficient_per_m", f"Matveev coefficient of the second form per unit m (A_3 = {second.majorant_label})",
                           c2, _published(kind, "lambda2.coefficient_per_m")))
    squared = substitute_bound(c2, m_rel)
    steps.append(ChainStep("lambda2.coefficient_squared", "coefficient of (1 + log 4n)^2 after eliminating m",
                           squared, _published(kind, "lambda2.coefficient_squared")))

    n_rel = chain_upper_lower(squared, CHAIN_A, CertifiedReal.exact(second.k_chain, prec).log(), la * second.rate_power, power=2)
    n_limit = solve_growth_bound(n_rel)
    n_bound = n_limit - 1
    steps.append(ChainStep("n.bound", "least N with n < N for every solution", n_limit, _published(kind, "n.bound")))

    m_bound = _bound_from_relation(m_rel, n_bound, prec)
    steps.append(ChainStep("m.bound", "m bound evaluated at the n bound", m_bound))
    k_bound = 4 * n_bound - 1
    steps.append(ChainStep("k.bound", "k < 4n", k_bound))
    return IndexBoundReport(kind, k_bound, m_bound, n_bound, m_rel, n_rel, tuple(steps))


def _bound_from_relation(rel: GrowthBound, y: int, prec: int) -> int:
    """Largest integer x with x·rate < log K + C(1 + log(a·y))^p."""
    def compute(p: int) -> int:
        C, log_K, rate = rel._conservative(p)
        inner = CertifiedReal.exact(rel.a * y, p).log() + 1
        x = (log_K + C * inner**rel.p) / rate
        fl = x.floor("m_bound")
        # strict inequality: an exact integer value is itself excluded
        return fl - 1 if x.is_exact() and x.lo == fl else fl

    try:
        return escalate(compute, "m_bound", start=prec)
    except Undecided:  # pragma: no cover - escalate converts these
        raise
