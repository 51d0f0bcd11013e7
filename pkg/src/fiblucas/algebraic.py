"""Exact arithmetic in Q(√5), minimal polynomials and logarithmic heights."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import gcd

from .certified import CertifiedReal, current_policy, escalate, log_alpha, sqrt5


@total_ordering
class QuadraticNumber:
    """The element (a + b√5)/c of Q(√5), kept in canonical form.

    Canonical means c > 0 and gcd(a, b, c) = 1, so two instances are equal
    exactly when their fields are equal.  Ordering follows the real
    embedding √5 ↦ +2.236….
    """

    __slots__ = ("a", "b", "c")

    def __init__(self, a: int, b: int = 0, c: int = 1):
        if c == 0:
            raise ZeroDivisionError("denominator must be non-zero")
        if c < 0:
            a, b, c = -a, -b, -c
        g = gcd(gcd(a, b), c)
        self.a, self.b, self.c = a // g, b // g, c // g

    @classmethod
    def coerce(cls, value) -> "QuadraticNumber":
        if isinstance(value, QuadraticNumber):
            return value
        if isinstance(value, int):
            return cls(value)
        if isinstance(value, Fraction):
            return cls(value.numerator, 0, value.denominator)
        raise TypeError(f"cannot convert {type(value).__name__} to QuadraticNumber")

    # field operations ----------------------------------------------------

    def __add__(self, other):
        try:
            o = QuadraticNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadraticNumber(self.a * o.c + o.a * self.c, self.b * o.c + o.b * self.c, self.c * o.c)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.c)

    def __sub__(self, other):
        return self + (-QuadraticNumber.coerce(other))

    def __rsub__(self, other):
        return QuadraticNumber.coerce(other) - self

    def __mul__(self, other):
        try:
            o = QuadraticNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadraticNumber(
            self.a * o.a + 5 * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.c * o.c,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.c)

    def norm(self) -> Fraction:
        return Fraction(self.a * self.a - 5 * self.b * self.b, self.c * self.c)

    def trace(self) -> Fraction:
        return Fraction(2 * self.a, self.c)

    def inverse(self) -> "QuadraticNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # 1/x = x' / N(x)
        n = self.a * self.a - 5 * self.b * self.b
        return QuadraticNumber(self.a * self.c, -self.b * self.c, n)

    def __truediv__(self, other):
        return self * QuadraticNumber.coerce(other).inverse()

    def __rtruediv__(self, other):
        return QuadraticNumber.coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "QuadraticNumber":
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        e = abs(exponent)
        result = ONE
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def is_integral(self) -> bool:
        """Membership in the ring of integers Z[α] = {(u + v√5)/2 : u ≡ v mod 2}."""
        if self.c == 1:
            return True
        return self.c == 2 and self.a % 2 == 1 and self.b % 2 == 1

    def is_unit(self) -> bool:
        return self.is_integral() and abs(self.norm()) == 1

    def sign(self) -> int:
        """Exact sign of a + b√5 under the real embedding."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: whichever of a² and 5b² is larger wins
        return (1 if a > 0 else -1) if a * a > 5 * b * b else (1 if b > 0 else -1)

    def is_positive(self) -> bool:
        return self.sign() > 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other) -> bool:
        try:
            o = QuadraticNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return (self.a, self.b, self.c) == (o.a, o.b, o.c)

    def __lt__(self, other) -> bool:
        return (self - QuadraticNumber.coerce(other)).sign() < 0

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(Fraction(self.a, self.c))
        return hash((self.a, self.b, self.c))

    # real embedding --------------------------------------------------------

    def to_certified(self, prec: int | None = None) -> CertifiedReal:
        prec = prec or current_policy().start
        return (self.a + self.b * sqrt5(prec)) / self.c

    def __float__(self) -> float:
        return float(self.to_certified(64))

    def __repr__(self) -> str:
        return f"QuadraticNumber({self.a}, {self.b}, {self.c})"

    def __str__(self) -> str:
        root = {1: "√5", -1: "-√5"}.get(self.b, f"{self.b}√5")
        if self.b == 0:
            body = str(self.a)
        elif self.a == 0:
            body = root
        else:
            body = f"{self.a}{root if root.startswith('-') else '+' + root}"
            if self.c != 1:
                body = f"({body})"
        return body if self.c == 1 else f"{body}/{self.c}"


ZERO = QuadraticNumber(0)
ONE = QuadraticNumber(1)
SQRT5 = QuadraticNumber(0, 1, 1)
ALPHA = QuadraticNumber(1, 1, 2)
BETA = QuadraticNumber(1, -1, 2)
ABS_BETA = QuadraticNumber(-1, 1, 2)


@dataclass(frozen=True)
class IntegerPolynomial:
    """Primitive integer polynomial a_0 x^d + … + a_d with a_0 > 0."""

    coefficients: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[0]

    def __call__(self, x):
        acc = 0
        for coef in self.coefficients:
            acc = acc * x + coef
        return acc

    def __str__(self) -> str:
        d = self.degree
        parts = []
        for i, coef in enumerate(self.coefficients):
            power = d - i
            if coef == 0:
                continue
            mag = abs(coef)
            if power == 0:
                term = str(mag)
            else:
                var = "x" if power == 1 else f"x^{power}"
                term = var if mag == 1 else f"{mag}{var}"
            sign = "-" if coef < 0 else "+"
            parts.append(term if not parts and sign == "+" else (f"-{term}" if not parts else f"{sign} {term}"))
        return " ".join(parts)


def minimal_polynomial(x: QuadraticNumber) -> IntegerPolynomial:
    if x.is_zero():
        raise ValueError("zero has no minimal polynomial here")
    if x.is_rational():
        return IntegerPolynomial((x.c, -x.a))
    # c²X² − 2acX + (a² − 5b²), made primitive
    coeffs = (x.c * x.c, -2 * x.a * x.c, x.a * x.a - 5 * x.b * x.b)
    g = gcd(gcd(coeffs[0], coeffs[1]), coeffs[2])
    return IntegerPolynomial(tuple(c // g for c in coeffs))


def log_height(x: QuadraticNumber, prec: int | None = None) -> CertifiedReal:
    """Absolute logarithmic height (1/d)(log a_0 + Σ log max(|x_i|, 1))."""
    if x.is_zero():
        raise ValueError("height of zero is undefined")
    prec = prec or current_policy().start
    poly = minimal_polynomial(x)
    conjugates = [x] if poly.degree == 1 else [x, x.conjugate()]
    total = CertifiedReal.exact(poly.leading, prec).log()
    for conj in conjugates:
        total = total + abs(conj.to_certified(prec)).max(1).log()
    return total / poly.degree


# Smallest height of a non-torsion element of degree <= 2: h(α) = ½ log α.
def _min_height(prec: int) -> CertifiedReal:
    return log_alpha(prec) / 2


def unit_exponent(x: QuadraticNumber) -> int | None:
    """Return e with x = α^e when x is a positive unit, else None."""
    if not x.is_positive() or not x.is_unit():
        return None

    def compute(prec: int) -> int:
        # |log x / log α| is within 1/4 of an integer for genuine units
        ratio = x.to_certified(prec).log() / log_alpha(prec)
        return (ratio + Fraction(1, 2)).floor("unit_exponent")

    e = escalate(compute, "unit_exponent")
    if ALPHA**e != x:
        raise AssertionError(f"unit {x} is not α^{e}")
    return e


def _check_dependence_args(x: QuadraticNumber, y: QuadraticNumber) -> None:
    for v in (x, y):
        if not v.is_positive():
            raise ValueError(f"{v} is not positive under the real embedding")
        if v == ONE:
            raise ValueError("arguments must differ from 1")


def dependence_relation(x: QuadraticNumber, y: QuadraticNumber) -> tuple[int, int] | None:
    """Find coprime (u, v) ≠ (0, 0) with x^u·y^v = 1, or None if none exists.

    Positive units are written exactly as powers of the fundamental unit α.
    A unit and a non-unit are never dependent.  For two non-units, a
    relation forces x = z^s, y = z^t for some z of height at least ½ log α,
    so |s| <= h(x)/(½ log α); each candidate exponent pair in that finite
    range is tested by exact arithmetic.
    """
    _check_dependence_args(x, y)
    ex, ey = unit_exponent(x), unit_exponent(y)
    if ex is not None and ey is not None:
        g = gcd(ex, ey)
        return ey // g, -ex // g
    if (ex is None) != (ey is None):
        return None

    def candidates(prec: int):
        hx, hy = log_height(x, prec), log_height(y, prec)
        s_max = (hx / _min_height(prec)).hi
        ratio = hy / hx
        return int(s_max), ratio

    s_max, ratio = escalate(candidates, "dependence_relation")
    for s in range(1, s_max + 1):
        t_range = ratio * s
        for t in range(max(1, int(t_range.lo) - 1), int(t_range.hi) + 2):
            if not t_range.contains(t):
                continue
            g = gcd(s, t)
            xt = x**t
            if xt == y**s:
                return t // g, -s // g
            if xt * y**s == ONE:
                return t // g, s // g
    return None


def multiplicatively_dependent(x: QuadraticNumber, y: QuadraticNumber) -> bool:
    return dependence_relation(x, y) is not None


@dataclass(frozen=True)
class ProductForm:
    """Π bases[i] ** exponents[i]; the linear form is this product minus 1."""

    bases: tuple[QuadraticNumber, ...]
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bases", tuple(QuadraticNumber.coerce(b) for b in self.bases))
        object.__setattr__(self, "exponents", tuple(self.exponents))
        if len(self.bases) != len(self.exponents):
            raise ValueError("bases and exponents differ in length")
        if not self.bases:
            raise ValueError("a product form needs at least one base")
        for b in self.bases:
            if not b.is_positive():
                raise ValueError(f"base {b} is not positive under the real embedding")

    def evaluate(self) -> QuadraticNumber:
        result = ONE
        for base, exp in zip(self.bases, self.exponents):
            if exp:
                result = result * base**exp
        return result


def product_equals_one(form: ProductForm) -> bool:
    return form.evaluate() == ONE
