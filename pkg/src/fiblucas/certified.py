"""Certified real numbers: interval enclosures with explicit precision.

Every real quantity that feeds a yes/no decision (a comparison, a floor,
the nearest integer) is carried as a :class:`CertifiedReal`, an outward
rounded interval computed with :mod:`mpmath`'s interval context.  A
decision is returned only when the whole interval agrees; otherwise
:class:`~fiblucas.errors.Undecided` is raised so that :func:`escalate` can
retry the computation at a higher working precision.

Working precision defaults come from a context-local
:class:`PrecisionPolicy`, so pipeline code can lower or raise the cap
without threading arguments through every call::

    with precision(start=128, cap=1024):
        binet_round(500)
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Union

import mpmath
from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import to_int

from .errors import ConfigError, PrecisionExhausted, Undecided

DEFAULT_PRECISION = 256
DEFAULT_PRECISION_CAP = 16384


@dataclass(frozen=True)
class PrecisionPolicy:
    start: int = DEFAULT_PRECISION
    cap: int = DEFAULT_PRECISION_CAP

    def __post_init__(self) -> None:
        if self.start < 2 or self.cap < 2:
            raise ConfigError("precision must be at least 2 bits")
        if self.start > self.cap:
            raise ConfigError(
                f"precision start ({self.start}) exceeds cap ({self.cap})"
            )


_policy: ContextVar[PrecisionPolicy] = ContextVar(
    "fiblucas_precision", default=PrecisionPolicy()
)


def current_policy() -> PrecisionPolicy:
    return _policy.get()


@contextmanager
def precision(start: int | None = None, cap: int | None = None) -> Iterator[PrecisionPolicy]:
    """Temporarily replace the precision policy for the current context.

    If only ``cap`` is given the inherited start is clamped to it, so a tiny
    cap produces a precision failure rather than a configuration error.
    """
    base = _policy.get()
    new_cap = base.cap if cap is None else cap
    new_start = min(base.start, new_cap) if start is None else start
    token = _policy.set(PrecisionPolicy(new_start, new_cap))
    try:
        yield _policy.get()
    finally:
        _policy.reset(token)


# mpmath contexts carry mutable precision; one per thread keeps this safe.
_local = threading.local()


def _ctx(prec: int) -> MPIntervalContext:
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = _local.ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


Number = Union[int, Fraction, float, str]


def _lift(ctx: MPIntervalContext, value: "CertifiedReal | Number"):
    if isinstance(value, CertifiedReal):
        return ctx.make_mpf(value._raw)
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / ctx.mpf(value.denominator)
    if isinstance(value, (int, float, str)):
        return ctx.mpf(value)
    if isinstance(value, mpmath.mpf):
        return ctx.mpf(value)
    raise TypeError(f"cannot certify value of type {type(value).__name__}")


class CertifiedReal:
    """A real number known to lie in ``[midpoint - radius, midpoint + radius]``.

    Internally the closed interval ``[lo, hi]`` is stored exactly; midpoint and
    radius are derived views of it.  Instances are immutable.
    """

    __slots__ = ("_raw", "precision")

    def __init__(self, raw, precision: int):
        self._raw = raw
        self.precision = precision

    # construction -----------------------------------------------------

    @classmethod
    def _wrap(cls, ivval, prec: int) -> "CertifiedReal":
        return cls(ivval._mpi_, prec)

    @classmethod
    def exact(cls, value: Number, prec: int | None = None) -> "CertifiedReal":
        """Enclose an exactly known number (integer, fraction, decimal string)."""
        prec = prec or current_policy().start
        return cls._wrap(_lift(_ctx(prec), value), prec)

    @classmethod
    def from_bounds(cls, lo: Number, hi: Number, prec: int | None = None) -> "CertifiedReal":
        prec = prec or current_policy().start
        ctx = _ctx(prec)
        a, b = _lift(ctx, lo), _lift(ctx, hi)
        iv = ctx.mpf([a.a, b.b])
        return cls._wrap(iv, prec)

    # views ------------------------------------------------------------

    @property
    def lo(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(self._raw[0])

    @property
    def hi(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(self._raw[1])

    @property
    def midpoint(self) -> mpmath.mpf:
        with mpmath.workprec(self.precision + 8):
            return (self.lo + self.hi) / 2

    @property
    def radius(self) -> mpmath.mpf:
        # rounded up so the advertised ball still contains the interval
        with mpmath.workprec(self.precision + 8):
            return mpmath.fsub(self.hi, self.lo, rounding="u") / 2

    def at(self, prec: int) -> "CertifiedReal":
        """Same enclosure, with later operations carried out at ``prec`` bits."""
        return CertifiedReal(self._raw, max(prec, self.precision))

    def endpoints(self) -> tuple[Fraction, Fraction]:
        """The interval endpoints as exact fractions."""
        return _to_fraction(self.lo), _to_fraction(self.hi)

    def is_exact(self) -> bool:
        return self._raw[0] == self._raw[1]

    def contains(self, value: Number) -> bool:
        ctx = _ctx(self.precision)
        v = _lift(ctx, value)
        return self.lo <= mpmath.mp.make_mpf(v._mpi_[0]) and mpmath.mp.make_mpf(v._mpi_[1]) <= self.hi

    # arithmetic -------------------------------------------------------

    def _binary(self, other, op) -> "CertifiedReal":
        prec = self.precision
        if isinstance(other, CertifiedReal):
            prec = max(prec, other.precision)
        ctx = _ctx(prec)
        return CertifiedReal._wrap(op(ctx.make_mpf(self._raw), _lift(ctx, other)), prec)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._binary(other, lambda a, b: b + a)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: b * a)

    def __truediv__(self, other):
        if isinstance(other, CertifiedReal) and other.lo <= 0 <= other.hi:
            raise Undecided("division", self.precision, "divisor interval contains zero")
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        if self.lo <= 0 <= self.hi:
            raise Undecided("division", self.precision, "divisor interval contains zero")
        return self._binary(other, lambda a, b: b / a)

    def __neg__(self):
        return CertifiedReal._wrap(-_ctx(self.precision).make_mpf(self._raw), self.precision)

    def __pos__(self):
        return self

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return CertifiedReal.from_bounds(0, max(-self.lo, self.hi), self.precision)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent == 0:
            return CertifiedReal.exact(1, self.precision)
        ctx = _ctx(self.precision)
        return CertifiedReal._wrap(ctx.make_mpf(self._raw) ** exponent, self.precision)

    def _unary(self, name: str) -> "CertifiedReal":
        ctx = _ctx(self.precision)
        return CertifiedReal._wrap(getattr(ctx, name)(ctx.make_mpf(self._raw)), self.precision)

    def log(self) -> "CertifiedReal":
        if self.lo <= 0:
            raise Undecided("log", self.precision, "argument not certainly positive")
        return self._unary("log")

    def exp(self) -> "CertifiedReal":
        return self._unary("exp")

    def sqrt(self) -> "CertifiedReal":
        if self.lo < 0:
            raise Undecided("sqrt", self.precision, "argument not certainly non-negative")
        return self._unary("sqrt")

    def max(self, other: "CertifiedReal | Number") -> "CertifiedReal":
        o = other if isinstance(other, CertifiedReal) else CertifiedReal.exact(other, self.precision)
        return _from_endpoints(max(self.lo, o.lo), max(self.hi, o.hi), max(self.precision, o.precision))

    def min(self, other: "CertifiedReal | Number") -> "CertifiedReal":
        o = other if isinstance(other, CertifiedReal) else CertifiedReal.exact(other, self.precision)
        return _from_endpoints(min(self.lo, o.lo), min(self.hi, o.hi), max(self.precision, o.precision))

    # certified decisions ----------------------------------------------

    def compare(self, other: "CertifiedReal | Number", operation: str = "compare") -> int:
        """Return -1, 0 or 1; 0 only when both sides are the same exact point."""
        diff = self - other
        if diff.lo > 0:
            return 1
        if diff.hi < 0:
            return -1
        if diff.lo == 0 and diff.hi == 0:
            return 0
        raise Undecided(operation, self.precision, "interval straddles the comparison point")

    def sign(self, operation: str = "sign") -> int:
        return self.compare(0, operation)

    def floor(self, operation: str = "floor") -> int:
        a, b = int(to_int(self._raw[0], "f")), int(to_int(self._raw[1], "f"))
        if a != b:
            raise Undecided(operation, self.precision, "interval contains an integer boundary")
        return a

    def ceil(self, operation: str = "ceil") -> int:
        a, b = int(to_int(self._raw[0], "c")), int(to_int(self._raw[1], "c"))
        if a != b:
            raise Undecided(operation, self.precision, "interval contains an integer boundary")
        return a

    # presentation -----------------------------------------------------

    def __float__(self) -> float:
        return float(self.midpoint)

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "midpoint": mpmath.nstr(self.midpoint, digits),
            "radius": mpmath.nstr(self.radius, 3),
            "precision": self.precision,
        }

    def __repr__(self) -> str:
        return f"CertifiedReal({mpmath.nstr(self.midpoint, 20)} ± {mpmath.nstr(self.radius, 3)}, prec={self.precision})"

    def __str__(self) -> str:
        return f"{mpmath.nstr(self.midpoint, 12)} ± {mpmath.nstr(self.radius, 2)}"


def _to_fraction(x: mpmath.mpf) -> Fraction:
    if not mpmath.isfinite(x):
        raise Undecided("to_fraction", 0, "unbounded interval endpoint")
    sign, man, exp, _ = x._mpf_  # man_exp drops the sign
    man = -int(man) if sign else int(man)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


def _from_endpoints(lo: mpmath.mpf, hi: mpmath.mpf, prec: int) -> CertifiedReal:
    ctx = _ctx(prec)
    # endpoints are already exact; assemble without rounding
    return CertifiedReal((ctx.mpf(lo)._mpi_[0], ctx.mpf(hi)._mpi_[1]), prec)


RealSource = Union[CertifiedReal, Callable[[int], CertifiedReal]]


def realize(source: "RealSource | Number", prec: int) -> CertifiedReal:
    """Evaluate a real source at ``prec`` bits.

    Callables are re-evaluated (so precision escalation helps); a fixed
    :class:`CertifiedReal` is returned unchanged.
    """
    if isinstance(source, CertifiedReal):
        return source
    if callable(source):
        return source(prec)
    return CertifiedReal.exact(source, prec)


def escalate(
    compute: Callable[[int], object],
    operation: str,
    start: int | None = None,
    cap: int | None = None,
):
    """Run ``compute(prec)`` with doubling precision until it stops raising Undecided."""
    policy = current_policy()
    cap = policy.cap if cap is None else cap
    prec = min(policy.start if start is None else start, cap)
    while True:
        try:
            return compute(prec)
        except Undecided as exc:
            if prec >= cap:
                raise PrecisionExhausted(operation, prec, exc.detail) from None
            prec = min(2 * prec, cap)


# constants of Q(sqrt 5) ------------------------------------------------


def sqrt5(prec: int) -> CertifiedReal:
    return CertifiedReal.exact(5, prec).sqrt()


def alpha(prec: int) -> CertifiedReal:
    return (sqrt5(prec) + 1) / 2


def abs_beta(prec: int) -> CertifiedReal:
    """|β| = (√5 − 1)/2, computed from √5 rather than as 1/α."""
    return (sqrt5(prec) - 1) / 2


def log_alpha(prec: int) -> CertifiedReal:
    return alpha(prec).log()


def pi(prec: int) -> CertifiedReal:
    return CertifiedReal._wrap(_ctx(prec).pi, prec)
