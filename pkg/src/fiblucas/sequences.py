"""Exact Fibonacci and Lucas numbers, Binet approximants and growth bounds."""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache

from .certified import CertifiedReal, abs_beta, alpha, current_policy, escalate, sqrt5


class Seq(str, enum.Enum):
    FIBONACCI = "F"
    LUCAS = "L"


def _check_index(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"sequence index must be an int, got {type(n).__name__}")
    if n < 0:
        raise ValueError(f"sequence index must be non-negative, got {n}")


def fib_pair(n: int) -> tuple[int, int]:
    """Return ``(F_n, F_{n+1})`` by fast doubling.

    Uses F_{2k} = F_k (2F_{k+1} - F_k) and F_{2k+1} = F_k^2 + F_{k+1}^2,
    walking the bits of ``n`` from the top.
    """
    _check_index(n)
    a, b = 0, 1
    for bit in bin(n)[2:]:
        c = a * (2 * b - a)
        d = a * a + b * b
        if bit == "1":
            a, b = d, c + d
        else:
            a, b = c, d
    return a, b


@lru_cache(maxsize=4096)
def fib(n: int) -> int:
    return fib_pair(n)[0]


@lru_cache(maxsize=4096)
def lucas(n: int) -> int:
    f, g = fib_pair(n)
    return 2 * g - f


def fib_matrix(n: int) -> int:
    """F_n from the power of [[1, 1], [1, 0]]; a second exact kernel for cross-checks."""
    _check_index(n)
    result = (1, 0, 0, 1)
    base = (1, 1, 1, 0)
    while n:
        if n & 1:
            result = _mat_mul(result, base)
        base = _mat_mul(base, base)
        n >>= 1
    return result[1]


def _mat_mul(x, y):
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def term(which: Seq, n: int) -> int:
    return fib(n) if Seq(which) is Seq.FIBONACCI else lucas(n)


def binet_round(n: int, precision: int | None = None) -> int:
    """Nearest integer to α^n/√5, with the rounding certified.

    The working precision starts at ``precision`` (or the policy default,
    raised to what n needs) and doubles until the rounding is decided.
    """
    _check_index(n)
    policy = current_policy()
    start = precision or max(policy.start, int(0.7 * n) + 64)
    half = Fraction(1, 2)

    def compute(prec: int) -> int:
        approx = alpha(prec) ** n / sqrt5(prec)
        return (approx + half).floor("binet_round")

    return escalate(compute, "binet_round", start=min(start, policy.cap))


def _certainly_le(lhs: CertifiedReal | int, rhs: CertifiedReal | int, prec: int) -> bool:
    left = lhs if isinstance(lhs, CertifiedReal) else CertifiedReal.exact(lhs, prec)
    return left.compare(rhs, "growth_bounds") <= 0


def growth_chains(n: int, which: Seq) -> dict[str, bool]:
    """Evaluate each applicable growth chain separately.

    Fibonacci (n >= 1):  α^(n-2) <= F_n <= α^(n-1)   and  |β|^-(n-2) <= F_n <= |β|^-(n-1)
    Lucas (n >= 0):      α^(n-1) <= L_n <= 2 α^n     and  |β|^-(n-1) <= L_n <= |β|^-(n+1)

    Keys are ``"P1"``..``"P4"``; each value is the certified truth of the
    two-sided chain.  |β| is computed as (√5 − 1)/2, independently of α.
    """
    _check_index(n)
    which = Seq(which)
    if which is Seq.FIBONACCI and n < 1:
        raise ValueError("Fibonacci growth bounds require n >= 1 (F_0 = 0)")
    value = term(which, n)

    def compute(prec: int) -> dict[str, bool]:
        a, b = alpha(prec), abs_beta(prec)
        if which is Seq.FIBONACCI:
            return {
                "P1": _certainly_le(a ** (n - 2), value, prec) and _certainly_le(value, a ** (n - 1), prec),
                "P3": _certainly_le(b ** (2 - n), value, prec) and _certainly_le(value, b ** (1 - n), prec),
            }
        return {
            "P2": _certainly_le(a ** (n - 1), value, prec) and _certainly_le(value, 2 * a**n, prec),
            "P4": _certainly_le(b ** (1 - n), value, prec) and _certainly_le(value, b ** (-n - 1), prec),
        }

    return escalate(compute, "growth_bounds_hold")


def growth_bounds_hold(n: int, which: Seq) -> bool:
    return all(growth_chains(n, which).values())


__all__ = [
    "Seq",
    "binet_round",
    "fib",
    "fib_matrix",
    "fib_pair",
    "growth_bounds_hold",
    "growth_chains",
    "lucas",
    "term",
]
