"""The two equations F_k = L_m L_n and L_k = F_m F_n and their linear forms.

For each equation two small linear forms arise from Binet's formulas,
written with the "product side over the single-term side" orientation:

=========  ==========================  ==========================
equation   first form (bound K/α^2m)    second form (bound K/α^n)
=========  ==========================  ==========================
F = LL     √5 · α^(m+n-k) − 1            √5 L_m · α^(n-k) − 1
L = FF     (1/5) · α^(m+n-k) − 1         (F_m/√5) · α^(n-k) − 1
=========  ==========================  ==========================

The ``derived`` constants K below follow from the exact identities

    F=LL:  √5 α^(m+n-k)      = (1 − r^k) / ((1 + r^m)(1 + r^n))
           √5 L_m α^(n-k)     = (1 − r^k) / (1 + r^n)
    L=FF:  (1/5) α^(m+n-k)   = (1 + r^k) / ((1 − r^m)(1 − r^n))
           (F_m/√5) α^(n-k)  = (1 + r^k) / (1 − r^n)

with r = β/α, |r| = α^-2, together with k >= m, k >= n (F = LL) and
k >= m − 3, k >= n − 3 (L = FF), which the growth bounds give at any
solution.  ``published`` constants are the ones printed for F = LL.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from .algebraic import ALPHA, ABS_BETA, SQRT5, QuadraticNumber
from .sequences import fib, lucas


class EquationKind(str, enum.Enum):
    FIB_EQUALS_LUCAS_PRODUCT = "F=LL"
    LUCAS_EQUALS_FIB_PRODUCT = "L=FF"

    @classmethod
    def parse(cls, text: str) -> "EquationKind":
        aliases = {
            "F=LL": cls.FIB_EQUALS_LUCAS_PRODUCT,
            "FibEqualsLucasProduct": cls.FIB_EQUALS_LUCAS_PRODUCT,
            "L=FF": cls.LUCAS_EQUALS_FIB_PRODUCT,
            "LucasEqualsFibProduct": cls.LUCAS_EQUALS_FIB_PRODUCT,
        }
        try:
            return aliases[text]
        except KeyError:
            raise ValueError(
                f"unknown equation kind {text!r}; valid kinds: F=LL, L=FF"
            ) from None

    @property
    def lhs(self) -> Callable[[int], int]:
        return fib if self is EquationKind.FIB_EQUALS_LUCAS_PRODUCT else lucas

    @property
    def rhs_factor(self) -> Callable[[int], int]:
        return lucas if self is EquationKind.FIB_EQUALS_LUCAS_PRODUCT else fib

    def holds(self, k: int, m: int, n: int) -> bool:
        return self.lhs(k) == self.rhs_factor(m) * self.rhs_factor(n)

    def __str__(self) -> str:
        return self.value


F_LL = EquationKind.FIB_EQUALS_LUCAS_PRODUCT
L_FF = EquationKind.LUCAS_EQUALS_FIB_PRODUCT


@dataclass(frozen=True)
class FormShape:
    """One linear form: coefficient(m) · α^(exponent) − 1 < K / α^(rate_power · x).

    ``x`` is m for the first form and n for the second.  When the third
    Matveev base depends on m, ``majorant_per_m(prec)`` is the constant c
    with A_3 = c·m used in the bound chain.
    """

    name: str
    coefficient: Callable[[int], QuadraticNumber]
    rate_power: int
    k_derived: int
    k_published: int | None
    majorant_base: QuadraticNumber | None = None
    majorant_label: str | None = None

    @property
    def k_chain(self) -> int:
        return self.k_published if self.k_published is not None else self.k_derived


FORMS: dict[EquationKind, tuple[FormShape, FormShape]] = {
    F_LL: (
        FormShape("lambda1", lambda m: SQRT5, 2, k_derived=11, k_published=8),
        FormShape(
            "lambda2", lambda m: SQRT5 * lucas(m), 1, k_derived=4, k_published=33,
            majorant_base=ALPHA**6, majorant_label="6·m·log α",
        ),
    ),
    L_FF: (
        FormShape("lambda1", lambda m: QuadraticNumber(1, 0, 5), 2, k_derived=55, k_published=None),
        FormShape(
            "lambda2", lambda m: QuadraticNumber(0, fib(m), 5), 1, k_derived=31, k_published=None,
            majorant_base=QuadraticNumber(5), majorant_label="m·log 5",
        ),
    ),
}


def form_exponent(shape: FormShape, k: int, m: int, n: int) -> int:
    """Exponent of α in the form: m + n − k for the first, n − k for the second."""
    return (m + n - k) if shape.name == "lambda1" else (n - k)


# the three Matveev bases as written in the published argument: α, |β|, η3
MATVEEV_BASES = (ALPHA, ABS_BETA)
