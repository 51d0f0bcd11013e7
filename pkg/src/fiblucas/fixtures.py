"""Read-only table of published constants, shown next to recomputed values.

Each entry records where in the argument the number appears, the value as
printed, and how the printed value relates to the quantity it stands for
(an upper estimate, a lower estimate, or an exact value).
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType


@dataclass(frozen=True)
class PublishedConstant:
    label: str
    printed: str
    role: str
    relation: str  # "upper", "lower" or "exact"


_ENTRIES = [
    PublishedConstant("F=LL.lambda1.coefficient", "3.62e11", "Matveev coefficient of the first form", "upper"),
    PublishedConstant("F=LL.m.coefficient", "3.77e11", "coefficient of (1 + log 4n) in the bound for m", "upper"),
    PublishedConstant("F=LL.lambda2.coefficient_per_m", "6.49e11", "Matveev coefficient of the second form per unit m", "upper"),
    PublishedConstant("F=LL.lambda2.coefficient_squared", "2.45e23", "coefficient of (1 + log 4n)^2 after eliminating m", "upper"),
    PublishedConstant("F=LL.n.bound", "2.18e27", "absolute bound on n", "upper"),
    PublishedConstant("L=FF.m.coefficient", "7.52e11", "coefficient of (1 + log 4n) in the bound for m", "upper"),
    PublishedConstant("L=FF.n.bound", "2.25e27", "absolute bound on n", "upper"),
    PublishedConstant("F=LL.lambda1.K", "8", "numerator K of the first-form upper bound K/α^(2m)", "exact"),
    PublishedConstant("F=LL.lambda2.K", "33", "numerator K of the second-form upper bound K/α^n", "exact"),
    PublishedConstant("reduction.M", "9.1e27", "upper bound M on the convergent multiplier", "exact"),
    PublishedConstant("reduction.p47", "13949911361108065346183311454", "numerator of the convergent used", "exact"),
    PublishedConstant("reduction.q47", "92134223612043233793615516979", "denominator of the convergent used", "exact"),
    PublishedConstant("reduction.case1.epsilon", "0.486", "ε for the first case", "lower"),
    PublishedConstant("reduction.case1.A", "34", "constant A in the first case", "exact"),
    PublishedConstant("reduction.case1.m_bound", "73", "reduced bound on m", "upper"),
    PublishedConstant("reduction.case2.epsilon", "0.034", "smallest ε_m in the second case", "lower"),
    PublishedConstant("reduction.case2.A", "138", "constant A in the second case", "exact"),
    PublishedConstant("reduction.case2.n_bound", "160", "reduced bound on n", "upper"),
    PublishedConstant("L=FF.reduction.m_bound", "75", "reduced bound on m for L=FF", "upper"),
    PublishedConstant("L=FF.reduction.n_bound", "153", "reduced bound on n for L=FF", "upper"),
    PublishedConstant("search.m_max", "75", "final search range for m", "exact"),
    PublishedConstant("search.n_max", "160", "final search range for n", "exact"),
]

PUBLISHED_CONSTANTS = MappingProxyType({e.label: e for e in _ENTRIES})

Q47 = int(PUBLISHED_CONSTANTS["reduction.q47"].printed)
P47 = int(PUBLISHED_CONSTANTS["reduction.p47"].printed)
FIXTURE_M = 91 * 10**26
FALLBACK_M_MAX = 75
FALLBACK_N_MAX = 160


def printed(label: str) -> str:
    return PUBLISHED_CONSTANTS[label].printed
