"""Exhaustive solution search, membership tests, corollaries, prior claims."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple

from .bounds import index_upper_bound
from .equations import F_LL, L_FF, EquationKind
from .errors import InvariantViolation
from .sequences import fib, lucas

_LOG_ALPHA = math.log((1 + math.sqrt(5)) / 2)
_LOG_SQRT5 = 0.5 * math.log(5)


def _log(v: int) -> float:
    # math.log accepts arbitrarily large ints
    return math.log(v)


def _bracket(v: int, term: Callable[[int], int], estimate: int, first: int) -> int:
    """Largest n >= first with term(n) <= v, for an increasing tail of ``term``."""
    n = max(first, estimate)
    while n > first and term(n) > v:
        n -= 1
    while term(n + 1) <= v:
        n += 1
    return n


def fib_index_of(v: int) -> frozenset[int]:
    """All n >= 1 with F_n = v."""
    if v < 0:
        raise ValueError("value must be non-negative")
    if v == 0:
        return frozenset()
    if v == 1:
        return frozenset({1, 2})
    # F_n ≈ α^n/√5; the estimate is corrected exactly by the bracket walk
    estimate = int(round((_log(v) + _LOG_SQRT5) / _LOG_ALPHA))
    n = _bracket(v, fib, estimate, 2)
    return frozenset({n}) if fib(n) == v else frozenset()


def lucas_index_of(v: int) -> frozenset[int]:
    """All n >= 1 with L_n = v (L_0 = 2 is excluded)."""
    if v < 0:
        raise ValueError("value must be non-negative")
    if v == 0:
        return frozenset()
    estimate = int(round(_log(v) / _LOG_ALPHA))
    n = _bracket(v, lucas, estimate, 1)
    return frozenset({n}) if lucas(n) == v else frozenset()


INDEX_OF = {F_LL: fib_index_of, L_FF: lucas_index_of}


class SolutionTriple(NamedTuple):
    k: int
    m: int
    n: int

    @classmethod
    def checked(cls, kind: EquationKind, k: int, m: int, n: int) -> "SolutionTriple":
        if m > n:
            m, n = n, m
        if not (k >= 1 and 1 <= m):
            raise InvariantViolation(f"indices out of range: {(k, m, n)}")
        if not kind.holds(k, m, n):
            raise InvariantViolation(f"{(k, m, n)} does not satisfy {kind}")
        return cls(k, m, n)


@dataclass(frozen=True)
class SearchRange:
    """1 <= m <= min(m_max, n), 1 <= n <= n_max, 1 <= k <= k_rule(m, n)."""

    m_max: int
    n_max: int
    k_rule: Callable[[int, int], int] = field(default=index_upper_bound, compare=False)

    def __post_init__(self) -> None:
        if self.m_max < 0 or self.n_max < 0:
            raise ValueError("search bounds must be non-negative")


def _slice(kind: EquationKind, n: int, m_max: int, k_rule) -> list[SolutionTriple]:
    index_of = INDEX_OF[kind]
    factor = kind.rhs_factor
    fn = factor(n)
    found = []
    for m in range(1, min(m_max, n) + 1):
        k_max = k_rule(m, n)
        for k in sorted(index_of(factor(m) * fn)):
            if k <= k_max:
                found.append(SolutionTriple.checked(kind, k, m, n))
    return found


def _slice_star(args):
    return _slice(*args)


def enumerate_solutions(
    kind: EquationKind, search_range: SearchRange, workers: int = 1
) -> tuple[SolutionTriple, ...]:
    """Every solution in range, ordered by (n, m, k).

    With ``workers`` > 1 the n-slices run in separate processes; the result
    is the same either way.
    """
    kind = EquationKind(kind)
    jobs = [(kind, n, search_range.m_max, search_range.k_rule) for n in range(1, search_range.n_max + 1)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            slices = list(pool.map(_slice_star, jobs, chunksize=8))
    else:
        slices = [_slice(*job) for job in jobs]
    solutions = {t for s in slices for t in s}
    return tuple(sorted(solutions, key=lambda t: (t.n, t.m, t.k)))


def naive_solutions(kind: EquationKind, m_max: int, n_max: int) -> set[tuple[int, int, int]]:
    """Double loop with a linear scan over k; oracle for :func:`enumerate_solutions`."""
    lhs = [fib, lucas][kind is L_FF]
    factor = kind.rhs_factor
    out = set()
    for n in range(1, n_max + 1):
        for m in range(1, min(m_max, n) + 1):
            target = factor(m) * factor(n)
            k = 1
            while True:
                v = lhs(k)
                if v == target:
                    out.add((k, m, n))
                if v > target and k > 2:
                    break
                k += 1
    return out


def common_terms(limit: int, include_zero: bool = False) -> frozenset[int]:
    """Values F_k = L_n with 1 <= k, n <= limit (0 <= k, n with include_zero)."""
    if limit < 1:
        raise ValueError("limit must be at least 1")
    start = 0 if include_zero else 1
    fibs = {fib(k) for k in range(start, limit + 1)}
    return frozenset(v for v in (lucas(n) for n in range(start, limit + 1)) if v in fibs)


def square_cases(kind: EquationKind, limit: int) -> tuple[SolutionTriple, ...]:
    """Solutions with m = n <= limit: F_k = L_n^2 or L_k = F_n^2."""
    kind = EquationKind(kind)
    if limit < 0:
        raise ValueError("limit must be non-negative")
    index_of = INDEX_OF[kind]
    found = []
    for n in range(1, limit + 1):
        v = kind.rhs_factor(n) ** 2
        for k in sorted(index_of(v)):
            if k <= index_upper_bound(n, n):
                found.append(SolutionTriple.checked(kind, k, n, n))
    return tuple(found)


# prior claims ------------------------------------------------------------


@dataclass(frozen=True)
class ClaimCheck:
    source: str
    equation: EquationKind
    claim: str
    verdict: str  # confirmed | refuted
    complete: bool  # does the claim account for every solution in its scope?
    normalized: tuple[int, int, int] | None
    evidence: tuple[tuple[int, int, int], ...]

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "equation": self.equation.value,
            "claim": self.claim,
            "verdict": self.verdict,
            "complete": self.complete,
            "normalized": None if self.normalized is None else list(self.normalized),
            "evidence": [list(t) for t in self.evidence],
        }


def normalize(triple: Iterable[int]) -> tuple[int, int, int]:
    k, m, n = triple
    return (k, min(m, n), max(m, n))


def cross_check_prior(
    kind: EquationKind | None = None,
    solutions: dict[EquationKind, tuple[SolutionTriple, ...]] | None = None,
) -> tuple[ClaimCheck, ...]:
    """Evaluate the earlier published claims on both equations against the search.

    ``solutions`` defaults to the full search over m <= 75, n <= 160.
    """
    if solutions is None:
        rng = SearchRange(75, 160)
        solutions = {K: enumerate_solutions(K, rng) for K in (F_LL, L_FF)}
    truth = {K: {tuple(t) for t in v} for K, v in solutions.items()}
    checks: list[ClaimCheck] = []

    # Carlitz: F_k = L_m L_n has the unique solution (8, 4, 2) for m >= n > 1
    claimed = normalize((8, 4, 2))
    scope = sorted(t for t in truth[F_LL] if t[1] > 1)
    checks.append(ClaimCheck(
        "Carlitz", F_LL, "(8, 4, 2) is the only solution with m >= n > 1",
        "confirmed" if scope == [claimed] else "refuted",
        scope == [claimed], claimed, tuple(scope)))

    # Carlitz: L_k = F_m F_n has no solution for m >= n > 2
    scope = sorted(t for t in truth[L_FF] if t[1] > 2)
    checks.append(ClaimCheck(
        "Carlitz", L_FF, "no solution with m >= n > 2",
        "confirmed" if not scope else "refuted", not scope, None, tuple(scope)))

    # Wang et al.: L_k = F_m F_n has no solution
    scope = sorted(truth[L_FF])
    checks.append(ClaimCheck(
        "Wang", L_FF, "no solution",
        "confirmed" if not scope else "refuted", not scope, None, tuple(scope)))

    # Wang et al.: (4, 2, 1) is a solution of F_k = L_m L_n
    claimed = normalize((4, 2, 1))
    holds = F_LL.holds(*claimed)
    others = tuple(sorted(t for t in truth[F_LL] if t != claimed))
    checks.append(ClaimCheck(
        "Wang", F_LL, "(4, 2, 1) is a solution",
        "confirmed" if holds and claimed in truth[F_LL] else "refuted",
        not others, claimed, others))

    if kind is not None:
        kind = EquationKind(kind)
        checks = [c for c in checks if c.equation is kind]
    return tuple(checks)
