"""Stage orchestration and the serializable report.

Stages run in the order bounds, reduction, search, corollaries,
cross-checks.  Every stage stores plain JSON values in the report, so a
report survives ``from_json(to_json())`` unchanged.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath

from . import bounds as bounds_mod
from . import reduction as red
from .algebraic import ABS_BETA, ALPHA, ProductForm, product_equals_one
from .certified import CertifiedReal, alpha, precision
from .equations import F_LL, L_FF, EquationKind
from .errors import ConfigError, InvariantViolation
from .expressions import parse_real
from .fixtures import FALLBACK_M_MAX, FALLBACK_N_MAX, FIXTURE_M, PUBLISHED_CONSTANTS, Q47
from .search import (
    SearchRange,
    common_terms,
    cross_check_prior,
    enumerate_solutions,
    naive_solutions,
    square_cases,
)
from .sequences import Seq, binet_round, fib, fib_matrix, growth_chains, lucas

TAU_MU_SOURCES = ("derived", "paper-fixture", "user-supplied")
FORMATS = ("human", "structured")
STAGES = ("bounds", "reduction", "search", "corollaries", "cross_checks")

PUBLISHED_SOLUTIONS = {
    F_LL: {(1, 1, 1), (2, 1, 1), (4, 1, 2), (8, 2, 4)},
    L_FF: {(1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 1, 4), (2, 2, 4), (3, 3, 3)},
}


@dataclass(frozen=True)
class PipelineConfig:
    equations: tuple[EquationKind, ...] = (F_LL, L_FF)
    m_max: int | None = None
    n_max: int | None = None
    precision_start: int = 256
    precision_cap: int = 16384
    tau_mu_source: str = "derived"
    tau: str | None = None
    mu: str | None = None
    reduce_A: str = "34"
    reduce_B: str = "alpha**2"
    reduce_M: int = FIXTURE_M
    output_format: str = "human"
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "equations", tuple(EquationKind(e) for e in self.equations))
        if not self.equations:
            raise ConfigError("at least one equation is required")
        for name in ("m_max", "n_max"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ConfigError(f"{name} must be at least 1")
        if self.precision_start < 2 or self.precision_cap < 2:
            raise ConfigError("precision must be at least 2 bits")
        if self.precision_start > self.precision_cap:
            raise ConfigError(f"precision start ({self.precision_start}) exceeds cap ({self.precision_cap})")
        if self.tau_mu_source not in TAU_MU_SOURCES:
            raise ConfigError(f"tau/mu source must be one of {', '.join(TAU_MU_SOURCES)}")
        if self.tau_mu_source == "user-supplied" and (self.tau is None or self.mu is None):
            raise ConfigError("user-supplied tau/mu needs both --tau and --mu")
        if self.output_format not in FORMATS:
            raise ConfigError(f"output format must be one of {', '.join(FORMATS)}")
        if self.reduce_M < 1:
            raise ConfigError("M must be at least 1")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")

    @property
    def search_range(self) -> SearchRange:
        return SearchRange(self.m_max or FALLBACK_M_MAX, self.n_max or FALLBACK_N_MAX)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["equations"] = [e.value for e in self.equations]
        d["reduce_M"] = str(self.reduce_M)
        return d


@dataclass
class PipelineReport:
    config: dict
    constants: list = field(default_factory=list)
    bounds: dict = field(default_factory=dict)
    reduction: dict = field(default_factory=dict)
    search: dict = field(default_factory=dict)
    corollaries: dict = field(default_factory=dict)
    discrepancies: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    def to_dict(self, include_timing: bool = True) -> dict:
        d = asdict(self)
        if not include_timing:
            d.pop("timing")
        return d

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineReport":
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "PipelineReport":
        return cls.from_dict(json.loads(text))

    @property
    def failed_invariants(self) -> list[dict]:
        return [c for c in self.checks if c["category"] == "invariant" and c["status"] == "fail"]


# helpers --------------------------------------------------------------------


def _cr(value: CertifiedReal) -> dict:
    return value.to_dict()


def _relative_deviation(value: CertifiedReal, printed: str) -> str:
    with mpmath.workprec(64):
        ref = mpmath.mpf(printed)
        return mpmath.nstr((value.midpoint - ref) / ref, 4)


def _step_value(v) -> dict:
    if isinstance(v, CertifiedReal):
        return _cr(v)
    return {"exact": str(v)}


# stages ---------------------------------------------------------------------


def stage_bounds(config: PipelineConfig, report: PipelineReport) -> dict:
    out = {}
    for kind in config.equations:
        chain = bounds_mod.equation_chain(kind)
        steps = []
        for s in chain.provenance:
            row = {"label": f"{kind.value}.{s.label}", "description": s.description,
                   "value": _step_value(s.value), "published": s.published}
            if s.published is not None:
                value = s.value if isinstance(s.value, CertifiedReal) else CertifiedReal.exact(s.value)
                row["relative_deviation"] = _relative_deviation(value, s.published)
            steps.append(row)
            report.constants.append(row)
        entry = {"k_bound": str(chain.k_bound), "m_bound": str(chain.m_bound),
                 "n_bound": str(chain.n_bound), "steps": steps,
                 "vanishing_forms": {name: [list(h) for h in hits] for name, hits in
                                     bounds_mod.vanishing_cases(kind, config.search_range.m_max).items()}}
        if kind is L_FF:
            # the published m-coefficient fed through the rest of the chain
            pub = bounds_mod.equation_chain(kind, m_coefficient=Fraction(752, 1) * 10**9)
            n_row = next(s for s in pub.provenance if s.label == "n.bound")
            row = {"label": "L=FF.n.bound_from_published_m_coefficient",
                   "description": "n bound with the published m-coefficient 7.52e11",
                   "value": _step_value(n_row.value), "published": n_row.published,
                   "relative_deviation": _relative_deviation(CertifiedReal.exact(n_row.value), n_row.published)}
            report.constants.append(row)
            entry["n_bound_from_published_m_coefficient"] = str(pub.n_bound + 1)
        out[kind.value] = entry
    return out


def stage_reduction(config: PipelineConfig, report: PipelineReport) -> dict:
    out: dict = {"source": config.tau_mu_source}
    if config.tau_mu_source == "derived":
        for kind in config.equations:
            out[kind.value] = red.reduce_equation(kind).to_dict()
    elif config.tau_mu_source == "paper-fixture":
        # τ = log α / log|β| is −1 exactly because α·|β| = 1
        rational = product_equals_one(ProductForm((ALPHA, ABS_BETA), (1, 1)))
        out["lemma_status"] = "inconclusive"
        out["detail"] = ("τ = log α / log|β| equals −1 exactly, so it has no convergent with q > 6M"
                         if rational else "τ is irrational")
        out["fixtures"] = [red.evaluate_fixture(c, Q47, FIXTURE_M).to_dict() for c in red.fixture_candidates()]
        out["q47_exceeds_6M"] = Q47 > 6 * FIXTURE_M
        report.notes.append("reduction inconclusive with the printed τ; searching the fallback range")
    else:
        tau, mu = parse_real(config.tau), parse_real(config.mu)
        A, B = parse_real(config.reduce_A), parse_real(config.reduce_B)
        inst = red.ReductionInstance(tau, mu, A, B, config.reduce_M)
        out["instance"] = {"tau": config.tau, "mu": config.mu, "A": config.reduce_A,
                           "B": config.reduce_B, "M": str(config.reduce_M)}
        out["result"] = red.dp_reduce(inst).to_dict()
        cand = red.FixtureCandidate("user-supplied", f"τ = {config.tau}, μ = {config.mu}", tau, mu)
        out["fixtures"] = [red.evaluate_fixture(cand, Q47, FIXTURE_M).to_dict()]
    return out


def stage_search(config: PipelineConfig, report: PipelineReport) -> dict:
    rng = config.search_range
    out = {"m_max": rng.m_max, "n_max": rng.n_max, "k_rule": "k <= n + m + 4"}
    for kind in config.equations:
        sols = enumerate_solutions(kind, rng, workers=config.workers)
        entry = {"solutions": [list(t) for t in sols],
                 "range_limited": rng.m_max < FALLBACK_M_MAX or rng.n_max < FALLBACK_N_MAX}
        reduced = report.reduction.get(kind.value)
        if isinstance(reduced, dict) and "m_bound" in reduced:
            entry["covers_reduced_bounds"] = rng.m_max >= reduced["m_bound"] and rng.n_max >= reduced["n_bound"]
        out[kind.value] = entry
    return out


def stage_corollaries(config: PipelineConfig, report: PipelineReport) -> dict:
    limit = config.n_max or FALLBACK_N_MAX
    return {
        "limit": limit,
        "common_terms": sorted(common_terms(limit)),
        "common_terms_with_index_zero": sorted(common_terms(limit, include_zero=True)),
        "lucas_square_fibonacci": [list(t) for t in square_cases(F_LL, limit)],
        "fibonacci_square_lucas": [list(t) for t in square_cases(L_FF, limit)],
    }


def stage_cross_checks(config: PipelineConfig, report: PipelineReport) -> list:
    sols = {}
    for kind in (F_LL, L_FF):
        if kind.value in report.search:
            sols[kind] = tuple(tuple(t) for t in report.search[kind.value]["solutions"])
        else:
            sols[kind] = enumerate_solutions(kind, config.search_range)
    return [c.to_dict() for c in cross_check_prior(solutions=sols)]


# verification items ---------------------------------------------------------


def _check(name: str, category: str, passed: bool, detail: str = "", status: str | None = None) -> dict:
    return {"name": name, "category": category,
            "status": status or ("pass" if passed else "fail"), "detail": detail}


def _within(value: CertifiedReal, printed: str, tol: str) -> bool:
    with mpmath.workprec(64):
        ref, t = mpmath.mpf(printed), mpmath.mpf(tol)
        return abs(value.midpoint - ref) <= t * ref


def verification_items(config: PipelineConfig, report: PipelineReport) -> list[dict]:
    items = []
    rng = config.search_range
    report.notes.append("Fibonacci growth bounds are checked from n = 1; F_0 = 0 violates their lower bounds")
    for kind in config.equations:
        found = {tuple(t) for t in report.search[kind.value]["solutions"]}
        expected = {t for t in PUBLISHED_SOLUTIONS[kind] if t[1] <= rng.m_max and t[2] <= rng.n_max}
        limited = report.search[kind.value]["range_limited"]
        items.append(_check(f"solution set {kind.value}", "invariant", found == expected,
                            f"{len(found)} triples" + (" (range-limited)" if limited else ""),
                            status=("range-limited" if limited and found == expected else None)))
        naive = naive_solutions(kind, rng.m_max, rng.n_max)
        items.append(_check(f"naive oracle agrees {kind.value}", "invariant", naive == found))
        items.append(_check(f"k <= n + m + 4 for {kind.value}", "invariant",
                            all(k <= n + m + 4 for k, m, n in found)))

    for kind in config.equations:
        entry = report.bounds.get(kind.value)
        if entry:
            hits = {name: h for name, h in entry["vanishing_forms"].items() if h}
            items.append(_check(f"linear forms of {kind.value} never vanish (m <= {rng.m_max})", "invariant",
                                not hits, f"vanishing at {hits}" if hits else "coefficients are non-units"))

    fib_ok = [n for n in range(1, 1001) if not all(growth_chains(n, Seq.FIBONACCI).values())]
    items.append(_check("growth bounds Fibonacci 1..1000", "reproduction", not fib_ok, f"failing n: {fib_ok[:5]}"))
    luc_fail = {n: [k for k, v in growth_chains(n, Seq.LUCAS).items() if not v] for n in range(0, 1001)}
    luc_fail = {n: v for n, v in luc_fail.items() if v}
    items.append(_check("growth bounds Lucas 0..1000", "reproduction", not luc_fail,
                        "; ".join(f"n={n}: {','.join(v)} fails" for n, v in luc_fail.items())))

    items.append(_check("binet_round = fib for n <= 1000", "invariant",
                        all(binet_round(n) == fib(n) for n in range(0, 1001))))
    items.append(_check("fast doubling = matrix power for n <= 1000", "invariant",
                        all(fib(n) == fib_matrix(n) for n in range(0, 1001))))
    items.append(_check("L_n = F_(n-1) + F_(n+1) for 1 <= n <= 1000", "invariant",
                        all(lucas(n) == fib(n - 1) + fib(n + 1) for n in range(1, 1001))))
    cf = red.cf_expand(alpha, 200)
    items.append(_check("golden ratio continued fraction (200 terms)", "invariant",
                        set(cf.partial_quotients) == {1}
                        and all(q == fib(i + 1) for i, q in enumerate(cf.denominators))))

    cor = report.corollaries
    if cor:
        items.append(_check("common terms are {1, 3}", "reproduction", cor["common_terms"] == [1, 3]))
        items.append(_check("Lucas-square Fibonacci numbers", "reproduction",
                            cor["lucas_square_fibonacci"] == [[1, 1, 1], [2, 1, 1]]))
        items.append(_check("Fibonacci-square Lucas numbers", "reproduction",
                            cor["fibonacci_square_lucas"] == [[1, 1, 1], [1, 2, 2], [3, 3, 3]]))
    if report.discrepancies:
        wang = next(c for c in report.discrepancies if c["source"] == "Wang" and c["equation"] == "L=FF")
        carlitz = next(c for c in report.discrepancies if c["source"] == "Carlitz" and c["equation"] == "F=LL")
        items.append(_check("prior claims cross-checked", "reproduction",
                            wang["verdict"] == "refuted" and [3, 3, 3] in wang["evidence"]
                            and carlitz["normalized"] == [8, 2, 4]))

    tolerances = {"lambda1.coefficient": "0.01", "m.coefficient": "0.01",
                  "lambda2.coefficient_per_m": "0.01", "lambda2.coefficient_squared": "0.02", "n.bound": "0.02"}
    for kind in config.equations:
        chain = bounds_mod.equation_chain(kind)
        for s in chain.provenance:
            if s.published and s.label in tolerances:
                v = s.value if isinstance(s.value, CertifiedReal) else CertifiedReal.exact(s.value)
                items.append(_check(f"{kind.value}.{s.label} within {tolerances[s.label]} of {s.published}",
                                    "reproduction", _within(v, s.published, tolerances[s.label]),
                                    mpmath.nstr(v.midpoint, 6)))
    if L_FF in config.equations:
        pub = bounds_mod.equation_chain(L_FF, m_coefficient=Fraction(752, 1) * 10**9)
        v = CertifiedReal.exact(pub.n_bound + 1)
        items.append(_check("L=FF n bound from the published m-coefficient within 0.02 of 2.25e27",
                            "reproduction", _within(v, "2.25e27", "0.02"), mpmath.nstr(v.midpoint, 6)))
    return items


# entry points ----------------------------------------------------------------


_STAGE_FUNCS = {
    "bounds": stage_bounds,
    "reduction": stage_reduction,
    "search": stage_search,
    "corollaries": stage_corollaries,
    "cross_checks": stage_cross_checks,
}
_REPORT_FIELD = {"cross_checks": "discrepancies"}


def run(config: PipelineConfig, stages: tuple[str, ...] = STAGES) -> PipelineReport:
    report = PipelineReport(config=config.to_dict())
    with precision(config.precision_start, config.precision_cap):
        for name in STAGES:
            if name not in stages:
                continue
            t0 = time.perf_counter()
            setattr(report, _REPORT_FIELD.get(name, name), _STAGE_FUNCS[name](config, report))
            report.timing[name] = round(time.perf_counter() - t0, 4)
    return report


def verify(config: PipelineConfig) -> PipelineReport:
    report = run(config)
    with precision(config.precision_start, config.precision_cap):
        t0 = time.perf_counter()
        report.checks = verification_items(config, report)
        report.timing["verify"] = round(time.perf_counter() - t0, 4)
    return report


def raise_on_invariant_failure(report: PipelineReport) -> None:
    failed = report.failed_invariants
    if failed:
        raise InvariantViolation("; ".join(c["name"] for c in failed))
