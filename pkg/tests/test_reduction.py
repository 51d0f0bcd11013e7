import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiblucas.certified import CertifiedReal, alpha, log_alpha, pi, precision
from fiblucas.equations import F_LL, L_FF
from fiblucas.errors import PrecisionExhausted, Undecided
from fiblucas.fixtures import FIXTURE_M, P47, Q47
from fiblucas.reduction import (
    ReductionInstance,
    bridge_start,
    cf_expand,
    convergents,
    dp_reduce,
    evaluate_fixture,
    exp_bridge_holds,
    fixture_candidates,
    linear_form_residual,
    log_form_bound,
    nearest_int_distance,
    reduce_equation,
)
from fiblucas.search import enumerate_solutions, SearchRange


def sqrt_of(d):
    return lambda prec: CertifiedReal.exact(d, prec).sqrt()


def test_cf_of_known_constants():
    assert cf_expand(sqrt_of(2), 10).partial_quotients == (1,) + (2,) * 9
    assert cf_expand(pi, 13).partial_quotients == (3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14)
    e = cf_expand(lambda p: CertifiedReal.exact(1, p).exp(), 12).partial_quotients
    assert e == (2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8)
    assert cf_expand(pi, 5).convergents[:4] == ((3, 1), (22, 7), (333, 106), (355, 113))


def test_cf_of_rationals_is_exact_and_finite():
    cf = cf_expand(Fraction(415, 93), 50)
    assert cf.partial_quotients == (4, 2, 6, 7)
    assert cf.convergents[-1] == (415, 93)
    assert cf_expand(Fraction(-7, 3), 5).partial_quotients == (-3, 1, 2)


def test_cf_fixed_enclosure_gets_one_attempt():
    with pytest.raises(PrecisionExhausted):
        cf_expand(CertifiedReal.exact(2, 64).sqrt(), 200)


def test_cf_negative_irrational():
    cf = cf_expand(lambda p: -CertifiedReal.exact(2, p).sqrt(), 4)
    assert cf.partial_quotients == (-2, 1, 1, 2)


def test_cf_count_must_be_positive():
    with pytest.raises(ValueError):
        cf_expand(pi, 0)


@given(st.lists(st.integers(1, 1000), min_size=2, max_size=40), st.integers(-5, 5))
def test_convergent_recurrences(tail, a0):
    qs = [a0] + tail
    cv = convergents(qs)
    for i in range(1, len(cv)):
        (p0, q0), (p1, q1) = cv[i - 1], cv[i]
        assert p1 * q0 - p0 * q1 == (-1) ** (i + 1)
        assert q1 > q0 or i == 1
    value = Fraction(qs[-1])
    for a in reversed(qs[:-1]):
        value = a + 1 / value
    assert Fraction(*cv[-1]) == value


@given(st.integers(2, 300).filter(lambda d: math.isqrt(d) ** 2 != d))
@settings(max_examples=30, deadline=None)
def test_convergents_are_best_approximations(d):
    cf = cf_expand(sqrt_of(d), 12)
    with mpmath.workprec(300):
        tau = mpmath.sqrt(d)
        dist = lambda q: abs(q * tau - mpmath.nint(q * tau))
        for (_, q), (_, q_next) in zip(cf.convergents, cf.convergents[1:]):
            if q_next > 5000:
                break
            best = dist(q)
            assert all(dist(r) > best for r in range(1, q_next) if r != q)
            assert best < mpmath.mpf(1) / q_next


@pytest.mark.parametrize("tau", [sqrt_of(7), pi, lambda p: log_alpha(p) / CertifiedReal.exact(5, p).log()])
def test_convergent_approximation_at_index_47(tau):
    cf = cf_expand(tau, 49)
    q47, q48 = cf.denominators[47], cf.denominators[48]
    with precision(1024):
        t = tau(1024)
        assert nearest_int_distance(t * q47).compare(Fraction(1, q48)) < 0


def test_nearest_int_distance():
    assert nearest_int_distance(CertifiedReal.exact(Fraction(27, 10))).contains(Fraction(3, 10))
    assert nearest_int_distance(CertifiedReal.exact(Fraction(-27, 10))).contains(Fraction(3, 10))
    with pytest.raises(Undecided):
        nearest_int_distance(CertifiedReal.from_bounds(Fraction(49, 100), Fraction(51, 100)))


def test_reduction_instance_validation():
    with pytest.raises(ValueError):
        ReductionInstance(sqrt_of(2), sqrt_of(3), 1, 2, 0)
    with pytest.raises(ValueError):
        ReductionInstance(sqrt_of(2), sqrt_of(3), -1, 2)
    with pytest.raises(ValueError):
        ReductionInstance(sqrt_of(2), sqrt_of(3), 1, 1)


def brute_force_max_k(tau_d, mu_d, A, B, M):
    """Largest k with 0 < mτ − n + μ < A·B^(−k) for some m <= M."""
    with mpmath.workprec(400):
        tau, mu = mpmath.sqrt(tau_d), mpmath.sqrt(mu_d)
        smallest = min(mpmath.frac(m * tau + mu) for m in range(1, M + 1))
        return int(mpmath.floor(mpmath.log(A / smallest) / mpmath.log(B)))


def test_dp_reduce_example_against_brute_force():
    inst = ReductionInstance(sqrt_of(2), sqrt_of(3), 10, 2, 1000)
    result = dp_reduce(inst)
    assert result.reduced and result.method == "convergent"
    assert result.q > 6 * 1000
    assert result.q in cf_expand(sqrt_of(2), 40).denominators
    assert brute_force_max_k(2, 3, 10, 2, 1000) < result.k_bound


def test_dp_reduce_inconclusive_when_mu_is_zero():
    inst = ReductionInstance(sqrt_of(2), lambda p: CertifiedReal.exact(0, p), 10, 2, 100)
    result = dp_reduce(inst, max_tries=5)
    assert result.status == "inconclusive"
    assert len(result.attempts) == 5 and not any(a.accepted for a in result.attempts)
    assert result.k_bound is None


def test_dp_reduce_advances_past_non_positive_epsilon():
    for j in range(1, 400):
        inst = ReductionInstance(sqrt_of(3), lambda p, j=j: CertifiedReal.exact(Fraction(j, 401), p), 5, 2, 1000)
        result = dp_reduce(inst)
        if len(result.attempts) > 1:
            break
    else:  # pragma: no cover
        pytest.fail("no instance needed a second convergent")
    assert result.reduced
    assert [a.accepted for a in result.attempts] == [False] * (len(result.attempts) - 1) + [True]
    assert all(a.epsilon.hi <= 0 for a in result.attempts[:-1])
    assert result.attempts[-1].q == result.q


def test_dp_reduce_rational_tau():
    mu = lambda p: CertifiedReal.exact(2, p).log() / CertifiedReal.exact(3, p).log()
    result = dp_reduce(ReductionInstance(Fraction(1), mu, 10, 2))
    assert result.reduced and result.method == "rational" and result.q == 1
    assert float(result.epsilon) == pytest.approx(1 - math.log(2) / math.log(3))
    inst = ReductionInstance(Fraction(1, 3), Fraction(2, 3), 10, 2)
    assert dp_reduce(inst).status == "inconclusive"


@given(st.integers(1, 9), st.integers(2, 60), st.integers(1, 50), st.integers(2, 4))
@settings(max_examples=30, deadline=None)
def test_rational_reduction_is_sound(den, mu_d, A, B):
    if math.isqrt(mu_d) ** 2 == mu_d:
        return
    tau = Fraction(1, den)
    result = dp_reduce(ReductionInstance(tau, sqrt_of(mu_d), A, B))
    assert result.reduced
    # every m: the fractional part of (m/den + μ) is at least ‖den·μ‖/den
    with mpmath.workprec(300):
        mu = mpmath.sqrt(mu_d)
        smallest = min(mpmath.frac(mpmath.mpf(m) / den + mu) for m in range(0, den))
        assert A * mpmath.mpf(B) ** (-result.k_bound) <= smallest


def test_dp_reduce_precision_exhausted():
    with precision(16, 32), pytest.raises(PrecisionExhausted) as info:
        dp_reduce(ReductionInstance(sqrt_of(2), sqrt_of(3), 10, 2, 10**6))
    assert info.value.operation == "dp_reduce"


def test_exp_bridge_examples_and_domain():
    assert exp_bridge_holds(Fraction(1, 10))
    assert exp_bridge_holds(Fraction(-2, 5))
    assert exp_bridge_holds(Fraction(1, 4))
    assert exp_bridge_holds(Fraction(-49, 100))
    for bad in (Fraction(1, 2), Fraction(-1, 2), 0, 1):
        with pytest.raises(ValueError):
            exp_bridge_holds(bad)


@given(st.fractions(Fraction(-1, 2), Fraction(1, 2), max_denominator=10**9)
       .filter(lambda x: x not in (0, Fraction(1, 2), Fraction(-1, 2))))
@settings(max_examples=1000, deadline=None)
def test_exp_bridge_property(x):
    assert exp_bridge_holds(x)


def test_log_form_bound():
    assert log_form_bound(CertifiedReal.exact(Fraction(1, 10))).contains(Fraction(1, 5))
    assert log_form_bound(CertifiedReal.exact(Fraction(1, 2))) is None


def test_bridge_start():
    assert bridge_start(1, 1) == 2  # 1/α ≈ 0.618 is above the limit, 1/α² ≈ 0.382 below
    x = bridge_start(11, 2)
    limit = 1 - math.exp(-0.5)
    golden = (1 + math.sqrt(5)) / 2
    assert 11 / golden ** (2 * x) < limit <= 11 / golden ** (2 * (x - 1))


@pytest.mark.parametrize("kind", [F_LL, L_FF])
def test_solutions_satisfy_the_derived_linear_form_bounds(kind):
    for k, m, n in enumerate_solutions(kind, SearchRange(75, 160)):
        for shape in ("lambda1", "lambda2"):
            r = linear_form_residual(k, m, n, kind, shape)
            assert r.within_bound, (k, m, n, shape)


def test_linear_form_residual_values():
    assert linear_form_residual(8, 2, 4, F_LL, K=8).within_bound
    assert linear_form_residual(4, 1, 2, F_LL, K=8).within_bound
    r = linear_form_residual(8, 2, 4, F_LL)
    golden = (1 + math.sqrt(5)) / 2
    assert float(r.value) == pytest.approx(abs(math.sqrt(5) * golden ** (2 + 4 - 8) - 1), rel=1e-12)
    # a non-solution: |Λ| ≈ 0.99735 stays under 8/α^4 ≈ 1.167
    far = linear_form_residual(20, 2, 4, F_LL, K=8)
    assert float(far.value) == pytest.approx(0.99735, abs=5e-5)
    assert far.within_bound
    with pytest.raises(ValueError):
        linear_form_residual(0, 1, 1, F_LL)


def test_reduce_equation_bounds():
    fll, lff = reduce_equation(F_LL), reduce_equation(L_FF)
    assert (fll.m_bound, fll.n_bound) == (5, 12)
    assert (lff.m_bound, lff.n_bound) == (6, 13)
    for red, kind in ((fll, F_LL), (lff, L_FF)):
        assert all(r.reduced and r.method == "rational" for _, r in red.case2)
        assert [m for m, _ in red.case2] == list(range(1, red.m_bound + 1))
        # no solution beyond the reduced bounds, checked well past them
        assert all(m <= red.m_bound and n <= red.n_bound
                   for _, m, n in enumerate_solutions(kind, SearchRange(75, 160)))


def test_fixture_convergent_data():
    assert Q47 > 6 * FIXTURE_M
    assert math.gcd(P47, Q47) == 1


def test_fixture_candidates_report_without_asserting_published_values():
    by_name = {c.name: evaluate_fixture(c, Q47, FIXTURE_M) for c in fixture_candidates()}
    real, cplx = by_name["real-branch"], by_name["complex-branch-modulus"]
    assert not real.q_is_convergent
    assert float(real.epsilon) == pytest.approx(0.15565, abs=1e-5)
    assert real.epsilon_status == "not-reproduced"
    assert cplx.q_is_convergent and cplx.convergent_index == 46
    assert float(cplx.epsilon) == pytest.approx(0.48540, abs=1e-5)
    assert cplx.epsilon_status == "not-reproduced"
    assert cplx.implied_m_bound == 73
    assert cplx.epsilon_m_status == "not-reproduced" and cplx.implied_n_bound is None


def test_fixture_candidate_tau_values():
    real, cplx = fixture_candidates()
    assert real.tau == -1
    with mpmath.workprec(200):
        la = mpmath.log((1 + mpmath.sqrt(5)) / 2)
        expected = la / mpmath.sqrt(la**2 + mpmath.pi**2)
        assert cplx.tau(200).lo <= expected <= cplx.tau(200).hi
