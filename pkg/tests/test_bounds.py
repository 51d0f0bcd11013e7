import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiblucas.algebraic import ABS_BETA, ALPHA, QuadraticNumber
from fiblucas.bounds import (
    A_FLOOR,
    GrowthBound,
    MatveevInstance,
    a_value,
    chain_upper_lower,
    equation_chain,
    first_form_instance,
    fixed_point,
    index_upper_bound,
    mahler_measure,
    majorant_holds,
    matveev_coefficient,
    second_form_instance,
    solve_growth_bound,
)
from fiblucas.certified import CertifiedReal, log_alpha
from fiblucas.equations import F_LL, FORMS, L_FF
from fiblucas.errors import InvariantViolation, NonConvergence
from fiblucas.sequences import fib, lucas

LOG_ALPHA = math.log((1 + math.sqrt(5)) / 2)


def reference_coefficient(s, D, A):
    """Float evaluation of 1.4·30^(s+3)·s^4.5·D²(1 + log D)·ΠA_j."""
    return 1.4 * 30 ** (s + 3) * s**4.5 * D * D * (1 + math.log(D)) * math.prod(A)


def test_a_value_examples():
    assert float(a_value(ALPHA, 2)) == pytest.approx(LOG_ALPHA, rel=1e-15)
    assert float(a_value(QuadraticNumber(0, 1), 2)) == pytest.approx(math.log(5), rel=1e-15)
    assert float(a_value(QuadraticNumber(1, 0, 5), 2)) == pytest.approx(2 * math.log(5), rel=1e-15)
    # the 0.16 floor wins for numbers of tiny height
    assert a_value(QuadraticNumber(1), 1).contains(A_FLOOR)
    with pytest.raises(ValueError):
        a_value(QuadraticNumber(-2), 2)


def test_matveev_coefficient_matches_float_reference():
    inst = first_form_instance(F_LL)
    expected = reference_coefficient(3, 2, [LOG_ALPHA, LOG_ALPHA, math.log(5)])
    assert float(matveev_coefficient(inst)) == pytest.approx(expected, rel=1e-12)
    inst = second_form_instance(F_LL, 1)
    expected = reference_coefficient(3, 2, [LOG_ALPHA, LOG_ALPHA, 6 * LOG_ALPHA])
    assert float(matveev_coefficient(inst)) == pytest.approx(expected, rel=1e-12)


def test_second_form_for_lucas_equation_uses_log_5_per_m():
    inst = second_form_instance(L_FF, 3)
    assert float(inst.A[2]) == pytest.approx(3 * math.log(5), rel=1e-15)


def test_matveev_instance_validation():
    with pytest.raises(ValueError):
        MatveevInstance(2, 2, (1,))
    with pytest.raises(ValueError):
        MatveevInstance(1, 2, (Fraction(1, 10),))
    with pytest.raises(ValueError):
        MatveevInstance(1, 2, (1,), B=Fraction(1, 2))
    with pytest.raises(ValueError):
        MatveevInstance(1, 2, (Fraction(1, 5),), etas=(QuadraticNumber(5),))
    MatveevInstance(1, 2, (A_FLOOR,))  # the floor itself is admissible


@given(st.integers(1, 4), st.integers(1, 4),
       st.lists(st.fractions(Fraction(4, 25), 50, max_denominator=1000), min_size=4, max_size=4),
       st.integers(0, 3), st.fractions(0, 10, max_denominator=100))
@settings(max_examples=100, deadline=None)
def test_matveev_coefficient_is_monotone(s, D, A, j, bump):
    base = MatveevInstance(s, D, tuple(A[:s]))
    raised = list(A[:s])
    raised[j % s] += bump
    assert matveev_coefficient(MatveevInstance(s, D, tuple(raised))).lo >= matveev_coefficient(base).lo
    assert matveev_coefficient(MatveevInstance(s, D + 1, tuple(A[:s]))).lo > matveev_coefficient(base).hi
    bigger = MatveevInstance(s + 1, D, tuple(A[:s]) + (Fraction(4, 25),))
    assert float(matveev_coefficient(bigger)) == pytest.approx(
        reference_coefficient(s + 1, D, [float(a) for a in A[:s]] + [0.16]), rel=1e-12)


def test_chain_upper_lower_validation():
    with pytest.raises(ValueError):
        chain_upper_lower(1, 4, 0, 0)
    with pytest.raises(ValueError):
        chain_upper_lower(-1, 4, 0, 1)


def oracle_margin(C, a, p, rate, log_K, x):
    with mpmath.workprec(600):
        C, rate, log_K = (mpmath.mpf(v.numerator) / v.denominator for v in (C, rate, log_K))
        return log_K + C * (1 + mpmath.log(mpmath.mpf(a) * x)) ** p - rate * x


@given(st.fractions(1, 10**13, max_denominator=1000), st.integers(1, 8), st.sampled_from([1, 2]),
       st.fractions(Fraction(1, 10), 2, max_denominator=1000), st.fractions(0, 5, max_denominator=1000))
@settings(max_examples=100, deadline=None)
def test_solve_growth_bound_is_the_crossing(C, a, p, rate, log_K):
    gb = chain_upper_lower(C, a, log_K, rate, power=p)
    N = solve_growth_bound(gb)
    assert oracle_margin(C, a, p, rate, log_K, N) <= 0
    if N > 1:
        assert oracle_margin(C, a, p, rate, log_K, N - 1) > 0
    for x in (N + 1, 2 * N, 10 * N, 1000 * N):
        assert oracle_margin(C, a, p, rate, log_K, x) <= 0


def test_solve_growth_bound_power_zero_closed_form():
    assert solve_growth_bound(chain_upper_lower(3, 1, 1, 1, power=0)) == 4
    assert solve_growth_bound(chain_upper_lower(Fraction(5, 2), 1, 0, 1, power=0)) == 3


def test_fixed_point_iteration_cap():
    gb = chain_upper_lower(10**12, 4, 1, 1, power=2)
    with pytest.raises(NonConvergence):
        fixed_point(gb, max_iterations=1)
    assert fixed_point(gb).iterations < 20


def test_unsupported_power():
    with pytest.raises(ValueError):
        solve_growth_bound(chain_upper_lower(1, 1, 0, 1, power=3))


def test_index_upper_bound():
    assert index_upper_bound(2, 4) == 10
    with pytest.raises(ValueError):
        index_upper_bound(3, 2)
    with pytest.raises(ValueError):
        index_upper_bound(0, 2)


@given(st.integers(1, 400), st.integers(1, 400))
def test_index_upper_bound_is_valid(m, n):
    m, n = min(m, n), max(m, n)
    k = index_upper_bound(m, n)
    # no Fibonacci or Lucas number beyond index k fits under either product
    assert fib(k + 1) > lucas(m) * lucas(n)
    assert lucas(k + 1) > fib(m) * fib(n)
    if n >= 3:
        assert k < 4 * n


def test_mahler_measure_examples():
    assert mahler_measure(ALPHA) == ALPHA
    assert mahler_measure(ABS_BETA) == ALPHA
    assert mahler_measure(QuadraticNumber(1, 0, 5)) == QuadraticNumber(5)
    assert mahler_measure(QuadraticNumber(0, 1)) == QuadraticNumber(5)


@pytest.mark.parametrize("kind", [F_LL, L_FF])
def test_majorant_holds_for_every_m_up_to_200(kind):
    shape = FORMS[kind][1]
    assert all(majorant_holds(shape, m) for m in range(1, 201))


def test_majorant_is_tight_for_lucas_equation_at_m1():
    # F_1/√5 = √5/5 has a-value exactly log 5, the majorant at m = 1
    shape = FORMS[L_FF][1]
    assert majorant_holds(shape, 1)
    assert (a_value(shape.coefficient(1), 2) - CertifiedReal.exact(5).log()).radius < 1e-70


@pytest.mark.parametrize("kind", [F_LL, L_FF])
def test_equation_chain_structure(kind):
    chain = equation_chain(kind)
    labels = [s.label for s in chain.provenance]
    assert labels == ["lambda1.coefficient", "m.coefficient", "m.additive", "lambda2.coefficient_per_m",
                      "lambda2.coefficient_squared", "n.bound", "m.bound", "k.bound"]
    assert chain.k_bound == 4 * chain.n_bound - 1
    assert chain.n_bound == dict((s.label, s.value) for s in chain.provenance)["n.bound"] - 1
    assert 0 < chain.m_bound < chain.n_bound
    assert not chain.n_relation.holds(chain.n_bound + 1)
    assert chain.n_relation.holds(chain.n_bound)


def test_lucas_equation_chain_values():
    chain = {s.label: s.value for s in equation_chain(L_FF).provenance}
    assert float(chain["lambda1.coefficient"]) == pytest.approx(7.228e11, rel=1e-3)
    assert float(chain["m.coefficient"]) == pytest.approx(7.52e11, rel=0.01)
    assert float(chain["lambda2.coefficient_per_m"]) == pytest.approx(3.614e11, rel=1e-3)


def test_m_coefficient_override_changes_only_downstream_steps():
    base = {s.label: s.value for s in equation_chain(L_FF).provenance}
    over = {s.label: s.value for s in equation_chain(L_FF, m_coefficient=Fraction("7.52e11")).provenance}
    assert base["lambda1.coefficient"].endpoints() == over["lambda1.coefficient"].endpoints()
    assert float(over["m.coefficient"]) == pytest.approx(7.52e11, rel=1e-12)
    assert over["n.bound"] > base["n.bound"]


def test_growth_bound_properties():
    gb = GrowthBound(CertifiedReal.exact(10), Fraction(4), 1, log_alpha(256) * 2, CertifiedReal.exact(8).log())
    assert float(gb.K) == pytest.approx(8)
    assert float(gb.coefficient) == pytest.approx(10 / (2 * LOG_ALPHA))
    assert float(gb.additive) == pytest.approx(math.log(8) / (2 * LOG_ALPHA))


def test_matveev_coefficient_smallest_instance():
    assert float(matveev_coefficient(MatveevInstance(1, 1, (1,)))) == pytest.approx(1.134e6, rel=1e-12)


def test_index_upper_bound_at_search_limit():
    assert index_upper_bound(75, 160) == 239


def test_vanishing_exponent():
    from fiblucas.bounds import vanishing_cases, vanishing_exponent
    from fiblucas.equations import FormShape

    unit_shape = FormShape("synthetic", lambda m: ALPHA ** (3 * m), 1, 1, None)
    assert vanishing_exponent(unit_shape, 2) == -6
    assert vanishing_exponent(FORMS[F_LL][1], 5) is None
    for kind in (F_LL, L_FF):
        assert vanishing_cases(kind, 75) == {"lambda1": [], "lambda2": []}
