import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiblucas.certified import precision
from fiblucas.errors import PrecisionExhausted
from fiblucas.sequences import (
    Seq,
    binet_round,
    fib,
    fib_matrix,
    fib_pair,
    growth_bounds_hold,
    growth_chains,
    lucas,
    term,
)


def naive(n_max, a, b):
    out = [a, b]
    while len(out) <= n_max:
        out.append(out[-1] + out[-2])
    return out


FIBS = naive(1000, 0, 1)
LUCAS = naive(1000, 2, 1)


def test_small_values():
    assert [fib(n) for n in range(11)] == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    assert [lucas(n) for n in range(8)] == [2, 1, 3, 4, 7, 11, 18, 29]


def test_fast_doubling_matches_recurrence_oracle():
    assert [fib(n) for n in range(1001)] == FIBS
    assert [lucas(n) for n in range(1001)] == LUCAS
    assert [fib_matrix(n) for n in range(1001)] == FIBS


def test_large_index_kernels_agree():
    n = 20000
    assert fib(n) == fib_matrix(n)
    assert fib_pair(n) == (fib(n), fib(n + 1))


@pytest.mark.parametrize("bad", [-1, -10])
def test_negative_index_rejected(bad):
    with pytest.raises(ValueError):
        fib(bad)
    with pytest.raises(ValueError):
        lucas(bad)


@pytest.mark.parametrize("bad", [1.0, "3", True])
def test_non_integer_index_rejected(bad):
    with pytest.raises(TypeError):
        fib_pair(bad)


def test_term_dispatch():
    assert term(Seq.FIBONACCI, 10) == 55 and term("L", 10) == 123


def test_binet_round_small_and_large():
    assert [binet_round(n) for n in range(20)] == FIBS[:20]
    assert binet_round(5000) == fib(5000)


def test_binet_round_precision_exhausted_when_cap_too_small():
    with precision(8, 8), pytest.raises(PrecisionExhausted) as info:
        binet_round(100)
    assert info.value.operation == "binet_round"


def test_growth_chain_keys():
    assert set(growth_chains(5, Seq.FIBONACCI)) == {"P1", "P3"}
    assert set(growth_chains(5, Seq.LUCAS)) == {"P2", "P4"}


def test_fibonacci_growth_needs_positive_index():
    with pytest.raises(ValueError):
        growth_chains(0, Seq.FIBONACCI)


def test_lucas_zero_violates_lower_reciprocal_bound():
    # L_0 = 2 > |β|^(-1) = α: the upper half of the P4 chain fails at n = 0
    assert growth_chains(0, Seq.LUCAS) == {"P2": True, "P4": False}
    assert growth_bounds_hold(1, Seq.LUCAS)


@given(st.integers(min_value=1, max_value=3000))
@settings(max_examples=100)
def test_identities(n):
    assert lucas(n) == fib(n - 1) + fib(n + 1)
    assert fib(2 * n) == fib(n) * lucas(n)
    assert lucas(n) ** 2 - 5 * fib(n) ** 2 == 4 * (-1) ** n


@given(st.integers(min_value=1, max_value=2000))
@settings(max_examples=60)
def test_growth_bounds_property(n):
    assert growth_bounds_hold(n, Seq.FIBONACCI)
    assert growth_bounds_hold(n, Seq.LUCAS)


def test_growth_examples():
    assert growth_bounds_hold(1, Seq.FIBONACCI)
    assert growth_bounds_hold(10, Seq.LUCAS)
    assert fib(10) == 55 and lucas(4) == 7 and binet_round(10) == 55 and binet_round(100) == fib(100)
