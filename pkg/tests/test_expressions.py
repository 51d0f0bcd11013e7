from fractions import Fraction
import math

import pytest

from fiblucas.errors import ConfigError
from fiblucas.expressions import parse_real


def test_rational_expressions_are_exact():
    assert parse_real("-1") == Fraction(-1)
    assert parse_real("2/3 + 1") == Fraction(5, 3)
    assert parse_real("0.1") == Fraction(1, 10)
    assert parse_real("2**-2") == Fraction(1, 4)


def test_real_expressions_evaluate_to_certified_values():
    tau = parse_real("log(alpha)/log(beta_abs)")
    assert tau(128).contains(-1) or abs(float(tau(128)) + 1) < 1e-30
    v = parse_real("sqrt(log(alpha)**2 + pi**2)")(128)
    assert float(v) == pytest.approx(math.hypot(math.log((1 + 5**0.5) / 2), math.pi))
    assert float(parse_real("exp(1) - e")(128)) == pytest.approx(0, abs=1e-30)
    assert float(parse_real("abs(-sqrt5)")(64)) == pytest.approx(5**0.5)


@pytest.mark.parametrize("text", ["log(", "foo + 1", "alpha ** 0.5", "log(1, 2)", "alpha < 2", "1/0",
                                  "__import__('os')", "'a'", "~1", "5 % 2", "0**-1"])
def test_bad_expressions_are_config_errors(text):
    with pytest.raises(ConfigError):
        parse_real(text)
