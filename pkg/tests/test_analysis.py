import math

import pytest
from hypothesis import given, strategies as st

from hashgrand import analysis


def test_entropy_values():
    # frozen from mpmath
    assert analysis.binary_entropy(0.11) == pytest.approx(0.499915958164528, abs=1e-9)
    assert analysis.bsc_capacity(0.11) == pytest.approx(0.500084041835472, abs=1e-9)
    assert analysis.binary_entropy(0.5) == 1.0
    assert analysis.binary_entropy(0.0) == analysis.binary_entropy(1.0) == 0.0


@pytest.mark.parametrize("p", [-0.1, 1.1])
def test_entropy_domain(p):
    with pytest.raises(ValueError):
        analysis.binary_entropy(p)


@pytest.mark.parametrize("sigma, expected", [
    (0.5, 0.912822285774482), (1.0, 0.485944154132935), (2.0, 0.160747219796417)])
def test_biawgn_reference_values(sigma, expected):
    # frozen from an mpmath quadrature
    assert analysis.biawgn_capacity(sigma) == pytest.approx(expected, abs=1e-8)


def test_capacity_at_4db():
    sigma = 0.669231325382101646
    assert analysis.crossover_probability(sigma) == pytest.approx(0.06755493102556207, rel=1e-10)
    assert analysis.rate_margin(128, 288, sigma, "hard") == pytest.approx(0.19882339248399406, abs=1e-10)


def test_limits():
    assert analysis.capacity(0.05, "hard") == pytest.approx(1.0, abs=1e-3)
    assert analysis.capacity(0.05, "soft") == pytest.approx(1.0, abs=1e-3)
    assert analysis.capacity(50.0, "hard") == pytest.approx(0.0, abs=1e-3)
    assert analysis.capacity(50.0, "soft") == pytest.approx(0.0, abs=1e-3)


@given(st.floats(0.05, 10.0))
def test_hard_below_soft(sigma):
    assert analysis.capacity(sigma, "hard") <= analysis.capacity(sigma, "soft") + 1e-12


@given(st.floats(0.05, 5.0), st.floats(1.01, 2.0))
def test_capacity_decreases_with_noise(sigma, factor):
    for model in analysis.MODELS:
        assert analysis.capacity(sigma * factor, model) <= analysis.capacity(sigma, model) + 1e-12


def test_montecarlo_agrees():
    c, se = analysis.biawgn_capacity_montecarlo(1.0, samples=400_000, rng=0)
    assert abs(c - analysis.biawgn_capacity(1.0)) < 5 * se
    assert se < 2e-3


def test_errors():
    with pytest.raises(ValueError):
        analysis.capacity(1.0, "fuzzy")
    with pytest.raises(ValueError):
        analysis.rate_margin(10, 10, 1.0)
    with pytest.raises(ValueError):
        analysis.biawgn_capacity(0.0)
    assert math.isclose(analysis.rate_margin(1, 2, 1.0, "soft"), analysis.biawgn_capacity(1.0) - 0.5)
