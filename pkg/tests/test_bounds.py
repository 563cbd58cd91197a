import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from coolbound import UnphysicalRegimeError, bound_set, convergence_rate, ground_population_bound, rho_star
from coolbound.bounds import (
    beta_star_incoherent,
    beta_star_qubit,
    gibbs_ratio,
    norm_scaling_limit,
    virtual_qubit_norm,
)
from coolbound.errors import CoolboundError


def test_rho_star_three_levels():
    # g = 1/2
    star = rho_star(3, 1.0, math.log(2.0))
    np.testing.assert_allclose(star.probs, [4 / 7, 2 / 7, 1 / 7], rtol=1e-15)


def test_rho_star_zero_temperature_and_zero_gap():
    assert rho_star(3, 0.0, 1.0).probs.tolist() == pytest.approx([1 / 3] * 3, rel=1e-15)
    assert rho_star(4, 1.0, 0.0).probs.tolist() == pytest.approx([0.25] * 4, rel=1e-15)


def test_rho_star_validation():
    with pytest.raises(CoolboundError):
        rho_star(1, 1.0, 1.0)
    with pytest.raises(CoolboundError):
        rho_star(2, 1.0, -0.5)
    with pytest.raises(CoolboundError):
        rho_star(2, -1.0, 1.0)


@given(st.integers(2, 8), st.floats(0.0, 5.0), st.floats(0.0, 5.0))
def test_rho_star_ratios(d, beta, e_max):
    star = rho_star(d, beta, e_max).probs
    g = gibbs_ratio(beta, e_max)
    if star[-1] > 1e-300:
        np.testing.assert_allclose(star[1:] / star[:-1], g, rtol=1e-12)


def test_qubit_bound_matches_rho_star():
    assert ground_population_bound(1.3, 0.7) == pytest.approx(rho_star(2, 1.3, 0.7)[0], rel=1e-15)


def test_beta_star_qubit():
    assert beta_star_qubit(2.0, 3.0, 1.5) == 4.0
    with pytest.raises(CoolboundError):
        beta_star_qubit(1.0, 1.0, 0.0)


def test_beta_star_incoherent_value():
    assert beta_star_incoherent(1.0, 0.5, 2.0, 1.0) == 1.5


def test_beta_star_incoherent_no_hot_resource():
    # hot bath at the environment temperature: no cooling
    assert beta_star_incoherent(1.2, 1.2, 3.0, 1.0) == pytest.approx(1.2, rel=1e-15)


def test_beta_star_incoherent_unphysical():
    with pytest.raises(UnphysicalRegimeError):
        beta_star_incoherent(0.1, 5.0, 3.0, 1.0)
    with pytest.raises(CoolboundError):
        beta_star_incoherent(1.0, 0.0, 0.5, 1.0)


def test_bound_set_qubit():
    bs = bound_set([0.0, 1.0], 2.0, 1.0, 0.0)
    assert bs.g == pytest.approx(math.exp(-2.0), rel=1e-15)
    assert bs.p0_star == bs.rho_star[0]
    assert bs.beta_star == 2.0 and bs.beta_star_inc == 2.0


def test_bound_set_qudit_has_no_temperatures():
    bs = bound_set([0.0, 1.0, 2.0], 2.0, 1.0, 0.0)
    assert bs.beta_star is None and bs.beta_star_inc is None


@pytest.mark.parametrize("n", [1, 2, 5, 40, 500])
@pytest.mark.parametrize("x", [0.1, 1.0, 5.0])
def test_virtual_qubit_norm_high_precision(n, x):
    mpmath.mp.dps = 60
    g = mpmath.exp(-mpmath.mpf(x))
    want = (1 + g) / (1 + g ** (mpmath.mpf(1) / n)) ** n
    assert virtual_qubit_norm(n, 1.0, x) == pytest.approx(float(want), rel=1e-13)


def test_single_qubit_machine_has_unit_norm():
    assert virtual_qubit_norm(1, 2.0, 1.5) == pytest.approx(1.0, rel=1e-15)


def test_convergence_rate_fields():
    rate = convergence_rate(3, 1.0, 1.0)
    assert rate.per_cycle_factor == 1.0 - rate.norm
    assert rate.r_v == ground_population_bound(1.0, 1.0)


@pytest.mark.parametrize("x", [0.1, 1.0, 5.0])
def test_norm_scaling_approaches_cosh_limit_slowly(x):
    # the relative gap closes like x**2 / (8 n)
    limit = norm_scaling_limit(1.0, x)
    for n in (100, 400, 1000):
        rel = virtual_qubit_norm(n, 1.0, x) * 2.0**n / limit - 1.0
        assert rel == pytest.approx(-x * x / (8 * n), rel=0.05)


@pytest.mark.parametrize("x", [0.1, 1.0, 5.0])
def test_virtual_qubit_norm_decreases_with_machine_size(x):
    norms = [virtual_qubit_norm(n, 1.0, x) for n in range(1, 60)]
    assert all(b < a for a, b in zip(norms, norms[1:]))
