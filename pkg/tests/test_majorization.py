import numpy as np
import pytest
from hypothesis import given

from coolbound import DimensionError, PopulationVector, Spectrum, passive_rearrange, schur_functionals
from coolbound.majorization import is_passive, majorization_margin, majorizes, sort_desc

from conftest import prob_vectors


def _mix(p, rng, terms=4):
    # convex combination of permutations: always majorized by p
    w = rng.dirichlet(np.ones(terms))
    return sum(wi * p[rng.permutation(p.size)] for wi in w)


def test_known_pair():
    assert majorizes([0.7, 0.2, 0.1], [0.5, 0.3, 0.2])
    assert not majorizes([0.5, 0.3, 0.2], [0.7, 0.2, 0.1])


def test_incomparable_pair():
    a, b = [0.6, 0.2, 0.2], [0.5, 0.4, 0.1]
    assert not majorizes(a, b) and not majorizes(b, a)


def test_length_mismatch():
    with pytest.raises(DimensionError):
        majorization_margin([1.0, 0.0], [1.0, 0.0, 0.0])


def test_order_of_entries_is_irrelevant():
    assert majorization_margin([0.1, 0.7, 0.2], [0.2, 0.1, 0.7]) == 0.0


@given(prob_vectors())
def test_reflexive_and_extremes(p):
    d = p.size
    assert majorizes(p, p)
    assert majorizes(np.eye(d)[0], p)
    assert majorizes(p, np.full(d, 1.0 / d))


@given(prob_vectors(min_dim=3))
def test_doubly_stochastic_mixtures_are_majorized(p):
    rng = np.random.default_rng(int(p[0] * 1e9))
    assert majorizes(p, _mix(p, rng))


def test_sort_desc_is_stable():
    s = sort_desc(PopulationVector([0.25, 0.5, 0.25]))
    assert s.vals.tolist() == [0.5, 0.25, 0.25]
    assert s.source_dim == 3


def test_passive_rearrange():
    p = passive_rearrange(PopulationVector([0.1, 0.6, 0.3]))
    assert p.probs.tolist() == [0.6, 0.3, 0.1]
    assert is_passive(p)
    assert not is_passive(PopulationVector([0.1, 0.6, 0.3]))


def test_schur_functionals_qubit():
    f = schur_functionals(PopulationVector([2 / 3, 1 / 3]), Spectrum([0.0, 1.0]))
    assert f.ground_pop == pytest.approx(2 / 3, rel=1e-15)
    assert f.purity == pytest.approx(5 / 9, rel=1e-15)
    assert f.mean_energy == pytest.approx(1 / 3, rel=1e-15)
    assert f.entropy == pytest.approx(np.log(3) - 2 / 3 * np.log(2), rel=1e-14)


def test_schur_functionals_pure_state():
    f = schur_functionals(PopulationVector([1.0, 0.0, 0.0]), Spectrum([0.0, 1.0, 2.0]))
    assert f.entropy == 0.0 and f.purity == 1.0 and f.mean_energy == 0.0


@given(prob_vectors(min_dim=3))
def test_functionals_order_with_majorization(p):
    rng = np.random.default_rng(int(p[-1] * 1e9))
    q = _mix(p, rng)
    spec = Spectrum(np.arange(p.size, dtype=float))
    fp = schur_functionals(passive_rearrange(PopulationVector(p)), spec)
    fq = schur_functionals(passive_rearrange(PopulationVector(q)), spec)
    assert fp.entropy <= fq.entropy + 1e-12
    assert fp.purity >= fq.purity - 1e-12
    assert fp.ground_pop >= fq.ground_pop - 1e-12
    assert fp.mean_energy <= fq.mean_energy + 1e-12
