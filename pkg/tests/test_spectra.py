import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from coolbound import (
    DimensionError,
    InvalidExtensionError,
    MachineSpec,
    PopulationVector,
    Spectrum,
    extend_machine,
    partial_trace_machine,
    tensor,
    thermal_state,
)
from coolbound.errors import CoolboundError

from conftest import betas, ladders, prob_vectors


def test_spectrum_shifts_and_sorts():
    s = Spectrum([3.0, 1.0, 2.0])
    assert s.levels.tolist() == [0.0, 1.0, 2.0]
    assert s.e_max == 2.0
    assert s.gaps.tolist() == [1.0, 1.0]


def test_spectrum_rejects_single_level_and_nan():
    with pytest.raises(CoolboundError):
        Spectrum([1.0])
    with pytest.raises(CoolboundError):
        Spectrum([0.0, float("nan")])


def test_identical_qubits_levels():
    s = Spectrum.identical_qubits(3, 0.5)
    assert s.dim == 8
    assert s.e_max == pytest.approx(1.5)
    assert sorted(set(np.round(s.levels, 12))) == [0.0, 0.5, 1.0, 1.5]


@pytest.mark.parametrize("probs", [[0.5, 0.6], [1.2, -0.2], [0.5, float("nan")]])
def test_population_vector_validation(probs):
    with pytest.raises(CoolboundError):
        PopulationVector(probs)


def test_population_vector_is_read_only():
    p = PopulationVector([0.25, 0.75])
    with pytest.raises(ValueError):
        p.probs[0] = 1.0


def test_thermal_state_matches_high_precision():
    levels = [0.0, 0.3, 1.7, 2.2]
    beta = 1.9
    mpmath.mp.dps = 50
    z = mpmath.fsum(mpmath.exp(-beta * mpmath.mpf(e)) for e in levels)
    want = [float(mpmath.exp(-beta * mpmath.mpf(e)) / z) for e in levels]
    got = thermal_state(Spectrum(levels), beta).probs
    np.testing.assert_allclose(got, want, rtol=1e-14, atol=0)


def test_thermal_state_limits():
    spec = Spectrum([0.0, 1.0, 2.0])
    np.testing.assert_allclose(thermal_state(spec, 0.0).probs, [1 / 3] * 3, rtol=1e-15)
    cold = thermal_state(spec, 1e4).probs
    assert cold[0] == 1.0 and cold[1] == 0.0


def test_thermal_state_survives_huge_beta_times_energy():
    p = thermal_state(Spectrum([0.0, 800.0]), 1.0).probs
    assert np.all(np.isfinite(p)) and p[0] == 1.0


@given(ladders(), betas)
def test_thermal_state_is_passive_and_normalised(levels, beta):
    p = thermal_state(Spectrum(levels), beta).probs
    assert abs(math.fsum(p) - 1.0) < 1e-12
    assert np.all(np.diff(p) <= 1e-15)


def test_tensor_and_trace_small_case():
    a = PopulationVector([2 / 3, 1 / 3])
    b = PopulationVector([3 / 4, 1 / 4])
    joint = tensor(a, b)
    np.testing.assert_allclose(joint.probs, [1 / 2, 1 / 6, 1 / 4, 1 / 12], rtol=1e-15)
    back = partial_trace_machine(joint, 2, 2)
    np.testing.assert_allclose(back.probs, [2 / 3, 1 / 3], rtol=1e-15)


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionError):
        partial_trace_machine(PopulationVector.uniform(6), 4, 2)


@given(prob_vectors(), prob_vectors())
def test_trace_inverts_tensor(a, b):
    pa, pb = PopulationVector(a), PopulationVector(b)
    back = partial_trace_machine(tensor(pa, pb), pa.dim, pb.dim)
    np.testing.assert_allclose(back.probs, pa.probs, atol=1e-14)


def test_extend_machine_gaps():
    target = Spectrum([0.0, 0.3, 0.9])
    mspec = extend_machine(target, Spectrum([0.0, 0.5, 1.0]))
    np.testing.assert_allclose(mspec.extension_gaps, [0.7, 0.4], rtol=1e-15)


def test_extend_machine_rejects_oversized_target_gap():
    with pytest.raises(InvalidExtensionError):
        extend_machine(Spectrum([0.0, 1.5]), Spectrum([0.0, 1.0]))


def test_extend_machine_allows_equal_gap():
    mspec = extend_machine(Spectrum([0.0, 1.0]), Spectrum([0.0, 1.0]))
    assert mspec.extension_gaps.tolist() == [0.0]


def test_hot_qubit_states():
    mspec = MachineSpec(Spectrum([0.0, 1.0]), np.array([0.0, math.log(3.0)]))
    hot = mspec.hot_qubit_states(1.0)
    np.testing.assert_allclose(hot, [[0.5, 0.5], [0.75, 0.25]], rtol=1e-15)


@given(st.floats(-5.0, -1e-9))
def test_negative_extension_gap_rejected(gap):
    with pytest.raises(CoolboundError):
        MachineSpec(Spectrum([0.0, 1.0]), np.array([gap]))
