"""Spectra, population vectors and thermal states.

Everything here is immutable: arrays are copied on construction and marked
read-only, so values can be shared freely between runs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import CoolboundError, DimensionError, InvalidExtensionError

NORM_TOL = 1e-12
# extension gaps this close to zero (from level subtraction round-off) are clamped
EXTENSION_SLACK = 1e-12


def _frozen(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def check_beta(beta) -> float:
    """Validate an inverse temperature; ``0`` means infinite temperature."""
    beta = float(beta)
    if not np.isfinite(beta) or beta < 0:
        raise CoolboundError(f"inverse temperature must be finite and >= 0, got {beta!r}")
    return beta


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending energy levels with the ground level shifted to exactly zero.

    Levels are sorted with a stable sort, so degenerate levels keep their
    input order.
    """

    levels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.levels, dtype=float).ravel()
        if arr.size < 2:
            raise CoolboundError("a spectrum needs at least two levels")
        if not np.all(np.isfinite(arr)):
            raise CoolboundError("energy levels must be finite")
        arr = np.sort(arr, kind="stable")
        arr = arr - arr[0]
        object.__setattr__(self, "levels", _frozen(arr))

    @classmethod
    def qubit(cls, gap: float) -> "Spectrum":
        return cls([0.0, gap])

    @classmethod
    def identical_qubits(cls, n: int, gap: float) -> "Spectrum":
        """Spectrum of ``n`` non-interacting qubits of equal gap (``2**n`` levels)."""
        if n < 1:
            raise CoolboundError("need at least one qubit")
        levels = [gap * sum(bits) for bits in itertools.product((0, 1), repeat=n)]
        return cls(levels)

    @property
    def dim(self) -> int:
        return self.levels.size

    @property
    def e_max(self) -> float:
        return float(self.levels[-1])

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.levels)

    def __len__(self):
        return self.dim

    def __repr__(self):
        return f"Spectrum({self.levels.tolist()})"


@dataclass(frozen=True, eq=False)
class PopulationVector:
    """Diagonal of a density matrix in the energy eigenbasis, energy order."""

    probs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.probs, dtype=float).ravel()
        if arr.size < 1:
            raise CoolboundError("empty population vector")
        if not np.all(np.isfinite(arr)):
            raise CoolboundError("populations must be finite")
        if arr.min() < -NORM_TOL or arr.max() > 1 + NORM_TOL:
            raise CoolboundError(f"populations outside [0, 1]: {arr.tolist()}")
        if abs(arr.sum() - 1.0) > NORM_TOL:
            raise CoolboundError(f"populations sum to {arr.sum()!r}, not 1")
        object.__setattr__(self, "probs", _frozen(arr))

    @classmethod
    def uniform(cls, dim: int) -> "PopulationVector":
        return cls(np.full(dim, 1.0 / dim))

    @property
    def dim(self) -> int:
        return self.probs.size

    def __len__(self):
        return self.dim

    def __getitem__(self, i):
        return float(self.probs[i])

    def __iter__(self):
        return iter(self.probs.tolist())

    def __array__(self, dtype=None, copy=None):
        return np.array(self.probs, dtype=dtype)

    def __repr__(self):
        return f"PopulationVector({self.probs.tolist()})"


@dataclass(frozen=True, eq=False)
class MachineSpec:
    """A machine spectrum plus qubits thermalised at the hot temperature.

    ``extension_gaps[i - 1]`` is the gap of the qubit that bridges target
    transition ``i - 1 -> i``.
    """

    base: Spectrum
    extension_gaps: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        gaps = np.asarray(self.extension_gaps, dtype=float).ravel()
        if np.any(gaps < 0) or not np.all(np.isfinite(gaps)):
            raise InvalidExtensionError(f"extension gaps must be finite and >= 0: {gaps.tolist()}")
        object.__setattr__(self, "extension_gaps", _frozen(gaps))

    def hot_qubit_states(self, beta_h: float) -> np.ndarray:
        """Thermal (ground, excited) populations of each extension qubit, shape (n, 2)."""
        beta_h = check_beta(beta_h)
        excited = np.exp(-beta_h * self.extension_gaps)
        return np.column_stack([1.0 / (1.0 + excited), excited / (1.0 + excited)])


def thermal_state(spec: Spectrum, beta: float) -> PopulationVector:
    """Gibbs populations ``exp(-beta E_i) / Z``."""
    beta = check_beta(beta)
    exponents = -beta * spec.levels
    weights = np.exp(exponents - exponents.max())
    return PopulationVector(weights / weights.sum())


def tensor(a: PopulationVector, b: PopulationVector) -> PopulationVector:
    """Joint populations of a product state, first factor major."""
    return PopulationVector(np.outer(a.probs, b.probs).ravel())


def partial_trace_machine(joint: PopulationVector, d_s: int, d_m: int) -> PopulationVector:
    """Sum out the (minor-index) machine factor of a target-major joint vector."""
    if d_s < 1 or d_m < 1 or joint.dim != d_s * d_m:
        raise DimensionError(
            f"joint vector of length {joint.dim} cannot be split as {d_s} x {d_m}"
        )
    return PopulationVector(joint.probs.reshape(d_s, d_m).sum(axis=1))


def extend_machine(target: Spectrum, machine: Spectrum) -> MachineSpec:
    """Append one hot qubit per target transition, gap ``E_max - (E_i - E_{i-1})``.

    Each such qubit makes the corresponding max-swap energy preserving.
    """
    gaps = machine.e_max - target.gaps
    bad = np.flatnonzero(gaps < -EXTENSION_SLACK)
    if bad.size:
        i = int(bad[0]) + 1
        raise InvalidExtensionError(
            f"target gap E_{i} - E_{i - 1} = {target.gaps[i - 1]!r} exceeds the machine's "
            f"largest gap {machine.e_max!r}; no energy-preserving swap exists"
        )
    return MachineSpec(machine, np.clip(gaps, 0.0, None))
