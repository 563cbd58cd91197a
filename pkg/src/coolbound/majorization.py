"""Majorization predicates, passive states and Schur-monotone figures of merit."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CoolboundError, DimensionError
from .spectra import NORM_TOL, PopulationVector, Spectrum, _frozen

MAJORIZATION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SortedEigenvalues:
    vals: np.ndarray
    source_dim: int

    def __post_init__(self):
        arr = np.asarray(self.vals, dtype=float).ravel()
        if np.any(np.diff(arr) > 0):
            raise CoolboundError("eigenvalues must be sorted non-increasing")
        if arr.min() < -NORM_TOL or abs(arr.sum() - 1.0) > NORM_TOL:
            raise CoolboundError("eigenvalues must be a probability vector")
        object.__setattr__(self, "vals", _frozen(arr))

    @property
    def dim(self) -> int:
        return self.vals.size


def _desc(values) -> np.ndarray:
    # stable on original index among ties
    arr = np.asarray(values, dtype=float)
    return arr[np.argsort(-arr, kind="stable")]


def sort_desc(p: PopulationVector) -> SortedEigenvalues:
    return SortedEigenvalues(_desc(p.probs), p.dim)


def _as_sorted(x) -> np.ndarray:
    if isinstance(x, SortedEigenvalues):
        return x.vals
    if isinstance(x, PopulationVector):
        return _desc(x.probs)
    return _desc(x)


def majorization_margin(a, b) -> float:
    """Smallest gap ``sum_{i<k} a_i - sum_{i<k} b_i`` over all k (both sorted first).

    Non-negative iff ``a`` majorizes ``b`` exactly.
    """
    va, vb = _as_sorted(a), _as_sorted(b)
    if va.size != vb.size:
        raise DimensionError(f"cannot compare vectors of length {va.size} and {vb.size}")
    return float(np.min(np.cumsum(va) - np.cumsum(vb)))


def majorizes(a, b, tol: float = MAJORIZATION_TOL) -> bool:
    """True iff every partial sum of sorted ``a`` is >= that of sorted ``b`` minus ``tol``."""
    return majorization_margin(a, b) >= -tol


def passive_rearrange(p: PopulationVector) -> PopulationVector:
    """Largest population on the ground level, next largest on the first level, ..."""
    return PopulationVector(_desc(p.probs))


def is_passive(p: PopulationVector) -> bool:
    return bool(np.all(np.diff(p.probs) <= 0))


@dataclass(frozen=True)
class SchurFunctionals:
    ground_pop: float
    entropy: float
    purity: float
    mean_energy: float


def schur_functionals(p: PopulationVector, spec: Spectrum) -> SchurFunctionals:
    """Ground population, von Neumann entropy (nats), purity and mean energy."""
    if p.dim != spec.dim:
        raise DimensionError(f"{p.dim} populations for a {spec.dim}-level spectrum")
    probs = p.probs
    nz = probs[probs > 0]
    return SchurFunctionals(
        ground_pop=float(probs[0]),
        entropy=float(-np.sum(nz * np.log(nz))) + 0.0,
        purity=float(np.dot(probs, probs)),
        mean_energy=float(np.dot(probs, spec.levels)),
    )
