"""Closed-form cooling limits and the virtual-qubit convergence rate."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoolboundError, UnphysicalRegimeError
from .spectra import PopulationVector, check_beta


def gibbs_ratio(beta_r: float, e_max: float) -> float:
    """Population ratio of the machine's coldest qubit subspace, ``exp(-beta_R E_max)``."""
    return math.exp(-check_beta(beta_r) * e_max)


def rho_star(d_s: int, beta_r: float, e_max: float) -> PopulationVector:
    """Coldest reachable target state: populations proportional to ``g**n``."""
    if d_s < 2:
        raise CoolboundError("target dimension must be at least 2")
    if e_max < 0:
        raise CoolboundError("largest machine gap must be >= 0")
    g = gibbs_ratio(beta_r, e_max)
    weights = g ** np.arange(d_s, dtype=float)
    return PopulationVector(weights / weights.sum())


def ground_population_bound(beta_r: float, e_max: float) -> float:
    """Qubit-target bound ``1 / (1 + exp(-beta_R E_max))``."""
    return 1.0 / (1.0 + gibbs_ratio(beta_r, e_max))


def beta_star_qubit(beta_r: float, e_max: float, e_s: float) -> float:
    if e_s <= 0:
        raise CoolboundError("target gap must be positive")
    return check_beta(beta_r) * e_max / e_s


def beta_star_incoherent(beta_r: float, beta_h: float, e_m: float, e_s: float) -> float:
    """Steady inverse temperature of a qubit cooled by the two-qubit incoherent fridge."""
    beta_r, beta_h = check_beta(beta_r), check_beta(beta_h)
    if e_s <= 0 or e_m < e_s:
        raise CoolboundError("need machine gap >= target gap > 0")
    beta = (beta_r * e_m - beta_h * (e_m - e_s)) / e_s
    if beta < 0:
        raise UnphysicalRegimeError(
            f"hot bath drives the target to negative temperature (beta* = {beta!r})"
        )
    return beta


@dataclass(frozen=True, eq=False)
class BoundSet:
    g: float
    rho_star: PopulationVector
    p0_star: float
    beta_star: float | None = None
    beta_star_inc: float | None = None


def bound_set(target_levels, e_max: float, beta_r: float, beta_h: float | None = None) -> BoundSet:
    """All limits that apply to a target with the given (ground-shifted) levels."""
    levels = np.asarray(target_levels, dtype=float)
    rs = rho_star(levels.size, beta_r, e_max)
    beta_s = beta_inc = None
    if levels.size == 2 and levels[1] > 0:
        beta_s = beta_star_qubit(beta_r, e_max, levels[1])
        if beta_h is not None and e_max >= levels[1]:
            beta_inc = beta_star_incoherent(beta_r, beta_h, e_max, levels[1])
    return BoundSet(gibbs_ratio(beta_r, e_max), rs, rs[0], beta_s, beta_inc)


@dataclass(frozen=True)
class ConvergenceRate:
    norm: float  # N_n, weight of the E_max virtual qubit
    r_v: float  # its normalised ground population
    per_cycle_factor: float


def virtual_qubit_norm(n: int, beta_r: float, e_max: float) -> float:
    """``(1 + g) / (1 + g**(1/n))**n`` for ``n`` identical qubits sharing ``E_max``."""
    if n < 1:
        raise CoolboundError("need at least one machine qubit")
    x = check_beta(beta_r) * e_max
    # log-space keeps the power accurate for large n
    return math.exp(math.log1p(math.exp(-x)) - n * math.log1p(math.exp(-x / n)))


def convergence_rate(n: int, beta_r: float, e_max: float) -> ConvergenceRate:
    norm = virtual_qubit_norm(n, beta_r, e_max)
    return ConvergenceRate(norm, ground_population_bound(beta_r, e_max), 1.0 - norm)


def norm_scaling_limit(beta_r: float, e_max: float) -> float:
    """Large-n limit of ``N_n * 2**n``: ``2 cosh(beta_R E_max / 2)``."""
    return 2.0 * math.cosh(check_beta(beta_r) * e_max / 2.0)
