"""Brute-force checks that do not share code paths with the protocols.

The exhaustive oracle enumerates every placement of the joint eigenvalues on
the joint basis and keeps the best partial sum; sums are exactly rounded so
that equal subsets compare equal regardless of summation order.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .bounds import rho_star
from .errors import BudgetError, CoolboundError
from .majorization import majorization_margin
from .protocols import Protocol, iterate
from .spectra import PopulationVector, Spectrum, tensor, thermal_state

EXHAUSTIVE_MAX_DIM = 8
FALSIFICATION_SAMPLES = 10**5
CAMPAIGN_MAX_TARGET_DIM = 8
CAMPAIGN_MAX_MACHINE_DIM = 64
CAMPAIGN_MAX_TRIALS = 10**6
VIOLATION_TOL = 1e-10
LAYOUTS = ("target-major", "machine-major")


def _joint(rho_s, machine, beta_r):
    return tensor(rho_s, thermal_state(machine, beta_r)).probs


def _position_levels(d_s, d_m, layout):
    if layout == "target-major":
        return np.repeat(np.arange(d_s), d_m)
    if layout == "machine-major":
        return np.tile(np.arange(d_s), d_m)
    raise CoolboundError(f"unknown layout {layout!r}; expected one of {LAYOUTS}")


def best_permutation_partial_sums(rho_s: PopulationVector, machine: Spectrum, beta_r,
                                  layout: str = "target-major") -> np.ndarray:
    """Best achievable target partial sums ``k = 1..d_S`` over every joint permutation."""
    d_s, d_m = rho_s.dim, machine.dim
    if d_s * d_m > EXHAUSTIVE_MAX_DIM:
        raise BudgetError(
            f"exhaustive search over {d_s * d_m}! permutations exceeds the "
            f"{EXHAUSTIVE_MAX_DIM}! budget"
        )
    levels = _position_levels(d_s, d_m, layout).astype(np.int64)
    best = kernels.perm_max_prefix(_joint(rho_s, machine, beta_r), levels, d_s)
    return np.array(best)


def best_permutation_cooling(rho_s: PopulationVector, machine: Spectrum, beta_r, k: int,
                             layout: str = "target-major") -> float:
    if not 1 <= k <= rho_s.dim:
        raise CoolboundError(f"k must lie in 1..{rho_s.dim}")
    return float(best_permutation_partial_sums(rho_s, machine, beta_r, layout)[k - 1])


def top_joint_sum(rho_s: PopulationVector, machine: Spectrum, beta_r, k: int) -> float:
    """Exactly rounded sum of the ``k * d_M`` largest joint eigenvalues."""
    joint = np.sort(_joint(rho_s, machine, beta_r))[::-1]
    return math.fsum(joint[: k * machine.dim])


def random_permutation_falsification(rho_s: PopulationVector, machine: Spectrum, beta_r, k: int,
                                     n_samples: int = FALSIFICATION_SAMPLES, rng=None) -> float:
    """Largest ``k``-th partial sum seen over random joint permutations.

    A lower estimate of the true optimum, usable at any size: a value above a
    claimed optimum falsifies it, a value below proves nothing.
    """
    rng = np.random.default_rng(rng)
    joint = _joint(rho_s, machine, beta_r)
    m = k * machine.dim
    best = -np.inf
    for start in range(0, n_samples, 4096):
        batch = min(4096, n_samples - start)
        perms = rng.permuted(np.tile(joint, (batch, 1)), axis=1)
        best = max(best, float(perms[:, :m].sum(axis=1).max()))
    return best


def random_instance(rng, max_d_s: int = 4, max_d_m: int = 6):
    """Random target, machine, ``beta_R`` and ``beta_H`` for campaigns.

    Machine gaps are uniform in (0, 2] and ``beta_R`` in [0, 5]; target gaps
    are uniform in (0, min(2, E_max)] so the thermal target lies under the
    bound and every hot-qubit gap is non-negative. ``beta_H`` is uniform in
    [0, beta_R] (hot bath no colder than the environment).
    """
    d_s = int(rng.integers(2, max_d_s + 1))
    d_m = int(rng.integers(2, max_d_m + 1))
    machine = Spectrum(np.concatenate([[0.0], np.cumsum(2.0 - rng.uniform(0.0, 2.0, d_m - 1))]))
    top = min(2.0, machine.e_max)
    target = Spectrum(np.concatenate([[0.0], np.cumsum(top - rng.uniform(0.0, top, d_s - 1))]))
    beta_r = float(rng.uniform(0.0, 5.0))
    beta_h = float(rng.uniform(0.0, beta_r))
    return target, machine, beta_r, beta_h


@dataclass(frozen=True)
class TrialResult:
    trial: int
    protocol: str
    cycles: int
    converged: bool
    final_margin: float
    path_margin: float
    monotonicity: float


@dataclass(frozen=True)
class CampaignReport:
    trials: int
    runs: int
    violations: int
    non_converged: int
    worst_final_margin: float
    worst_path_margin: float
    worst_monotonicity: float
    results: tuple

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def summary(self) -> str:
        return (
            f"trials={self.trials} runs={self.runs} violations={self.violations} "
            f"non_converged={self.non_converged} "
            f"worst_final_margin={self.worst_final_margin:.17g} "
            f"worst_path_margin={self.worst_path_margin:.17g} "
            f"worst_monotonicity={self.worst_monotonicity:.17g}"
        )


def _run_trial(args):
    index, seed_seq, max_d_s, max_d_m, tolerance, max_cycles = args
    rng = np.random.default_rng(seed_seq)
    target, machine, beta_r, beta_h = random_instance(rng, max_d_s, max_d_m)
    initial = thermal_state(target, beta_r)
    star = rho_star(target.dim, beta_r, machine.e_max)
    out = []
    for protocol in (Protocol.OPTIMAL, Protocol.MAX_SWAP, Protocol.INCOHERENT_MAX_SWAP):
        report, _ = iterate(protocol, initial, target=target, machine=machine, beta_r=beta_r,
                            beta_h=beta_h, tolerance=tolerance, max_cycles=max_cycles,
                            record_trace=False)
        final_margin = majorization_margin(star, report.final_state)
        out.append(TrialResult(index, protocol.value, report.cycles, report.converged,
                               final_margin, min(report.worst_bound_margin, final_margin),
                               report.min_partial_sum_increment))
    return out


def verify_bound_random(trials: int = 1000, dims=(4, 6), seed: int = 0, *,
                        tolerance: float = 1e-12, max_cycles: int = 10**6,
                        workers: int = 1) -> CampaignReport:
    """Run every repeated protocol on random instances and check the bound.

    Each trial gets its own RNG stream spawned from ``seed``, so results do
    not depend on ``workers``. Failures are counted, never raised.
    """
    max_d_s, max_d_m = dims
    if not 2 <= max_d_s <= CAMPAIGN_MAX_TARGET_DIM or not 2 <= max_d_m <= CAMPAIGN_MAX_MACHINE_DIM:
        raise BudgetError(
            f"dims {dims} outside the campaign budget "
            f"(target 2..{CAMPAIGN_MAX_TARGET_DIM}, machine 2..{CAMPAIGN_MAX_MACHINE_DIM})"
        )
    if not 1 <= trials <= CAMPAIGN_MAX_TRIALS:
        raise BudgetError(f"trials must lie in 1..{CAMPAIGN_MAX_TRIALS}")
    children = np.random.SeedSequence(seed).spawn(trials)
    jobs = [(i, c, max_d_s, max_d_m, tolerance, max_cycles) for i, c in enumerate(children)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            batches = list(pool.map(_run_trial, jobs, chunksize=16))
    else:
        batches = [_run_trial(j) for j in jobs]
    results = tuple(r for batch in batches for r in batch)
    return CampaignReport(
        trials=trials,
        runs=len(results),
        violations=sum(r.path_margin < -VIOLATION_TOL for r in results),
        non_converged=sum(not r.converged for r in results),
        worst_final_margin=min(r.final_margin for r in results),
        worst_path_margin=min(r.path_margin for r in results),
        worst_monotonicity=min(r.monotonicity for r in results),
        results=results,
    )
