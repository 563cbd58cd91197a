"""Cooling cycle maps and their iteration to a fixed point.

Three repeated protocols are provided, each a map on diagonal target states
with the machine rethermalised before every cycle:

* ``OPTIMAL`` reorders the joint eigenvalues so the largest ``d_M`` land on
  the target ground level, the next ``d_M`` on the first excited level, etc.
* ``MAX_SWAP`` swaps one pair of adjacent target levels with the machine's
  ground / top-level subspace, picking the pair with the largest gain.
  The target is made passive before and after each swap.
* ``INCOHERENT_MAX_SWAP`` is the energy-preserving variant: each swap is
  bridged by a hot qubit, and the state stays in energy order.

Two smallest-machine special cases round things off: a single qubit target
swapped once against a single qubit machine, and the three-qubit
(target, machine, hot ancilla) swap of the smallest autonomous fridge.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .bounds import rho_star
from .errors import CoolboundError, DimensionError
from .majorization import (
    SchurFunctionals,
    SortedEigenvalues,
    majorization_margin,
    schur_functionals,
    sort_desc,
)
from .spectra import (
    MachineSpec,
    PopulationVector,
    Spectrum,
    check_beta,
    extend_machine,
    partial_trace_machine,
    tensor,
    thermal_state,
)

DEFAULT_TOLERANCE = 1e-12
DEFAULT_MAX_CYCLES = 10**6
BOUND_TOL = 1e-10


class Protocol(str, enum.Enum):
    OPTIMAL = "optimal"
    MAX_SWAP = "max-swap"
    INCOHERENT_MAX_SWAP = "incoherent-max-swap"
    SINGLE_SWAP_QUBIT = "single-swap-qubit"
    THREE_QUBIT_INCOHERENT = "three-qubit-incoherent"


@dataclass(frozen=True, eq=False)
class CycleTrace:
    cycle_index: int
    state_before: PopulationVector
    state_after: PopulationVector
    chosen_index: int
    delta: float
    functionals: SchurFunctionals
    bound_ok: bool


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    """Outcome of :func:`iterate`.

    ``max_residual_delta`` is the largest positive swap gain left at the final
    state (for ``OPTIMAL`` also the size of the next cycle's change).
    ``min_partial_sum_increment`` is the smallest cycle-over-cycle change of
    any partial sum, negative if monotonicity was ever broken;
    ``worst_bound_margin`` the smallest slack of any visited state against the
    cumulative sums of the bound state. Neither is meaningful when no cycle ran
    (both are ``inf``).
    """

    protocol: Protocol
    final_state: PopulationVector
    cycles: int
    converged: bool
    max_residual_delta: float
    distance_to_bound: float
    premise_holds: bool
    min_partial_sum_increment: float = np.inf
    worst_bound_margin: float = np.inf
    flags: tuple = field(default_factory=tuple)


def _buf(p):
    return np.array(p.probs if isinstance(p, PopulationVector) else p, dtype=float)


def _machine_extremes(machine_thermal) -> tuple[float, float]:
    vals = machine_thermal.vals if isinstance(machine_thermal, SortedEigenvalues) else (
        np.sort(np.asarray(machine_thermal, dtype=float))[::-1]
    )
    return float(vals[0]), float(vals[-1])


def _coherent_weights(d_s, q_ground, q_top):
    return np.full(d_s, q_ground), np.full(d_s, q_top)


def _incoherent_weights(d_s, q_ground, q_top, hot):
    up, down = np.zeros(d_s), np.zeros(d_s)
    up[1:] = q_ground * hot[:, 1]
    down[1:] = q_top * hot[:, 0]
    return up, down


def delta_i(rho_s: PopulationVector, machine_thermal, i: int) -> float:
    """Population gained by level ``i-1`` when levels ``i-1, i`` are swapped
    against the machine's ground / top-level pair. ``rho_s`` must be passive.
    """
    if not 1 <= i <= rho_s.dim - 1:
        raise CoolboundError(f"transition index {i} outside 1..{rho_s.dim - 1}")
    q_ground, q_top = _machine_extremes(machine_thermal)
    return rho_s[i] * q_ground - rho_s[i - 1] * q_top


def incoherent_delta_i(rho_s: PopulationVector, mspec: MachineSpec, beta_r, beta_h, i: int) -> float:
    if not 1 <= i <= rho_s.dim - 1:
        raise CoolboundError(f"transition index {i} outside 1..{rho_s.dim - 1}")
    q_ground, q_top = _machine_extremes(sort_desc(thermal_state(mspec.base, beta_r)))
    hot = mspec.hot_qubit_states(beta_h)[i - 1]
    return rho_s[i] * q_ground * hot[1] - rho_s[i - 1] * q_top * hot[0]


def optimal_coherent_joint(rho_s: PopulationVector, machine: Spectrum, beta_r) -> PopulationVector:
    """Joint populations after the optimal reordering (target-major layout)."""
    joint = tensor(rho_s, thermal_state(machine, beta_r)).probs
    return PopulationVector(np.sort(joint)[::-1])


def optimal_coherent_step(rho_s: PopulationVector, machine: Spectrum, beta_r) -> PopulationVector:
    out = np.empty(rho_s.dim)
    kernels.optimal_step(_buf(rho_s), _buf(thermal_state(machine, beta_r)), out)
    return PopulationVector(out)


def coherent_max_swap_step(rho_s: PopulationVector, machine: Spectrum, beta_r):
    """Returns ``(new_state, chosen_index, delta)``; index 0 means no swap paid off."""
    q_ground, q_top = _machine_extremes(sort_desc(thermal_state(machine, beta_r)))
    up, down = _coherent_weights(rho_s.dim, q_ground, q_top)
    p = _buf(rho_s)
    k, d = kernels.max_swap_step(p, up, down, True)
    return PopulationVector(p), k, d


def incoherent_max_swap_step(rho_s: PopulationVector, mspec: MachineSpec, beta_r, beta_h):
    """Energy-preserving max-swap; the state is *not* made passive."""
    if mspec.extension_gaps.size != rho_s.dim - 1:
        raise CoolboundError(
            f"machine extension has {mspec.extension_gaps.size} hot qubits, "
            f"target needs {rho_s.dim - 1}"
        )
    q_ground, q_top = _machine_extremes(sort_desc(thermal_state(mspec.base, beta_r)))
    up, down = _incoherent_weights(rho_s.dim, q_ground, q_top, mspec.hot_qubit_states(beta_h))
    p = _buf(rho_s)
    k, d = kernels.max_swap_step(p, up, down, False)
    return PopulationVector(p), k, d


def _require_qubits(*vecs):
    for v in vecs:
        if v.dim != 2:
            raise DimensionError(f"expected a qubit population vector, got dimension {v.dim}")


def single_swap_qubit(p_s: PopulationVector, p_m: PopulationVector) -> PopulationVector:
    """Swap |01> and |10> of a qubit target and qubit machine; return the target."""
    _require_qubits(p_s, p_m)
    joint = tensor(p_s, p_m).probs.copy()
    joint[[1, 2]] = joint[[2, 1]]
    return partial_trace_machine(PopulationVector(joint), 2, 2)


def three_qubit_incoherent_swap(p_s: PopulationVector, p_m: PopulationVector,
                                p_a: PopulationVector) -> PopulationVector:
    """Swap |010> and |101> (target, machine, ancilla); return the target marginal."""
    _require_qubits(p_s, p_m, p_a)
    joint = tensor(tensor(p_s, p_m), p_a).probs.copy()
    joint[[0b010, 0b101]] = joint[[0b101, 0b010]]
    return partial_trace_machine(PopulationVector(joint), 2, 4)


def _settle(p) -> PopulationVector:
    # long runs accumulate ~1 ulp of norm drift per swap; remove it on output
    return PopulationVector(p / math.fsum(p))


def _passive_cumsum(p):
    return np.cumsum(np.sort(p)[::-1])


def iterate(protocol, initial: PopulationVector, *, target: Spectrum, machine: Spectrum,
            beta_r: float, beta_h: float = 0.0, tolerance: float = DEFAULT_TOLERANCE,
            max_cycles: int = DEFAULT_MAX_CYCLES, record_trace: bool = True):
    """Apply ``protocol`` until a fixed point is reached or ``max_cycles`` run out.

    Convergence is tested before every cycle: the run stops once the next
    cycle would move the state by less than ``tolerance`` (max-norm) and no
    swap gain exceeds it. Non-convergence is reported, not raised.

    With ``record_trace=False`` the loop runs inside the cycle kernel and the
    returned trace list is empty; the report is identical either way.
    """
    try:
        protocol = Protocol(protocol)
    except ValueError:
        choices = ", ".join(p.value for p in Protocol)
        raise CoolboundError(f"unknown protocol {protocol!r}; expected one of {choices}") from None
    beta_r, beta_h = check_beta(beta_r), check_beta(beta_h)
    if tolerance <= 0:
        raise CoolboundError("tolerance must be positive")
    if max_cycles < 0:
        raise CoolboundError("max_cycles must be >= 0")
    d_s = target.dim
    if initial.dim != d_s:
        raise DimensionError(f"initial state has {initial.dim} levels, target has {d_s}")

    star = rho_star(d_s, beta_r, machine.e_max)
    star_cs = np.cumsum(star.probs)
    premise = majorization_margin(star, initial) >= -BOUND_TOL
    tau_m = thermal_state(machine, beta_r)
    q_ground, q_top = _machine_extremes(sort_desc(tau_m))
    flags = []
    if protocol in (Protocol.INCOHERENT_MAX_SWAP, Protocol.THREE_QUBIT_INCOHERENT) and beta_h > beta_r:
        flags.append("hot-bath-colder-than-environment")
    if not premise:
        flags.append("initial-state-not-majorized-by-bound")

    if protocol in (Protocol.SINGLE_SWAP_QUBIT, Protocol.THREE_QUBIT_INCOHERENT):
        return _iterate_smallest(protocol, initial, target, machine, beta_r, beta_h, tolerance,
                                 max_cycles, star, premise, flags, record_trace)

    if protocol is Protocol.INCOHERENT_MAX_SWAP:
        mspec = extend_machine(target, machine)
        up, down = _incoherent_weights(d_s, q_ground, q_top, mspec.hot_qubit_states(beta_h))
    else:
        up, down = _coherent_weights(d_s, q_ground, q_top)
    q = _buf(tau_m)

    if not record_trace:
        p = _buf(initial)
        if protocol is Protocol.OPTIMAL:
            res = kernels.run_optimal(p, q, up, down, tolerance, max_cycles, star_cs)
        else:
            passive = protocol is Protocol.MAX_SWAP
            res = kernels.run_swap(p, up, down, passive, tolerance, max_cycles, star_cs)
        cycles, converged, residual, min_inc, margin = res
        final = _settle(p)
        report = ConvergenceReport(
            protocol, final, cycles, converged, residual,
            float(np.max(np.abs(final.probs - star.probs))), premise,
            min_inc, margin, tuple(flags),
        )
        return report, []

    traces = []
    p = _buf(initial)
    passive_order = protocol is not Protocol.INCOHERENT_MAX_SWAP
    prev_cs = np.cumsum(np.sort(p)[::-1]) if passive_order else np.cumsum(p)
    min_inc = margin = np.inf
    cycles, converged = 0, False
    nxt = None
    while True:
        if protocol is Protocol.OPTIMAL:
            nxt = np.empty(d_s)
            kernels.optimal_step(p, q, nxt)
            change = float(np.max(np.abs(nxt - p)))
            _, d = kernels.max_delta(np.sort(p)[::-1].copy(), up, down)
            residual = max(d, 0.0, change)
        else:
            probe = p.copy()
            if protocol is Protocol.MAX_SWAP:
                kernels.passivize(probe)
            _, d = kernels.max_delta(probe, up, down)
            residual = max(d, 0.0)
        if residual < tolerance:
            converged = True
            break
        if cycles >= max_cycles:
            break
        before = _settle(p)
        if protocol is Protocol.OPTIMAL:
            p, k, d = nxt, 0, 0.0
        else:
            p = p.copy()
            k, d = kernels.max_swap_step(p, up, down, protocol is Protocol.MAX_SWAP)
        cycles += 1
        after = _settle(p)
        cs = _passive_cumsum(p) if passive_order else np.cumsum(p)
        min_inc = min(min_inc, float(np.min(cs - prev_cs)))
        prev_cs = cs
        step_margin = float(np.min(star_cs - _passive_cumsum(p)))
        margin = min(margin, step_margin)
        traces.append(CycleTrace(
            cycles, before, after, int(k), float(d), schur_functionals(after, target),
            bool(step_margin >= -BOUND_TOL) if premise else True,
        ))
    final = _settle(p)
    report = ConvergenceReport(
        protocol, final, cycles, converged, residual,
        float(np.max(np.abs(final.probs - star.probs))), premise, min_inc, margin, tuple(flags),
    )
    return report, traces


def _iterate_smallest(protocol, initial, target, machine, beta_r, beta_h, tolerance,
                      max_cycles, star, premise, flags, record_trace):
    if target.dim != 2 or machine.dim != 2:
        raise DimensionError(f"{protocol.value} needs a qubit target and a qubit machine")
    tau_m = thermal_state(machine, beta_r)
    if protocol is Protocol.THREE_QUBIT_INCOHERENT:
        mspec = extend_machine(target, machine)
        tau_a = thermal_state(Spectrum.qubit(mspec.extension_gaps[0]), beta_h)

        def step(p):
            return three_qubit_incoherent_swap(p, tau_m, tau_a)

        cap = max_cycles
    else:

        def step(p):
            return single_swap_qubit(p, tau_m)

        cap = min(max_cycles, 1)

    three = protocol is Protocol.THREE_QUBIT_INCOHERENT
    order = np.cumsum if three else _passive_cumsum
    star_cs = np.cumsum(star.probs)
    p = initial
    prev_cs = order(p.probs)
    min_inc = margin = np.inf
    traces = []
    cycles = 0
    while True:
        nxt = step(p)
        # the single swap is one unitary: always applied once
        if three and abs(nxt[0] - p[0]) < tolerance:
            break
        if cycles >= cap:
            break
        cycles += 1
        cs = order(nxt.probs)
        min_inc = min(min_inc, float(np.min(cs - prev_cs)))
        prev_cs = cs
        step_margin = float(np.min(star_cs - _passive_cumsum(nxt.probs)))
        margin = min(margin, step_margin)
        if record_trace:
            traces.append(CycleTrace(
                cycles, p, nxt, 1, nxt[0] - p[0], schur_functionals(nxt, target),
                bool(step_margin >= -BOUND_TOL) if premise else True,
            ))
        p = nxt
    if three:
        residual = abs(step(p)[0] - p[0])
    else:
        q_ground, q_top = _machine_extremes(sort_desc(tau_m))
        srt = np.sort(p.probs)[::-1]
        residual = max(srt[1] * q_ground - srt[0] * q_top, 0.0)
    report = ConvergenceReport(
        protocol, p, cycles, bool(residual < tolerance), float(residual),
        float(np.max(np.abs(p.probs - star.probs))), premise, min_inc, margin, tuple(flags),
    )
    return report, traces
