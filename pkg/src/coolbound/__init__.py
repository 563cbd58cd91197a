"""Universal cooling bound for finite quantum refrigerators.

Simulates coherent and incoherent cooling cycles on diagonal target states,
iterates them to their fixed points and checks every run against the
majorization bound set by the machine's largest energy gap.
"""
from ._backend import COMPILED
from .bounds import (
    beta_star_incoherent,
    beta_star_qubit,
    bound_set,
    convergence_rate,
    ground_population_bound,
    rho_star,
)
from .errors import (
    BudgetError,
    ConfigError,
    CoolboundError,
    DimensionError,
    InvalidExtensionError,
    UnphysicalRegimeError,
)
from .majorization import majorizes, passive_rearrange, schur_functionals, sort_desc
from .protocols import (
    Protocol,
    coherent_max_swap_step,
    incoherent_max_swap_step,
    iterate,
    optimal_coherent_step,
    three_qubit_incoherent_swap,
)
from .spectra import (
    MachineSpec,
    PopulationVector,
    Spectrum,
    extend_machine,
    partial_trace_machine,
    tensor,
    thermal_state,
)

__version__ = "0.1.0"
