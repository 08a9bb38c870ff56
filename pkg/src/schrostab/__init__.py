"""Stability certification toolkit for semi-discretized boundary-damped
Schrodinger dynamics: exact discrete identities, spectra, resolvent sweeps
and energy-decay simulation."""

__version__ = "0.1.0"

from .continuous import (
    SampledFunction,
    apply_continuous_inverse,
    characteristic_roots,
    continuous_energy,
)
from .dynamics import EnergyTrace, fit_decay_rate, initial_state, simulate, step_midpoint
from .errors import NumericalError
from .grid import (
    GridVector,
    Mesh,
    SchemeMatrices,
    average,
    build_scheme_matrices,
    difference,
    make_mesh,
    shadow_element,
    triple_sum_identity_gap,
    yh_inner,
    yh_norm,
)
from .identities import (
    MultiplierReport,
    boundary_multiplier_gap_y,
    boundary_multiplier_gap_z,
    claim_functionals_gap,
    cross_term_gap,
    run_identity_suite,
)
from .spectral import (
    ResolventSweepReport,
    SpectrumReport,
    UniformityRow,
    eigenvalues,
    resolvent_norm,
    resolvent_sweep,
    spectral_abscissa,
    uniformity_report,
)
from .systems import (
    CLASSICAL,
    ORDER_REDUCTION,
    SemiDiscreteSystem,
    apply_classical,
    apply_order_reduction,
    assemble_generator,
    discrete_energy,
    dissipation_gap,
)

__all__ = [name for name in dir() if not name.startswith("_")]
