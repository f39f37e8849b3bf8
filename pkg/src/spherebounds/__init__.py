"""Frame potentials, their bounds, and point configurations on spheres."""
__version__ = "0.1.0"

from .core import (
    Configuration,
    Weights,
    load_configuration,
    perturb,
    platonic,
    sample_uniform,
    save_configuration,
)
from .frames import (
    BoundReport,
    afp2_spectral,
    afp_uniform,
    afp_upper_bound_report,
    antisymmetric_fp,
    fp_bound_report,
    fp_lower_bound,
    frame_potential,
    frame_potential_spectral,
    harmonic_coefficients,
    weighted_frame_potential,
)
from .specfun import (
    addition_poly,
    gamma_lk,
    gegenbauer,
    kappa_table,
    power_expansion,
    sph_harm,
    uniform_fp_coeff,
)
