"""Series impedance of systems of parallel round conductors.

Computes frequency-dependent per-unit-length resistance and inductance
matrices with full skin- and proximity-effect modeling: each conductor is
replaced by an equivalent surface current through a surface admittance
operator, the boundary integral equation is discretized in azimuthal
Fourier harmonics, and the interaction matrix is assembled from closed
forms so that it can be reused across a whole frequency sweep.
"""

__version__ = "0.1.0"

from .admittance import SurfaceAdmittance, admittance_entry, assemble_admittance, wavenumbers
from .geometry import (
    EPS0,
    MU0,
    Conductor,
    CrossSection,
    CrossSectionError,
    HarmonicLayout,
    bundled_cross_section,
    center_distance,
    geometry_hash,
    load_cross_section,
    save_cross_section,
    three_phase_armored_cable,
    validate,
)
from .green import (
    GreenMatrix,
    assemble_green,
    green_mutual_entry,
    green_self_block,
    load_green_cache,
    save_green_cache,
)
from .oracles import (
    MeshValidityError,
    TwoWireSpec,
    filament_solve,
    green_quadrature,
    skin_depth,
    two_wire_hf,
    two_wire_wide,
)
from .solver import (
    PulResult,
    SolveSettings,
    SolverError,
    current_density,
    eliminate_grounded,
    kron_reduce,
    pul_partial,
    reference_reduce,
    selector_indices,
    sequence_impedances,
    sweep,
)
from .specfun import RatioPoleError, bessel_j_next_ratio, bessel_j_quotient, bessel_j_ratio, kelvin_funcs

__all__ = [
    "EPS0",
    "MU0",
    "Conductor",
    "CrossSection",
    "CrossSectionError",
    "GreenMatrix",
    "HarmonicLayout",
    "MeshValidityError",
    "PulResult",
    "RatioPoleError",
    "SolveSettings",
    "SolverError",
    "SurfaceAdmittance",
    "TwoWireSpec",
    "admittance_entry",
    "assemble_admittance",
    "assemble_green",
    "bessel_j_next_ratio",
    "bessel_j_quotient",
    "bessel_j_ratio",
    "bundled_cross_section",
    "center_distance",
    "current_density",
    "eliminate_grounded",
    "filament_solve",
    "geometry_hash",
    "green_mutual_entry",
    "green_quadrature",
    "green_self_block",
    "kelvin_funcs",
    "kron_reduce",
    "load_cross_section",
    "load_green_cache",
    "pul_partial",
    "reference_reduce",
    "save_cross_section",
    "save_green_cache",
    "selector_indices",
    "sequence_impedances",
    "skin_depth",
    "sweep",
    "three_phase_armored_cable",
    "two_wire_hf",
    "two_wire_wide",
    "validate",
    "wavenumbers",
]
