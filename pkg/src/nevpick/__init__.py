"""Bitangential Nevanlinna-Pick interpolation on the right half plane.

Solvability through the Pick matrix, construction of all solutions by a
linear-fractional map, and independent numerical certificates.
"""

from .datasets import (
    AdmissibilityReport,
    BTOAData,
    LeftNode,
    RightNode,
    SimpleData,
    aggregate_from_simple,
    parse_dataset,
    serialize_dataset,
    validate_admissible,
)
from .errors import DataError, NevPickError, NumericalError, ParseError
from .lft import FreeParameter, Interpolant, lft_apply, make_interpolant, side_condition
from .numkit import Inertia, hermitian_inertia, pair_controllable, pair_observable, solve_sylvester, spectrum
from .pick import (
    PickReport,
    coupling_factorization,
    gamma_left,
    gamma_right,
    j_gramians,
    pick_matrix,
    schur_complement_inertia,
    simple_pick_matrix,
)
from .realization import (
    Realization,
    blaschke_factor,
    build_psi,
    build_theta,
    j_unitarity_defect,
    theta_kernel,
)
from .verify import (
    ContourConfig,
    btoa_eval,
    check_interpolation,
    dbr_kernel_inertia,
    fmi_kernel,
    ltoa_eval,
    rtoa_eval,
)
from .winding import WindingConfig, kappa_certificate, pole_count, winding_det

__version__ = "0.1.0"
