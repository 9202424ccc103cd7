"""Rotational constant-mean-curvature surfaces in the unit 3-sphere.

Core evaluation (profile curves, rotation angles), moduli-space solvers and
classification, plus exports to CSV/JSON/SVG/OBJ.  A FastAPI service wraps
the package (`rotcmc.api:app`); the `rotcmc` CLI is a thin client of it.
"""

__version__ = "0.1.0"

from .angles import (
    Endpoints,
    K,
    K_limit_cmin,
    K_limit_inf,
    K_one_sided_limits,
    RotationAngle,
    b,
    b_elliptic_crosscheck,
    dK_dC,
    endpoints,
)
from .errors import (
    AxisError,
    ConvergenceError,
    DegenerateIntervalError,
    DegenerateSegmentError,
    DomainError,
    InvalidInputError,
    NumericalError,
    OutOfRangeError,
    PoleProximityError,
    RotcmcError,
    SingularityError,
    StraddleError,
)
from .mesh import SurfaceMesh, build_mesh, stereographic_project
from .moduli import (
    Classification,
    ClosureSolution,
    IntersectionReport,
    classify,
    piece_rotation,
    profile_polyline_pieces,
    rational_approx,
    region_bounds,
    self_intersection,
    solve_C_for_angle,
    solve_H_for_axis_symmetry,
    turning_angle,
)
from .quadrature import (
    QuadResult,
    SingularInterval,
    integrate_adaptive,
    integrate_chebyshev_weighted,
    integrate_with_interior_pole_check,
)
from .surface import (
    GState,
    ProfilePoint,
    ProfilePolyline,
    SurfaceParams,
    c_min,
    fundamental_piece,
    g_eval,
    g_squared_extrema,
    immersion_phi,
    ode_residual,
    period,
    principal_curvatures,
    profile_alpha,
    profile_beta,
    radius_squared,
    sample_beta,
    theta_cumulative,
    theta_integrand_alpha,
    theta_integrand_beta,
    theta_period,
)
from .sweep import SweepSpec, sweep
