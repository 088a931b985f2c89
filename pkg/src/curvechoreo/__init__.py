"""Three-body choreographies constructed on prescribed planar curves.

Given a closed curve, the pair problem fixes the centre of mass: for each
position of one body, find the other two on the curve. Sweeping that body
around the curve gives the shape of the motion; a conserved quantity
(angular momentum or energy) then fixes the timing.
"""

from .choreography import (
    Sweep,
    Trajectory,
    angular_momentum_reparam,
    average_angular_momentum,
    choreography_shift_error,
    energy_reparam,
    geometric_sweep,
    tangent_concurrency,
)
from .curves import (
    Curve,
    Ellipse,
    EightProfile,
    Lemniscate,
    ProfileEight,
    SampledCurve,
    Symmetry,
    check_conditions,
    circle,
    critical_a0,
    lemniscate_profile,
    polynomial_profile,
)
from .errors import ChoreoError
from .geometry import Line, cross, star_map, three_lines_concurrent, vec2
from .pairs import (
    PairKind,
    PairSolution,
    count_crossings_oracle,
    g_function,
    solve_eight_pair,
    solve_general_pair,
    solve_pair,
    solve_symmetric_pair,
    x0_of_a,
)
from .potentials import PairPotential, harmonic, lemniscate_potential, parse_potential
from .verification import (
    EllipseOracle,
    calibrate_modulus,
    ellipse_oracle_constants,
    eom_residual,
    fit_pair_potential,
    jacobi_sn_cn_dn,
    lemniscate_oracle,
)

__version__ = "0.1.0"
