"""paravg: averaging on the discrete paraboloid and its frequency anatomy.

Modules:
    lattice      - finitely supported functions on Z^n (norms, convolution)
    cutoff       - sharp/smooth cutoffs, paraboloid kernels, the average
    expsums      - quadratic exponential sums, the multiplier, rational
                   approximation
    arcs         - Farey fractions, bump ladders, multiplier pieces
    numtheory    - divisor statistics and complete exponential sums
    coefficients - piece Fourier coefficients, quadrature oracle, decay scans
    experiments  - operator norms, extremizer families, scaling fits
    cli          - batch front end (reports, CSV/JSON, SVG plots)
"""

from . import arcs, coefficients, cutoff, expsums, experiments, lattice, numtheory, reports
from .arcs import (
    ArcSystem,
    BumpLadder,
    FareyFraction,
    MajorArc,
    PieceSpec,
    bump_psi,
    bump_psi_hat,
    major_arcs,
    piece_multiplier,
    totatives,
)
from .coefficients import (
    CoefficientQuery,
    coefficient_decay_report,
    piece_coefficient,
    piece_coefficient_oracle,
    piece_sup_report,
)
from .cutoff import CutoffProfile, OperatorParams, average, cutoff_checks, paraboloid_kernel
from .expsums import dirichlet_approx, gauss_bound_report, gauss_sum, multiplier
from .experiments import (
    box_extremizer_ratio,
    delta_extremizer_ratio,
    norm_l1_linf,
    norm_l2_l2,
    random_ascent_lower_bound,
    scaling_fit,
    sharp_threshold,
    two_bump_separation_probe,
)
from .lattice import LatticeFunction, box_indicator, convolve, delta, lp_norm, reflect, shift
from .numtheory import (
    divisor_count,
    divisor_level_count,
    paraboloid_divisor_count,
    ramanujan_sum,
    truncated_divisor_count,
)
from .reports import ExperimentReport

__version__ = "0.1.0"
