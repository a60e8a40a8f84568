"""ellgen: exact genera of projective complete intersections.

Exact q-expansions of Euler numbers, chi_y genera, two-variable elliptic
genera, NS elliptic genera and Witten genera of (possibly virtual) complete
intersections in CP^(N-1), computed by residue calculus over a truncated
series algebra; plus a numeric evaluator of the Landau-Ginzburg orbifold
sector sums that verifies the geometric/LG correspondence to tolerance.
"""

__version__ = "0.1.0"

from .coeffring import BigRat, PF_TRIVIAL, Prefactor, QSeries, RatFunc, rf
from .errors import (
    CertificateError,
    CompositionError,
    DomainError,
    EllgenError,
    EvalError,
    NotInvertible,
    ParityWarning,
    PoleCollisionError,
    PreconditionError,
    PrefactorError,
    RankError,
    TruncationError,
    WindowError,
)
from .genera import (
    CISpec,
    GenusResult,
    WittenResult,
    chi_y_generating_series,
    chi_y_genus,
    elliptic_genus,
    elliptic_genus_generating_series,
    euler_generating_series,
    euler_number,
    euler_number_alternating_sum,
    ns_elliptic_genus,
    witten_genus,
    y_polynomial_coeffs,
)
from .lgside import (
    CorrespondenceReport,
    LGParams,
    check_correspondence,
    lg_elliptic_sum,
    lg_elliptic_sum_ci,
    lg_ns_sum,
    lg_ns_sum_ci,
    lg_sigma1_sum,
    lg_sigma1_sum_ci,
    lg_sigma23_sum,
    lg_sigma23_sum_ci,
)
from .series import TSeries, ZLaurent, compose, residue_sum_closed, residue_sum_direct, revert
from .theta import (
    EvalPoint,
    NS_KERNEL_PREFACTOR,
    ThetaKind,
    eta_value,
    ns_theta_ratio_jet,
    theta2_over_eta3,
    theta_derivative,
    theta_over_eta3,
    theta_ratio_jet,
    theta_value,
)

__all__ = [name for name in dir() if not name.startswith("_")]
