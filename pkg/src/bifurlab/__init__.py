"""bifurlab: power-law particular solutions and stability verdicts for
damped perturbations of planar centre-saddle normal forms, with numerical
verification by adaptive integration."""

from .series import (FracSeries, GridMismatchError, Poly1, Poly2,
                     TruncationError, poly2_partial, series_add,
                     series_compose_poly2, series_ddt, series_mul,
                     series_scale, series_shift, series_sub)
from .model import (AssumptionProfile, DomainError, PerturbedSystem,
                    UnperturbedSystemError, detect_profile, rhs,
                    v_derivatives)
from .presets import example1, example2, preset
from .asymptotics import (AssumptionError, AsymptoticSolution, Branch,
                          BranchError, ConditioningError,
                          DegenerateCoefficientError, EscapeReport,
                          LeadingData, build_branch, build_mu, build_nu,
                          build_sigma, delta_discriminant, eval_asym,
                          residual)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
