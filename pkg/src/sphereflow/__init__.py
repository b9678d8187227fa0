"""Symbolic-numeric analysis of homogeneous polynomial vector fields
tangent to the unit sphere: tangency verification, the degree-2 normal
form, singularity classification, center/weak-focus analysis, periodic-
orbit nonexistence criteria, canonical reductions, phase-portrait
classification, and Hopf/limit-cycle numerics."""

from .polyalg import Poly, poly2, poly3, poly_from_records, poly_to_records
from .spherefield import (FieldError, HomVectorField, NotTangent, Plane,
                          QuadCoeffs, Rotation3, is_tangent, quad_field,
                          rotate, to_quad_normal_form)
from .charts import ChartSpec, PlanarSystem, central_project, stereo_project
from .singular import SingularSet, SingularityReport, enumerate_singularities
from .local import (CenterVerdict, center_test, lyapunov_from_coeffs,
                    lyapunov_homological, lyapunov_v1_closed_form)
from .qualitative import (NoCyclesVerdict, NotInScope, PortraitClass,
                          ReductionResult, RotationCheck, SignStatus,
                          case_reduce, inverse_integrating_factor_check,
                          nocycles_central, nocycles_stereo,
                          portrait_classify, rotated_family_check,
                          sign_definiteness, tangency_count)
from .numerics import (CycleEstimate, HopfReport, NoReturn,
                       PreconditionViolated, StepFailure, Trajectory,
                       closure_distance, find_limit_cycle, hopf_scan,
                       integrate_planar, integrate_sphere, poincare_return)
from .kernels import BACKEND as KERNEL_BACKEND

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "1.0.0"
