"""Heun functions on the principal sheet and their gamma-regularized forms."""

from .errors import (ConvergenceError, DomainError, HeunError,
                     InvalidSingularPoint, NonConvergence, OnCut, OutOfDisk,
                     OutsideSheet, PoleAtGamma, QuadratureUnresolved,
                     SegmentNearSingularity, SingularCenter, TargetOnCut,
                     TargetOutsideSheet, ToleranceUnreachable)
from .frobenius import (SeriesKind, SeriesLocal, coeffs_log_gamma_one,
                        coeffs_log_nonpositive, coeffs_plain, log_constant,
                        residue_K, sum_series)
from .heun import EvalFlags, EvalResult, heunl, heuns
from .kernels import BACKEND
from .params import (BranchCuts, GammaClass, GammaKind, HeunParams, Verdict,
                     branch_cuts, classify_gamma, in_star_domain, make_params)
from .regular import (RegConfig, heunl_reg, heuns_reg, heuns_ring, recover_A,
                      recover_B, rho)

__version__ = "0.1.0"
