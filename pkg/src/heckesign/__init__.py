"""Exact Hecke traces and sign certificates for the second Hecke-polynomial coefficient."""

from .certify import (
    Certificate,
    Decision,
    ThetaProfile,
    certify_point,
    error_envelope,
    first_certified_weight,
    staircase,
    theta_profile,
    verify_staircase,
    verify_theta_table,
)
from .classnum import class_number, weighted_class_number
from .coeffs import Sign, SignReport, a1, a2, a2_sweep, dimension, is_exceptional, sign_report
from .ntheory import FactoredInteger, factorize, omega, psi
from .search import SearchRegion, SearchResult, classify_region, residual_region
from .trace import TraceBreakdown, TraceIntegralityError, trace

__version__ = "0.1.0"

__all__ = [
    "Certificate", "Decision", "ThetaProfile", "certify_point", "error_envelope",
    "first_certified_weight", "staircase", "theta_profile", "verify_staircase",
    "verify_theta_table", "class_number", "weighted_class_number", "Sign", "SignReport",
    "a1", "a2", "a2_sweep", "dimension", "is_exceptional", "sign_report", "FactoredInteger",
    "factorize", "omega", "psi", "SearchRegion", "SearchResult", "classify_region",
    "residual_region", "TraceBreakdown", "TraceIntegralityError", "trace",
]
