"""Rigorous sign certificates: interval arithmetic, branch and bound, suite."""

from .interval import Interval
from .optimize import Inconclusive, bound_maximum, bound_minimum
from .suite import (
    CERTIFICATES,
    CertResult,
    CertSpec,
    format_results,
    fuzz_certificates,
    run_certificate,
    run_suite,
    seed_consistency,
    suite_ok,
)

__all__ = [
    "Interval",
    "Inconclusive",
    "bound_maximum",
    "bound_minimum",
    "CERTIFICATES",
    "CertResult",
    "CertSpec",
    "format_results",
    "fuzz_certificates",
    "run_certificate",
    "run_suite",
    "seed_consistency",
    "suite_ok",
]
