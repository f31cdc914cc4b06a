"""
Verification module.

Cross-oracle checks (closed forms vs Wilson loops vs time evolution) grouped
into suites that `jcm-berry verify` runs.
"""

from jcm_berry.evals.checks import CheckResult, VerifyReport, at_least, at_most, compare
from jcm_berry.evals.suites import SUITES, run_suite

__all__ = [
    "SUITES",
    "CheckResult",
    "VerifyReport",
    "at_least",
    "at_most",
    "compare",
    "run_suite",
]
