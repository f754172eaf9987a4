"""Randomness-rate certification for noisy two-party Bell experiments.

Thin wrapper around the C++ core: quantum models for white and dephasing
noise, guessing-probability SDPs at local level 2, and dual Bell-expression
certificates.
"""

from bellrand._core import (
    __version__,
    behavior_table,
    certify,
    chsh_value,
    export_sdpa,
    is_local,
    monomial_count,
    oracle_lower_bound,
    sweep,
)

__all__ = [
    "__version__",
    "behavior_table",
    "certify",
    "chsh_value",
    "export_sdpa",
    "is_local",
    "monomial_count",
    "oracle_lower_bound",
    "sweep",
]
