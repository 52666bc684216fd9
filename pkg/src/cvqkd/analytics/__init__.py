"""
Secret-key-rate and capacity analytics.
"""

from cvqkd.analytics.capacity import dcmc_capacity, solve_snr_for_rate
from cvqkd.analytics.skr import (
    covariance_summary,
    finite_size_offset,
    g_function,
    holevo,
    holevo_eigensolver,
    max_secure_distance,
    mutual_information,
    path_loss,
    plob_bound,
    reconciliation_efficiency,
    secure_distance_for,
    skr,
    skr_vs_distance,
    solve_va_for_snr,
    threshold_snr_for_beta,
    total_noise,
)

__all__ = [
    "path_loss",
    "total_noise",
    "mutual_information",
    "reconciliation_efficiency",
    "threshold_snr_for_beta",
    "covariance_summary",
    "holevo_eigensolver",
    "g_function",
    "holevo",
    "finite_size_offset",
    "skr",
    "solve_va_for_snr",
    "plob_bound",
    "skr_vs_distance",
    "max_secure_distance",
    "secure_distance_for",
    "dcmc_capacity",
    "solve_snr_for_rate",
]
