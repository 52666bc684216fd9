"""
Shared constants for the CV-QKD reconciliation simulator.

Holds the reference parameter values (IRCC fractions, the SKR operating
point, BLER thresholds), numeric defaults used by the decoders and the
Monte-Carlo harness, and the error codes carried by every raised exception.
"""

import math
from typing import Tuple

# Dimensions for which an orthogonal mapping family exists (R, R^2, R^4, R^8)
SUPPORTED_DIMENSIONS: Tuple[int, ...] = (1, 2, 4, 8)

# LLR handling
LLR_CLAMP = 30.0  # |L| bound before tanh/atanh in the check update
LLR_SATURATION = 30.0  # magnitude emitted for noiseless observations
APRIORI_LLR_LIMIT = 50.0  # magnitude used for "perfect" a-priori (I_A = 1)

# LDPC defaults
LDPC_DEFAULT_MAX_ITER = 50  # maximum BP iterations
LDPC_DEFAULT_DV = 3
LDPC_DEFAULT_DC = 6
PEG_SEARCH_DEPTH = 3  # check levels explored around a variable node
PEG_MAX_ATTEMPTS = 500  # restarts before a degree pair is declared infeasible

# Convolutional code (K = 7, industry-standard generators, octal)
CC_CONSTRAINT_LENGTH = 7
CC_GENERATORS: Tuple[int, int] = (0o171, 0o133)

# IRCC component family
IRCC_COMPONENTS = 17
IRCC_RATES: Tuple[float, ...] = tuple(round(0.1 + 0.05 * i, 2) for i in range(17))
IRCC_MOTHER_MEMORY = 4
IRCC_MOTHER_FEEDBACK = 0o31
IRCC_MOTHER_PARITIES: Tuple[int, ...] = (0o27, 0o35, 0o33)
IRCC_DEFAULT_ITERATIONS = 30  # inner/outer pairs
IRCC_DEFAULT_INTERLEAVER_SEED = 20_250_101

# Reference IRCC fractions, summing to 1 with an overall rate of 0.5
REFERENCE_IRCC_FRACTIONS: Tuple[float, ...] = (
    0.0120603, 0.0, 0.0, 0.0, 0.0, 0.0,
    0.605992, 0.0780007, 0.0, 0.0, 0.0,
    0.0672488, 0.177274, 0.0, 0.0, 0.0,
    0.0594503,
)  # fmt: skip

# EXIT measurement
EXIT_SAMPLES = 200_000
EXIT_GRID_STEP = 0.05
MI_MIN_SAMPLES = 10_000  # below this the histogram estimator is flagged
MI_HISTOGRAM_BINS = 100

# SKR operating point
DEFAULT_XI_CH = 0.002  # excess noise, shot-noise units
DEFAULT_ETA = 0.98  # homodyne detector efficiency
DEFAULT_V_EL = 0.01  # electronic noise, shot-noise units
DEFAULT_ALPHA_FIBER = 0.2  # dB/km
DEFAULT_GAMMA = 0.5  # key-extraction fraction
DEFAULT_EPSILON = 1e-10  # security parameter
DEFAULT_N_PRIVACY = 10**12  # privacy-amplification block size
FINITE_SIZE_VALIDITY = 10**4  # offset formula holds above this block size
DEFAULT_CODE_RATE = 0.5

# Reference BLER = 0.1 thresholds (dB) and reconciliation efficiencies
REFERENCE_THRESHOLDS_DB = {
    "ldpc": 1.31,
    "cc": 4.4,
    "ircc": 0.9,
    "ircc-1e5": 0.7,
}
REFERENCE_EFFICIENCIES = {
    "ldpc": 0.8104,
    "cc": 0.5240,
    "ircc": 0.8641,
    "ircc-1e5": 0.8921,
}

# Monte-Carlo harness
DEFAULT_MIN_BLOCK_ERRORS = 100
DEFAULT_MAX_BLOCKS = 1_000_000
DEFAULT_BATCH_SIZE = 32  # trials per batch; fixed so results ignore thread count
DEFAULT_BLER_TARGET = 0.1

# DCMC capacity
DCMC_SAMPLES = 1_000_000
DCMC_SEED = 7

# Output schemas
BLER_COLUMNS: Tuple[str, ...] = (
    "snr_db",
    "blocks_run",
    "block_errors",
    "bler",
    "bler_ci95",
    "ber",
    "seconds",
)
SKR_COLUMNS: Tuple[str, ...] = (
    "L_km",
    "T",
    "xi_total",
    "V_A",
    "I_AB",
    "chi_BE",
    "K_f",
    "PLOB",
)
EXIT_COLUMNS: Tuple[str, ...] = ("curve", "ia", "ie")

# CLI exit codes
EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3

# Error codes carried by ReconciliationError subclasses
ERROR_CODE_PARAMETER = "PARAMETER_ERROR"
ERROR_CODE_DEGENERATE_SEGMENT = "DEGENERATE_SEGMENT"
ERROR_CODE_UNSUPPORTED_DIMENSION = "UNSUPPORTED_DIMENSION"
ERROR_CODE_ALIST_PARSE = "ALIST_PARSE_ERROR"
ERROR_CODE_ENCODING_SETUP = "ENCODING_SETUP_ERROR"
ERROR_CODE_PROFILE = "PROFILE_ERROR"
ERROR_CODE_DOMAIN = "DOMAIN_ERROR"
ERROR_CODE_DEGENERATE_STATE = "DEGENERATE_STATE"
ERROR_CODE_SEARCH = "SEARCH_ERROR"
ERROR_CODE_THRESHOLD = "THRESHOLD_NOT_BRACKETED"
ERROR_CODE_CONFIGURATION = "CONFIGURATION_ERROR"

# Error messages
ERROR_MSG_NON_POSITIVE_SNR = "SNR must be positive (linear scale)"
ERROR_MSG_ZERO_NOISE = (
    "Noise variance is zero; use soft_observation for noiseless samples"
)
ERROR_MSG_ZERO_NORM = "Segment has zero norm; the random source produced a null draw"
ERROR_MSG_RANK_DEFICIENT = "Parity-check matrix is rank deficient"


def db_to_linear(value_db: float) -> float:
    """
    Convert a decibel value to a linear power ratio.

    Args:
        value_db: Value in dB (may be +inf)

    Returns:
        Linear ratio 10^(value_db/10)
    """
    if math.isinf(value_db):
        return math.inf if value_db > 0 else 0.0
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """
    Convert a linear power ratio to decibels.

    Args:
        value: Linear ratio (> 0)

    Returns:
        Value in dB
    """
    if math.isinf(value):
        return math.inf
    return 10.0 * math.log10(value)
