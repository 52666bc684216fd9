"""
Secret-key rate of Gaussian-modulated CV-QKD with reverse reconciliation
under collective attacks, homodyne detection and a trusted detector.

All variances are in shot-noise units. K_f is in bits per channel use:

    K_f = gamma (1 - P_B) [beta I_AB - chi_BE - Delta(N_privacy)]
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import special

from cvqkd.core.config import SkrParameters
from cvqkd.core.constants import FINITE_SIZE_VALIDITY, SKR_COLUMNS
from cvqkd.core.errors import DegenerateStateError, DomainError, ThresholdNotBracketedError
from cvqkd.core.models import CovarianceSummary, SweepTable

logger = logging.getLogger(__name__)

_EIGEN_TOLERANCE = 1e-9


def path_loss(alpha_fiber: float, L: float) -> float:
    """Fiber transmittance T = 10^(-alpha L / 10)."""
    if L < 0:
        raise DomainError(f"distance must be non-negative, got {L}")
    return 10.0 ** (-alpha_fiber * L / 10.0)


def total_noise(T: float, xi_ch: float, eta: float, v_el: float) -> float:
    """
    Total noise referred to the channel input.

    xi_line = 1/T - 1 + xi_ch, xi_hom = (1 + v_el)/eta - 1,
    xi_total = xi_line + xi_hom / T.

    Raises:
        DomainError: T or eta outside (0, 1]
    """
    if not 0.0 < T <= 1.0:
        raise DomainError(f"transmittance must lie in (0, 1], got {T}")
    if not 0.0 < eta <= 1.0:
        raise DomainError(f"detector efficiency must lie in (0, 1], got {eta}")
    xi_line = 1.0 / T - 1.0 + xi_ch
    xi_hom = (1.0 + v_el) / eta - 1.0
    return xi_line + xi_hom / T


def mutual_information(V_A: float, xi_total: float) -> float:
    """I_AB = 1/2 log2((V_A + xi_total) / (1 + xi_total))."""
    if V_A < 1.0:
        raise DomainError(f"V_A must be at least 1, got {V_A}")
    return 0.5 * math.log2((V_A + xi_total) / (1.0 + xi_total))


def reconciliation_efficiency(R: float, snr: float) -> float:
    """beta = R / (1/2 log2(1 + snr)) for linear snr."""
    if not snr > 0:
        raise DomainError(f"SNR must be positive, got {snr}")
    return R / (0.5 * math.log2(1.0 + snr))


def threshold_snr_for_beta(beta: float, R: float) -> float:
    """Linear SNR at which a rate-R code reaches efficiency beta."""
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")
    return 2.0 ** (2.0 * R / beta) - 1.0


def covariance_summary(V_A: float, T: float, eta: float, xi_total: float) -> CovarianceSummary:
    """
    Covariance entries and symplectic eigenvalues of the Alice-Bob state.

    a = V_A, b = eta T (V_A + xi_total), c^2 = eta T (V_A^2 - 1).
    nu1,2^2 = (Delta +- sqrt(Delta^2 - 4 D^2)) / 2 with Delta = a^2 + b^2 - 2c^2
    and D = ab - c^2; nu2 uses the product form D^2 / nu1^2. nu3 is the
    eigenvalue after Bob's homodyne measurement, sqrt(a (a - c^2 / b)).

    Raises:
        DegenerateStateError: b = 0
        DomainError: An eigenvalue below 1 (unphysical parameters)
    """
    a = V_A
    b = eta * T * (V_A + xi_total)
    if b <= 0:
        raise DegenerateStateError("covariance entry b vanishes", b=b)
    c_sq = eta * T * (V_A**2 - 1.0)
    delta = a**2 + b**2 - 2.0 * c_sq
    dee = a * b - c_sq
    root = math.sqrt(max(delta**2 - 4.0 * dee**2, 0.0))
    nu1 = math.sqrt((delta + root) / 2.0)
    nu2 = math.sqrt(2.0 * dee**2 / (delta + root))
    nu3 = math.sqrt(a * (a - c_sq / b))
    for name, nu in (("nu1", nu1), ("nu2", nu2), ("nu3", nu3)):
        if nu < 1.0 - _EIGEN_TOLERANCE:
            raise DomainError(f"unphysical state: {name} = {nu} < 1", **{name: nu})
    return CovarianceSummary(
        a=a, b=b, c=math.sqrt(c_sq), delta=delta, dee=dee, nu1=nu1, nu2=nu2, nu3=nu3
    )


def _symplectic_spectrum(V: np.ndarray) -> np.ndarray:
    modes = V.shape[0] // 2
    omega = np.kron(np.eye(modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    spectrum = np.sort(np.abs(np.linalg.eigvals(1j * omega @ V)))[::-1]
    return spectrum[::2]


def holevo_eigensolver(
    V_A: float, T: float, eta: float, xi_total: float
) -> Tuple[float, float, float]:
    """
    (nu1, nu2, nu3) from dense eigenvalues of i Omega V.

    Independent of the closed forms in ``covariance_summary``; used to check
    them.
    """
    a = V_A
    b = eta * T * (V_A + xi_total)
    c = math.sqrt(eta * T * (V_A**2 - 1.0))
    z = np.diag([1.0, -1.0])
    V = np.block([[a * np.eye(2), c * z], [c * z, b * np.eye(2)]])
    nu1, nu2 = _symplectic_spectrum(V)
    conditional = np.array([[a - c**2 / b, 0.0], [0.0, a]])
    (nu3,) = _symplectic_spectrum(conditional)
    return float(nu1), float(nu2), float(nu3)


def g_function(nu: float) -> float:
    """
    Von Neumann entropy of a thermal mode with symplectic eigenvalue nu.

    G(1) = 0 by continuous extension.

    Raises:
        DomainError: nu < 1 beyond rounding
    """
    if nu < 1.0 - _EIGEN_TOLERANCE:
        raise DomainError(f"G is defined for nu >= 1, got {nu}")
    nu = max(nu, 1.0)
    plus, minus = (nu + 1.0) / 2.0, (nu - 1.0) / 2.0
    return float(special.xlogy(plus, plus) - special.xlogy(minus, minus)) / math.log(2.0)


def holevo(V_A: float, T: float, eta: float, xi_total: float) -> float:
    """chi_BE = G(nu1) + G(nu2) - G(nu3)."""
    cm = covariance_summary(V_A, T, eta, xi_total)
    return g_function(cm.nu1) + g_function(cm.nu2) - g_function(cm.nu3)


def finite_size_offset(N_privacy: float, epsilon: float) -> float:
    """Delta = 7 sqrt(log2(2/epsilon) / N); warns where the formula is not valid."""
    if N_privacy <= FINITE_SIZE_VALIDITY:
        logger.warning(
            f"Finite-size offset used with N = {N_privacy} <= {FINITE_SIZE_VALIDITY}"
        )
    return 7.0 * math.sqrt(math.log2(2.0 / epsilon) / N_privacy)


def skr(params: SkrParameters, I_AB: float, chi_BE: float) -> float:
    """K_f from precomputed I_AB and chi_BE; may be negative."""
    offset = finite_size_offset(params.N_privacy, params.epsilon)
    return params.gamma * (1.0 - params.P_B) * (params.beta * I_AB - chi_BE - offset)


def solve_va_for_snr(target_snr: float, L: float, params: SkrParameters) -> float:
    """V_A that keeps the channel SNR (V_A - 1)/(1 + xi_total) at ``target_snr``."""
    if not target_snr > 0:
        raise DomainError(f"target SNR must be positive, got {target_snr}")
    T = path_loss(params.alpha_fiber, L)
    xi = total_noise(T, params.xi_ch, params.eta, params.v_el)
    return 1.0 + target_snr * (1.0 + xi)


def plob_bound(T: float) -> float:
    """Repeaterless secret-key capacity -log2(1 - T)."""
    if T >= 1.0:
        return math.inf
    return -math.log2(1.0 - T)


def skr_vs_distance(
    params: SkrParameters,
    snr: float,
    beta: float,
    P_B: float,
    L_grid: Sequence[float],
) -> SweepTable:
    """
    K_f and the PLOB bound along the distance grid at a fixed channel SNR.

    Args:
        params: Protocol scalars (beta, P_B and L are overridden)
        snr: Linear SNR held fixed by adjusting V_A
        beta: Reconciliation efficiency
        P_B: Block error rate at the operating point
        L_grid: Ascending distances in km

    Returns:
        SweepTable with SKR_COLUMNS
    """
    grid = [float(L) for L in L_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("L_grid must be strictly ascending")
    point = params.model_copy(update={"beta": beta, "P_B": P_B})
    rows = []
    for L in grid:
        T = path_loss(point.alpha_fiber, L)
        xi = total_noise(T, point.xi_ch, point.eta, point.v_el)
        V_A = 1.0 + snr * (1.0 + xi)
        I_AB = mutual_information(V_A, xi)
        chi = holevo(V_A, T, point.eta, xi)
        rows.append(
            {
                "L_km": L,
                "T": T,
                "xi_total": xi,
                "V_A": V_A,
                "I_AB": I_AB,
                "chi_BE": chi,
                "K_f": skr(point, I_AB, chi),
                "PLOB": plob_bound(T),
            }
        )
    metadata = {"beta": beta, "P_B": P_B, "snr": snr, "params": point.model_dump()}
    return SweepTable(columns=SKR_COLUMNS, rows=rows, metadata=metadata)


def max_secure_distance(table: SweepTable) -> float:
    """
    First zero crossing of K_f, linearly interpolated between grid points.

    Raises:
        ThresholdNotBracketedError: K_f never changes sign from positive
    """
    distances = table.column("L_km")
    rates = table.column("K_f")
    for i in range(1, len(rates)):
        if rates[i - 1] > 0 >= rates[i]:
            fraction = rates[i - 1] / (rates[i - 1] - rates[i])
            return float(distances[i - 1] + fraction * (distances[i] - distances[i - 1]))
    raise ThresholdNotBracketedError(
        "K_f does not cross zero on the distance grid",
        first=float(rates[0]) if len(rates) else None,
        last=float(rates[-1]) if len(rates) else None,
    )


def secure_distance_for(
    params: SkrParameters, beta: float, R: float, P_B: float, L_max: float, L_step: float
) -> Optional[float]:
    """Maximum secure distance at the SNR where a rate-R code has efficiency beta."""
    grid = np.arange(0.0, L_max + 0.5 * L_step, L_step)
    table = skr_vs_distance(params, threshold_snr_for_beta(beta, R), beta, P_B, grid)
    try:
        return max_secure_distance(table)
    except ThresholdNotBracketedError:
        return None
