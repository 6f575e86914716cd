"""Independent oracles shared by the test modules.

Everything here is computed from first principles (stdlib math plus raw
numpy eigensolvers) so the expectations do not reuse the library's own
code paths.
"""

import math

import numpy as np


def g_direct(x: float) -> float:
    """(x+1) ln(x+1) - x ln x evaluated directly with stdlib math."""
    if x == 0:
        return 0.0
    return (x + 1.0) * math.log(x + 1.0) - x * math.log(x)


def raw_symplectic_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Distinct |eig(Omega @ V)| values computed with raw numpy, ascending."""
    n = matrix.shape[0] // 2
    omega = np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    mags = np.sort(np.abs(np.linalg.eigvals(omega @ matrix)))
    return mags[::2]


def two_mode_block_sym_eigs(f: float, g: float, d: float) -> tuple[float, float]:
    """Symplectic eigenvalues of [[f I, d Z], [d Z, g I]] from the 2x2-block determinant formula."""
    delta = f * f + g * g - 2.0 * d * d
    det = (f * g - d * d) ** 2
    disc = math.sqrt(max(delta * delta - 4.0 * det, 0.0))
    hi = math.sqrt((delta + disc) / 2.0)
    lo = math.sqrt((delta - disc) / 2.0)
    return hi, lo


def fc_entropy_thermal_bs(transmissivity: float, n_in: float, n_env: float) -> float:
    """Closed-form complementary-output entropy for a beam splitter with
    thermal input and thermal environment.

    The (F, C) covariance is [[f I, d Z], [d Z, nu_e I]] with
    f = (1-t) nu_a + t nu_e and d = sqrt(t) * sqrt(nu_e^2 - 1).
    """
    nu_a = 2.0 * n_in + 1.0
    nu_e = 2.0 * n_env + 1.0
    f = (1.0 - transmissivity) * nu_a + transmissivity * nu_e
    d = math.sqrt(transmissivity) * math.sqrt(nu_e * nu_e - 1.0)
    hi, lo = two_mode_block_sym_eigs(f, nu_e, d)
    return g_direct((hi - 1.0) / 2.0) + g_direct((lo - 1.0) / 2.0)


def fc_entropy_thermal_amp(gain: float, n_in: float, n_env: float) -> float:
    """Closed-form complementary-output entropy for the amplifier with
    thermal input and thermal environment (F block (k-1) nu_a + k nu_e,
    F-C correlation sqrt(k) sqrt(nu_e^2 - 1))."""
    nu_a = 2.0 * n_in + 1.0
    nu_e = 2.0 * n_env + 1.0
    f = (gain - 1.0) * nu_a + gain * nu_e
    d = math.sqrt(gain) * math.sqrt(nu_e * nu_e - 1.0)
    hi, lo = two_mode_block_sym_eigs(f, nu_e, d)
    return g_direct((hi - 1.0) / 2.0) + g_direct((lo - 1.0) / 2.0)
