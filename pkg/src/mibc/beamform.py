"""Minimum-power transmit currents under an SNR constraint.

Problem::

    min_i  i^H B i     subject to   i^H C1 i >= T sigma^2

with ``B = (Z_Nt + Z_Nt^H) / 4`` (real power ``Re(i^H Z i) / 2``) and
``C1 = conj(m) m^T |w^2 m_sr y|^2``.  ``C1`` is rank one, ``C1 = a a^H``, so
the semidefinite relaxation is tight and its solution is
``i* = sqrt(T sigma^2) B^{-1} a / (a^H B^{-1} a)``.
"""

from dataclasses import dataclass

import numpy as np


class DecoupledSensorError(ValueError):
    """``C1`` vanishes: no transmit current reaches the sensor."""


@dataclass(frozen=True)
class TxStrategy:
    currents: np.ndarray
    transmit_power: float
    predicted_snr: float


def power_matrix(z_nt):
    """Hermitian matrix ``B`` with ``i^H B i`` equal to the dissipated power."""
    z = np.asarray(z_nt, dtype=np.complex128)
    return 0.25 * (z + z.conj().T)


def transmit_power(z_nt, currents):
    i = np.asarray(currents, dtype=np.complex128)
    return float(np.real(i.conj() @ power_matrix(z_nt) @ i))


def build_quadratic_forms(m_hat_ts, m_hat_sr, symbols, omega):
    """``C1 = conj(m) m^T |w^2 m_sr y|^2`` so that ``SNR = i^H C1 i / sigma^2``."""
    m = np.asarray(m_hat_ts, dtype=np.complex128)
    scale = abs(omega ** 2 * m_hat_sr * symbols.admittance_magnitude) ** 2
    return scale * np.outer(m.conj(), m)


def _coupling_vector(c1):
    c1 = np.asarray(c1, dtype=np.complex128)
    w, v = np.linalg.eigh(0.5 * (c1 + c1.conj().T))
    lam = w[-1]
    if not lam > 0:
        raise DecoupledSensorError("C1 is zero; sensor is decoupled")
    return np.sqrt(lam) * v[:, -1]


def _direction(z_nt, c1):
    b = power_matrix(z_nt)
    try:
        np.linalg.cholesky(b)
    except np.linalg.LinAlgError as exc:
        raise ValueError("Hermitian part of Z_Nt must be positive definite") from exc
    a = _coupling_vector(c1)
    u = np.linalg.solve(b, a)
    return u, float(np.real(a.conj() @ u))


def optimal_currents(z_nt, c1, target_snr, noise_variance):
    """Closed-form minimum-power currents meeting ``target_snr`` with equality."""
    if not target_snr > 0:
        raise ValueError("target SNR must be positive")
    u, q = _direction(z_nt, c1)
    t = target_snr * noise_variance
    i = np.sqrt(t) / q * u
    return TxStrategy(i, t / q, target_snr)


def max_snr_currents(z_nt, c1, power, noise_variance):
    """Same direction, scaled to dissipate ``power``: the max-SNR solution."""
    if power < 0:
        raise ValueError("power must be non-negative")
    u, q = _direction(z_nt, c1)
    i = np.sqrt(power / q) * u
    return TxStrategy(i, float(power), power * q / noise_variance)


def achieved_snr(c1, currents, noise_variance):
    i = np.asarray(currents, dtype=np.complex128)
    return float(np.real(i.conj() @ np.asarray(c1) @ i)) / noise_variance
