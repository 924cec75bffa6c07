"""Three-phase channel estimation over the dyadic backscatter channel.

Phase 1: the reader drives its transmit coils with ``P_h`` split evenly; the
sensor records the induced voltage ``v_s`` while every transmit coil records
its own voltage and current.  Phase 2: the sensor presents the predefined
impedance ``z_sprd`` and the receiver measures ``v_r``.  Phase 3: the sensor
reports ``v_s`` (delivered error-free here), from which ``i_s = v_s / z_sprd``.
"""

from dataclasses import dataclass

import numpy as np


class DegenerateExcitationError(ValueError):
    """The excitation does not couple into the sensor (orientation null)."""


@dataclass(frozen=True)
class EstimationResult:
    m_hat_ts: np.ndarray
    m_hat_sr: complex
    beta: complex
    error_variance: float


def equal_power_currents(total_power, n_transmit, resistance):
    """In-phase currents with ``|i|^2 r / 2 = total_power / n_transmit`` each."""
    if total_power < 0:
        raise ValueError("power must be non-negative")
    amp = np.sqrt(2.0 * total_power / (n_transmit * resistance))
    return np.full(n_transmit, amp, dtype=np.complex128)


def phase1_sensor_voltage(tx_currents, m_ts, omega):
    """``v_s = -sum_k i_k j omega m_ks`` (sensor-side noise neglected)."""
    tx_currents = np.asarray(tx_currents, dtype=np.complex128)
    m_ts = np.asarray(m_ts, dtype=np.complex128)
    if tx_currents.shape != m_ts.shape:
        raise ValueError("currents and couplings must have matching lengths")
    return complex(-1j * omega * np.sum(tx_currents * m_ts))


def transmit_side_voltages(z_nt, tx_currents, m_ts, sensor_current, omega):
    """``v_Nt = Z_Nt i_Nt + j omega i_s m_ts`` as measured on the transmit coils."""
    return (np.asarray(z_nt) @ np.asarray(tx_currents, dtype=np.complex128)
            + 1j * omega * sensor_current * np.asarray(m_ts, dtype=np.complex128))


def phase2_receiver_voltage(tx_currents, m_ts, m_sr, z_sprd, omega, noise=0.0):
    """``v_r = -sum_k i_k w^2 m_ks m_sr / z_sprd + n_r``.

    ``noise`` may be an array, giving one receiver voltage per sample.
    """
    if z_sprd == 0:
        raise ZeroDivisionError("z_sprd must be non-zero")
    signal = -omega ** 2 * np.sum(np.asarray(tx_currents) * np.asarray(m_ts)) * m_sr / z_sprd
    out = signal + np.asarray(noise)
    return complex(out) if np.ndim(out) == 0 else out


def estimate_channels(v_nt, i_nt, z_nt, i_s, v_r, z_sprd, omega, noise_variance=0.0):
    """Recover ``m_ts`` and ``m_sr`` from phase 1-3 measurements.

    ``v_r`` may be an array of independent phase-2 measurements; ``m_hat_sr``
    is then an array as well.

    Raises
    ------
    DegenerateExcitationError
        If ``i_s`` vanishes or ``sum_k w^2 i_k m_hat_ks`` is zero.
    """
    if i_s == 0:
        raise DegenerateExcitationError("sensor current is zero")
    i_nt = np.asarray(i_nt, dtype=np.complex128)
    v_nt = np.asarray(v_nt, dtype=np.complex128)
    zi = np.asarray(z_nt) @ i_nt
    m_hat_ts = (v_nt - zi) / (1j * omega * i_s)
    denom = np.sum(omega ** 2 * i_nt * m_hat_ts)
    # rounding left over from v - Z i; a denominator below it is an orientation null
    eps = np.finfo(float).eps
    noise_floor = 64 * eps * np.sum(omega * np.abs(i_nt) * (np.abs(v_nt) + np.abs(zi))) / abs(i_s)
    if not abs(denom) > noise_floor:
        raise DegenerateExcitationError("transmit excitation is orthogonal to the channel")
    m_hat_sr = -np.asarray(v_r) * z_sprd / denom
    beta = complex(z_sprd / denom)
    if np.ndim(m_hat_sr) == 0:
        m_hat_sr = complex(m_hat_sr)
    return EstimationResult(m_hat_ts, m_hat_sr, beta, abs(beta) ** 2 * noise_variance)


def simulate_estimation(z_nt, m_ts, m_sr, z_sprd, omega, power, resistance,
                        noise=0.0, noise_variance=0.0):
    """Run phases 1-3 against known channels and return the estimates.

    The transmit-side measurements are noiseless; ``noise`` is the phase-2
    receiver noise (scalar or array of samples).
    """
    m_ts = np.asarray(m_ts, dtype=np.complex128)
    i_nt = equal_power_currents(power, m_ts.size, resistance)
    v_s = phase1_sensor_voltage(i_nt, m_ts, omega)
    i_s = v_s / z_sprd
    v_nt = transmit_side_voltages(z_nt, i_nt, m_ts, i_s, omega)
    v_r = phase2_receiver_voltage(i_nt, m_ts, m_sr, z_sprd, omega, noise)
    return estimate_channels(v_nt, i_nt, z_nt, i_s, v_r, z_sprd, omega, noise_variance)
