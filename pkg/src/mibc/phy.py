"""DPSK impedance modulation and noncoherent differential detection.

The sensor switches between ``m`` impedances ``z_s e^{j theta_p}``,
``theta_p = 2 pi (p - 1) / m``; the receiver sees ``g * y + n`` where ``y`` is
the admittance.  Data rides on the phase step between consecutive intervals,
labelled with a Gray code.  Symbol indices are 1-based in the public API to
match ``p = 1..m``; the vectorised helpers work 0-based.
"""

from dataclasses import dataclass
import math

import numpy as np

from ._backend import kernels


@dataclass(frozen=True)
class SymbolSet:
    base_impedance: complex
    order: int = 4

    def __post_init__(self):
        m = self.order
        if m < 2 or m & (m - 1):
            raise ValueError("order must be a power of two >= 2")
        if self.base_impedance == 0:
            raise ValueError("base impedance must be non-zero")

    @property
    def phases(self):
        return 2.0 * np.pi * np.arange(self.order) / self.order

    @property
    def impedances(self):
        return self.base_impedance * np.exp(1j * self.phases)

    @property
    def admittances(self):
        return 1.0 / self.impedances

    @property
    def bits_per_symbol(self):
        return int(math.log2(self.order))

    @property
    def admittance_magnitude(self):
        return 1.0 / abs(self.base_impedance)


@dataclass(frozen=True)
class DifferentialFrame:
    r1: complex
    r2: complex


@dataclass(frozen=True)
class BackscatterGain:
    g: complex

    @property
    def magnitude(self):
        return abs(self.g)

    @property
    def phase(self):
        return math.atan2(self.g.imag, self.g.real)


def gray_encode(index):
    index = np.asarray(index)
    return index ^ (index >> 1)


def gray_decode(code):
    code = np.array(code, dtype=np.int64)
    out = code.copy()
    shift = code >> 1
    while np.any(shift):
        out ^= shift
        shift >>= 1
    return out


def backscatter_gain(tx_currents, m_ts, m_sr, omega):
    """``g = -sum_k w^2 i_k m_ks m_sr``."""
    tx_currents = np.asarray(tx_currents, dtype=np.complex128)
    m_ts = np.asarray(m_ts, dtype=np.complex128)
    if tx_currents.shape != m_ts.shape:
        raise ValueError("currents and couplings must have matching lengths")
    return BackscatterGain(complex(-omega ** 2 * np.sum(tx_currents * m_ts) * m_sr))


def transmit_frame(symbol_index, symbols, gain, noise=(0j, 0j), reference=1):
    """Received pair for data symbol ``symbol_index`` (1-based).

    The reference interval uses admittance ``reference``; the data interval
    is that admittance rotated by the symbol's differential phase.
    """
    m = symbols.order
    if not 1 <= symbol_index <= m or not 1 <= reference <= m:
        raise ValueError("symbol indices must lie in 1..m")
    g = gain.g if isinstance(gain, BackscatterGain) else complex(gain)
    t1 = symbols.admittances[reference - 1]
    t2 = t1 * np.exp(1j * symbols.phases[symbol_index - 1])
    return DifferentialFrame(complex(g * t1 + noise[0]), complex(g * t2 + noise[1]))


def detect(frame, symbols):
    """``argmin_p |angle(r2) - angle(r1) - phi_p|`` on the wrapped circle."""
    if frame.r1 == 0:
        raise ValueError("reference interval is exactly zero; phase undefined")
    return int(kernels.dpsk_decide(np.array([frame.r1]), np.array([frame.r2]),
                                   symbols.order)[0]) + 1


def detect_many(r_ref, r_data, order):
    """Vectorised detector; returns 0-based indices."""
    return kernels.dpsk_decide(np.asarray(r_ref), np.asarray(r_data), order)


def count_errors(sent, detected, order):
    """``(symbol_errors, bit_errors)`` for 0-based symbol arrays, Gray-labelled."""
    return kernels.count_errors(np.asarray(sent), np.asarray(detected), order)


def differential_states(data, order, start=0):
    """Impedance-state indices for a chained packet.

    ``data`` has shape ``(..., n)`` of 0-based differential symbols; the result
    has shape ``(..., n + 1)`` beginning with the pilot state ``start``.
    The admittance of state ``s`` is ``y_0 e^{-j theta_s}``, so a data step
    ``d`` (phase ``+theta_d`` on the admittance) moves the state by ``-d``.
    """
    data = np.asarray(data, dtype=np.int64)
    steps = np.concatenate([np.full(data.shape[:-1] + (1,), start, dtype=np.int64),
                            -data], axis=-1)
    return np.mod(np.cumsum(steps, axis=-1), order)


def snr(gain, symbols, noise_variance):
    """``|g y|^2 / sigma^2`` (the same for every symbol of the set)."""
    if not noise_variance > 0:
        raise ValueError("noise variance must be positive")
    g = gain.g if isinstance(gain, BackscatterGain) else complex(gain)
    return abs(g * symbols.admittance_magnitude) ** 2 / noise_variance


def data_rate(bandwidth, order):
    """``R = W log2 m`` (bit/s)."""
    if order < 2 or order & (order - 1):
        raise ValueError("order must be a power of two")
    return bandwidth * math.log2(order)
