"""Monte Carlo BER engine.

One trial is one independent pass through the protocol: a fresh phase-2
noise draw gives ``m_hat_sr``, the beamformer picks currents from the
estimates, and a differential packet (pilot plus ``symbols_per_trial`` data
symbols) is sent over the true channel with receiver noise ``CN(0, sigma^2)``.

Trials are processed in fixed-size blocks.  Block ``b`` of point ``p`` draws
from ``Philox(SeedSequence(seed, spawn_key=(*p, b)))``, so results depend only
on the seed and never on how blocks are scheduled across threads.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math

import numpy as np

from .. import beamform, estimation, phy
from ..coils import SingularCircuitError, assemble_impedance_matrix
from ..numerics import QuadratureError

# failures that skip a grid point instead of aborting the sweep
POINT_ERRORS = (beamform.DecoupledSensorError, estimation.DegenerateExcitationError,
                QuadratureError, SingularCircuitError, np.linalg.LinAlgError,
                ArithmeticError)

WILSON_Z = 1.959963984540054


@dataclass(frozen=True)
class Channel:
    z: object
    m_ts: np.ndarray
    m_sr: complex
    symbols: phy.SymbolSet
    omega: float

    @property
    def z_nt(self):
        return self.z.transmit_block


@dataclass(frozen=True)
class TrialResult:
    """Aggregate of a block (or point) of trials."""
    m_hat_ts: np.ndarray
    m_hat_sr: np.ndarray
    achieved_snr: np.ndarray
    symbol_errors: int
    bit_errors: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.bit_errors <= self.bits:
            raise ValueError("bit errors exceed bits sent")


@dataclass
class BERCurve:
    variable: str
    unit: str
    grid: np.ndarray
    ber: np.ndarray
    bit_errors: np.ndarray
    bits: np.ndarray
    trials: int
    seed: int
    label: str = ""
    skipped: np.ndarray = None
    messages: list = field(default_factory=list)
    value_name = "ber"

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.ber = np.asarray(self.ber, dtype=float)
        n = self.grid.size
        if self.skipped is None:
            self.skipped = np.zeros(n, dtype=bool)
        if not (self.ber.size == n and len(self.bit_errors) == n and len(self.bits) == n
                and self.skipped.size == n):
            raise ValueError("curve arrays must have equal length")
        ok = ~self.skipped
        if np.any((self.ber[ok] < 0) | (self.ber[ok] > 1)):
            raise ValueError("BER outside [0, 1]")
        if np.any(~np.isnan(self.ber[self.skipped])):
            raise ValueError("skipped points must carry NaN")

    @property
    def values(self):
        return self.ber

    @property
    def ci_halfwidth(self):
        return wilson_halfwidth(self.bit_errors, self.bits)


def wilson_halfwidth(k, n, z=WILSON_Z):
    """Half-width of the Wilson score interval (NaN where ``n == 0``)."""
    k = np.asarray(k, dtype=float)
    n = np.asarray(n, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        p = k / n
        return z * np.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n)


def build_channel(config):
    scenario = config.scenario()
    sensor = config.sensor_coil()
    z = assemble_impedance_matrix(config.transmit_coils(), config.receive_coil(), sensor,
                                  scenario)
    s = z.sensor_index
    jw = 1j * config.omega
    m_ts = z.matrix[:z.n_transmit, s] / jw
    m_sr = complex(z.matrix[z.receiver_index, s] / jw)
    return Channel(z, m_ts, m_sr, config.symbol_set(), config.omega)


@dataclass(frozen=True)
class PointPlan:
    """Everything a block needs; shared read-only between threads."""
    channel: Channel
    noise_std: float
    estimation_power: float
    target_snr: float | None
    data_power: float | None
    symbols_per_trial: int
    z_sprd: complex
    resistance: float


def _complex_normal(rng, std, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * (std / math.sqrt(2))


def _estimate(plan, rng, n):
    ch = plan.channel
    noise = _complex_normal(rng, plan.noise_std, n)
    return estimation.simulate_estimation(ch.z_nt, ch.m_ts, ch.m_sr, plan.z_sprd, ch.omega,
                                          plan.estimation_power, plan.resistance,
                                          noise, plan.noise_std ** 2)


def _currents(plan, est):
    """Per-trial transmit currents, shape ``(n, n_t)``."""
    ch = plan.channel
    var = plan.noise_std ** 2
    m = est.m_hat_ts
    c1_unit = np.outer(m.conj(), m)
    y = ch.symbols.admittance_magnitude
    s = np.abs(ch.omega ** 2 * np.asarray(est.m_hat_sr) * y)
    if plan.target_snr is not None:
        # C1 scales with |w^2 m_sr y|^2, so the optimum scales with 1/|.|
        unit = beamform.optimal_currents(ch.z_nt, c1_unit, plan.target_snr, var).currents
        if np.any(s == 0):
            raise beamform.DecoupledSensorError("estimated sensor-receiver channel is zero")
        return unit[None, :] / s[:, None]
    # at fixed power the optimal direction ignores m_hat_sr
    fixed = beamform.max_snr_currents(ch.z_nt, c1_unit, plan.data_power, var).currents
    return np.broadcast_to(fixed, (s.size, fixed.size))


def run_block(plan, rng, n):
    ch = plan.channel
    m = ch.symbols.order
    k = plan.symbols_per_trial
    est = _estimate(plan, rng, n)
    currents = _currents(plan, est)
    g = -ch.omega ** 2 * (currents @ ch.m_ts) * ch.m_sr
    data = rng.integers(0, m, size=(n, k))
    states = phy.differential_states(data, m)
    y = ch.symbols.admittances
    r = g[:, None] * y[states] + _complex_normal(rng, plan.noise_std, (n, k + 1))
    detected = phy.detect_many(r[:, :-1].ravel(), r[:, 1:].ravel(), m)
    sym_err, bit_err = phy.count_errors(data.ravel(), detected, m)
    snr = np.abs(g * ch.symbols.admittance_magnitude) ** 2 / plan.noise_std ** 2
    return TrialResult(est.m_hat_ts, np.atleast_1d(est.m_hat_sr), snr, int(sym_err),
                       int(bit_err), n * k * ch.symbols.bits_per_symbol)


def _block_rng(seed, key, block):
    ss = np.random.SeedSequence(seed, spawn_key=tuple(key) + (block,))
    return np.random.Generator(np.random.Philox(ss))


def run_point(plan, trials, seed, key, block_size=2048, executor=None):
    sizes = [min(block_size, trials - b) for b in range(0, trials, block_size)]

    def work(b):
        return run_block(plan, _block_rng(seed, key, b), sizes[b])

    idx = range(len(sizes))
    results = list(executor.map(work, idx)) if executor else [work(b) for b in idx]
    return TrialResult(
        results[0].m_hat_ts,
        np.concatenate([r.m_hat_sr for r in results]),
        np.concatenate([r.achieved_snr for r in results]),
        sum(r.symbol_errors for r in results),
        sum(r.bit_errors for r in results),
        sum(r.bits for r in results),
    )


def make_plan(config, channel, target_snr_db=None, data_power=None, estimation_power=None):
    if (target_snr_db is None) == (data_power is None):
        raise ValueError("give exactly one of target_snr_db and data_power")
    ph = config.estimation_power if estimation_power is None else estimation_power
    z_s = channel.symbols.base_impedance
    return PointPlan(channel, config.noise_std, ph,
                     None if target_snr_db is None else 10.0 ** (target_snr_db / 10.0),
                     data_power, config.symbols_per_trial, z_s,
                     config.reader.transmit_coil.resistance)


def executor_for(threads):
    if threads is None or threads <= 1:
        return None
    return ThreadPoolExecutor(max_workers=threads)
