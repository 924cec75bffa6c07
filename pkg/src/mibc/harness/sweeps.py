"""Parameter sweeps built on the BER engine."""

from dataclasses import dataclass, field
import logging
import math

import numpy as np

from ..coils import Pose
from ..media import EMLinkSpec, mutual_inductance_cross, propagation_efficiency_em, \
    propagation_efficiency_mi
from .engine import POINT_ERRORS, BERCurve, build_channel, executor_for, make_plan, run_point

log = logging.getLogger(__name__)


@dataclass
class EfficiencyCurve:
    variable: str
    unit: str
    grid: np.ndarray
    efficiency: np.ndarray
    label: str = ""
    seed: int = 0
    trials: int = 0
    skipped: np.ndarray = None
    messages: list = field(default_factory=list)
    value_name = "efficiency"

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.efficiency = np.asarray(self.efficiency, dtype=float)
        if self.skipped is None:
            self.skipped = np.zeros(self.grid.size, dtype=bool)
        if self.efficiency.size != self.grid.size:
            raise ValueError("curve arrays must have equal length")

    @property
    def values(self):
        return self.efficiency

    @property
    def ci_halfwidth(self):
        return np.zeros(self.grid.size)


def _sweep(config, grid, variable, unit, label, key, point, threads):
    """Run one BER curve; ``point(value)`` returns ``(channel, plan kwargs)``."""
    n = len(grid)
    ber = np.full(n, np.nan)
    errors = np.zeros(n, dtype=np.int64)
    bits = np.zeros(n, dtype=np.int64)
    skipped = np.zeros(n, dtype=bool)
    messages = []
    executor = executor_for(threads)
    try:
        for j, value in enumerate(grid):
            try:
                channel, kwargs = point(value)
                plan = make_plan(config, channel, **kwargs)
                res = run_point(plan, config.trials, config.rng_seed, tuple(key) + (j,),
                                config.block_size, executor)
            except POINT_ERRORS as exc:
                skipped[j] = True
                messages.append(f"{variable}={value!r}: {type(exc).__name__}: {exc}")
                log.warning("skipped %s", messages[-1])
                continue
            errors[j] = res.bit_errors
            bits[j] = res.bits
            ber[j] = res.bit_errors / res.bits
    finally:
        if executor is not None:
            executor.shutdown()
    return BERCurve(variable, unit, grid, ber, errors, bits, config.trials, config.rng_seed,
                    label, skipped, messages)


def run_ber_vs_snr(config, snr_grid_db=None, depths=None, threads=1):
    """One curve per depth; the beamformer targets each SNR directly."""
    snr_grid_db = config.sweeps.snr_db if snr_grid_db is None else snr_grid_db
    depths = config.sweeps.depths if depths is None else depths
    curves = []
    for c, depth in enumerate(depths):
        cfg = config.with_depth(depth)
        channel = build_channel(cfg)
        curves.append(_sweep(cfg, snr_grid_db, "snr_db", "dB", f"depth={depth:g}m",
                             (0, c), lambda v: (channel, {"target_snr_db": float(v)}),
                             threads))
    return curves


def run_ber_vs_conductivity(config, sigma_grid=None, depth=None, threads=1):
    """Fixed data power ``config.data_power``; only the soil loss changes."""
    sigma_grid = config.sweeps.conductivities if sigma_grid is None else sigma_grid
    depth = config.sweeps.conductivity_depth if depth is None else depth
    cfg = config.with_depth(depth)

    def point(sigma):
        return build_channel(cfg.with_conductivity(sigma)), {"data_power": cfg.data_power}

    return _sweep(cfg, sigma_grid, "conductivity", "S/m", f"depth={depth:g}m", (1, 0),
                  point, threads)


def run_ber_vs_estimation_power(config, ph_grid=None, sigma_set=None, target_snr_db=None,
                                threads=1):
    """One curve per conductivity; estimates at each ``P_h`` drive the beamformer."""
    ph_grid = config.sweeps.estimation_powers if ph_grid is None else ph_grid
    sigma_set = config.sweeps.estimation_conductivities if sigma_set is None else sigma_set
    snr = config.sweeps.estimation_target_snr_db if target_snr_db is None else target_snr_db
    curves = []
    for c, sigma in enumerate(sigma_set):
        cfg = config.with_conductivity(sigma)
        channel = build_channel(cfg)
        curves.append(_sweep(cfg, ph_grid, "estimation_power", "W", f"sigma={sigma:g}S/m",
                             (2, c),
                             lambda v: (channel, {"target_snr_db": snr,
                                                  "estimation_power": float(v)}),
                             threads))
    return curves


def efficiency_pair(config, sigma):
    """Un-normalised ``(eta_mi, eta_em)`` with the sensor right below a reader coil."""
    cfg = config.with_conductivity(sigma)
    scenario = cfg.scenario()
    depth = cfg.sweeps.efficiency_depth
    tx = cfg.reader.transmit_coil.build(cfg.omega)
    sensor, _ = cfg.sensor_coil()
    m = mutual_inductance_cross(tx, sensor, Pose((0.0, 0.0, -depth)), scenario)
    eta_mi = propagation_efficiency_mi(m, sensor.resistance, cfg.omega)
    em = cfg.em_link
    link = EMLinkSpec(cfg.interface_depth, depth - cfg.interface_depth, em.gain_air,
                      em.gain_soil, em.frequency)
    return eta_mi, propagation_efficiency_em(link, scenario)


def run_efficiency_vs_conductivity(config, sigma_grid=None, reference=None):
    """Normalised MI and EM efficiencies; both equal 1 at ``reference``."""
    sigma_grid = config.sweeps.efficiency_conductivities if sigma_grid is None else sigma_grid
    reference = config.sweeps.reference_conductivity if reference is None else reference
    ref_mi, ref_em = efficiency_pair(config, reference)
    vals = np.array([efficiency_pair(config, s) for s in sigma_grid]).reshape(-1, 2)
    if not (ref_mi > 0 and ref_em > 0 and math.isfinite(ref_mi) and math.isfinite(ref_em)):
        raise ArithmeticError("reference efficiency is not positive")
    return (EfficiencyCurve("conductivity", "S/m", sigma_grid, vals[:, 0] / ref_mi, "MI"),
            EfficiencyCurve("conductivity", "S/m", sigma_grid, vals[:, 1] / ref_em, "EM"))
