"""Scenario configuration and its YAML schema.

All quantities are SI (metres, ohms, henries, farads, watts, hertz, S/m)
except ``noise_level_dbmv`` and the SNR values in dB.  Unknown keys anywhere
in the file are rejected.  See ``configs/reference.yaml`` for a complete example.
"""

from dataclasses import asdict, dataclass, field, fields, is_dataclass, replace
import math
import re
from pathlib import Path

import numpy as np
import yaml

from ..coils import CoilSpec, Pose, resonance_capacitance
from ..media import AIR, LayeredScenario, MediumSpec
from ..phy import SymbolSet


class ConfigError(ValueError):
    """Malformed or inconsistent scenario file."""


@dataclass(frozen=True)
class CoilConfig:
    radius: float = 0.02
    turns: int = 5
    wire_radius: float = 0.00145
    resistance: float = 0.13
    self_inductance: float = 1.69e-6
    # None: tune to resonance at the operating frequency
    capacitance: float | None = 81.51e-12

    def build(self, omega):
        c = self.capacitance
        if c is None:
            c = resonance_capacitance(self.self_inductance, omega)
        return CoilSpec(self.radius, self.turns, self.wire_radius, self.resistance,
                        self.self_inductance, c)


def _sensor_coil():
    return CoilConfig(radius=0.02, turns=2, wire_radius=0.00145, resistance=0.013,
                      self_inductance=0.1e-6, capacitance=None)


@dataclass(frozen=True)
class ReaderConfig:
    board_width: float = 0.15
    board_height: float = 0.10
    # transmit coil centres relative to the board centre
    transmit_positions: tuple = ((-0.055, -0.03), (0.055, -0.03),
                                 (-0.055, 0.03), (0.055, 0.03))
    receiver_position: tuple = (0.0, 0.0)
    transmit_coil: CoilConfig = field(default_factory=CoilConfig)
    receive_coil: CoilConfig = field(default_factory=CoilConfig)


@dataclass(frozen=True)
class SensorConfig:
    horizontal_offset: float = 0.5
    # below the reader plane; must exceed the interface depth
    depth: float = 0.30
    orientation: tuple = (0.0, 0.0, 1.0)
    coil: CoilConfig = field(default_factory=_sensor_coil)


@dataclass(frozen=True)
class MediumConfig:
    relative_permittivity: float = 5.0
    relative_permeability: float = 1.0
    conductivity: float = 0.01

    def build(self):
        return MediumSpec(self.relative_permittivity, self.relative_permeability,
                          self.conductivity)


@dataclass(frozen=True)
class SweepConfig:
    snr_db: tuple = tuple(float(v) for v in range(-10, 21, 2))
    depths: tuple = (0.15, 0.30, 0.45)
    conductivities: tuple = (0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1)
    conductivity_depth: float = 0.30
    estimation_powers: tuple = (1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0)
    estimation_conductivities: tuple = (0.001, 0.01, 0.1)
    estimation_target_snr_db: float = 12.0
    efficiency_conductivities: tuple = (0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1)
    # sensor directly below a reader coil so the incidence angle plays no role
    efficiency_depth: float = 0.30
    reference_conductivity: float = 0.001


@dataclass(frozen=True)
class EMConfig:
    # None: use the MI carrier frequency
    frequency: float | None = 915e6
    gain_air: float = 1.0
    gain_soil: float = 1.0


@dataclass(frozen=True)
class ScenarioConfig:
    frequency: float = 13.56e6
    interface_depth: float = 0.05
    noise_level_dbmv: float = -80.0
    modulation_order: int = 4
    estimation_power: float = 1.0
    data_power: float = 2e-3
    target_snr_db: float = 12.0
    symbols_per_trial: int = 1
    trials: int = 10_000
    rng_seed: int = 2018
    block_size: int = 2048
    reader: ReaderConfig = field(default_factory=ReaderConfig)
    sensor: SensorConfig = field(default_factory=SensorConfig)
    soil: MediumConfig = field(default_factory=MediumConfig)
    air: MediumConfig = field(default_factory=lambda: MediumConfig(1.0, 1.0, 0.0))
    em_link: EMConfig = field(default_factory=EMConfig)
    sweeps: SweepConfig = field(default_factory=SweepConfig)

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.block_size < 1:
            raise ConfigError("block_size must be >= 1")
        if self.symbols_per_trial < 1:
            raise ConfigError("symbols_per_trial must be >= 1")
        if not 0 <= self.rng_seed < 2 ** 64:
            raise ConfigError("rng_seed must be an unsigned 64-bit integer")
        if not self.estimation_power > self.data_power:
            raise ConfigError("estimation_power must exceed data_power")
        if not self.sensor.depth > self.interface_depth:
            raise ConfigError("sensor must lie strictly below the interface")
        if self.frequency <= 0 or self.interface_depth <= 0:
            raise ConfigError("frequency and interface_depth must be positive")
        m = self.modulation_order
        if m < 2 or m & (m - 1):
            raise ConfigError("modulation_order must be a power of two")
        if any(len(p) != 2 for p in self.reader.transmit_positions) or \
                len(self.reader.receiver_position) != 2:
            raise ConfigError("reader coil positions must be (x, y) pairs")
        if len(self.sensor.orientation) != 3 or not any(self.sensor.orientation):
            raise ConfigError("sensor orientation must be a non-zero 3-vector")
        try:
            self.scenario()
            self.transmit_coils()
            self.receive_coil()
            self.sensor_coil()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    # derived quantities -------------------------------------------------
    @property
    def omega(self):
        return 2.0 * math.pi * self.frequency

    @property
    def noise_std(self):
        """RMS noise amplitude in volts: dBmV is 20 log10(V / 1 mV)."""
        return 1e-3 * 10.0 ** (self.noise_level_dbmv / 20.0)

    @property
    def noise_variance(self):
        return self.noise_std ** 2

    def scenario(self):
        return LayeredScenario(self.air.build() if self.air else AIR, self.soil.build(),
                               self.interface_depth, self.omega)

    def transmit_coils(self):
        spec = self.reader.transmit_coil.build(self.omega)
        return [(spec, Pose((x, y, 0.0))) for x, y in self.reader.transmit_positions]

    def receive_coil(self):
        x, y = self.reader.receiver_position
        return self.reader.receive_coil.build(self.omega), Pose((x, y, 0.0))

    def sensor_coil(self):
        s = self.sensor
        n = np.asarray(s.orientation, dtype=float)
        pose = Pose((s.horizontal_offset, 0.0, -s.depth), tuple(n / np.linalg.norm(n)))
        return s.coil.build(self.omega), pose

    def symbol_set(self):
        from ..coils import impedance
        return SymbolSet(complex(impedance(self.sensor_coil()[0], self.omega)),
                         self.modulation_order)

    def with_conductivity(self, sigma):
        return replace(self, soil=replace(self.soil, conductivity=float(sigma)))

    def with_depth(self, depth):
        return replace(self, sensor=replace(self.sensor, depth=float(depth)))

    def to_dict(self):
        return asdict(self)


_NULLABLE = {"capacitance", "frequency"}


def _build(cls, data, path, base=None):
    """Overlay ``data`` onto ``base`` (default instance of ``cls``), strictly."""
    if not isinstance(data, dict):
        raise ConfigError(f"{path or 'config'}: expected a mapping, got {type(data).__name__}")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ConfigError(f"{path or 'config'}: unknown key(s) {', '.join(unknown)}")
    kwargs = {}
    defaults = cls() if base is None else base
    for name, value in data.items():
        sub = getattr(defaults, name)
        where = f"{path}.{name}" if path else name
        if is_dataclass(sub):
            kwargs[name] = _build(type(sub), value, where, sub)
        elif value is None:
            if name not in _NULLABLE or not path:
                raise ConfigError(f"{where}: must not be null")
            kwargs[name] = None
        elif isinstance(sub, tuple):
            if not isinstance(value, (list, tuple)):
                raise ConfigError(f"{where}: expected a list")
            items = tuple(tuple(v) if isinstance(v, list) else v for v in value)
            leaves = [x for v in items for x in (v if isinstance(v, tuple) else (v,))]
            if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in leaves):
                raise ConfigError(f"{where}: list entries must be numbers")
            kwargs[name] = items
        elif isinstance(sub, int) and not isinstance(sub, bool):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{where}: expected an integer")
            kwargs[name] = value
        elif isinstance(sub, float) or name in _NULLABLE:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{where}: expected a number")
            kwargs[name] = float(value)
        else:
            kwargs[name] = value
    try:
        return replace(defaults, **kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path or 'config'}: {exc}") from exc


class _Loader(yaml.SafeLoader):
    """Safe loader that also reads ``1e-3`` and ``13.56e6`` as floats (YAML 1.2)."""


_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"""^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
                   |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
                   |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
                   |[-+]?\.(?:inf|Inf|INF)
                   |\.(?:nan|NaN|NAN))$""", re.X),
    list("-+0123456789."))


def config_from_dict(data):
    return _build(ScenarioConfig, data or {}, "")


def load_config(path):
    """Read a YAML scenario file; missing keys take the reference defaults."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        data = yaml.load(text, Loader=_Loader)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    return config_from_dict(data)


def dump_config(config, path):
    def plain(obj):
        if isinstance(obj, dict):
            return {k: plain(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [plain(v) for v in obj]
        return obj
    Path(path).write_text(yaml.safe_dump(plain(config.to_dict()), sort_keys=False))
