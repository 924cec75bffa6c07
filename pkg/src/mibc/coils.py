"""Coil circuit model, coplanar mutual inductance and the system matrix.

Circuit phasors use the ``exp(+j omega t)`` convention.  The system matrix is
indexed ``0 .. n_t - 1`` for transmit coils, ``n_t`` for the sensor and
``n_t + 1`` for the receive coil.
"""

from dataclasses import dataclass
import math

import numpy as np

from .media import MU0, mutual_inductance_cross
from .numerics import DEFAULT_QUADRATURE, bessel_j, integrate_oscillatory_semiinfinite


class SingularCircuitError(np.linalg.LinAlgError):
    """The impedance matrix cannot be inverted (degenerate coil placement)."""


@dataclass(frozen=True)
class CoilSpec:
    radius: float
    turns: int
    wire_radius: float
    resistance: float
    self_inductance: float
    capacitance: float

    def __post_init__(self):
        for name in ("radius", "turns", "wire_radius", "resistance",
                     "self_inductance", "capacitance"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
        if self.wire_radius >= self.radius:
            raise ValueError("wire_radius must be smaller than radius")

    def tuned(self, omega):
        """Copy with the capacitance set for resonance at ``omega``."""
        return CoilSpec(self.radius, self.turns, self.wire_radius, self.resistance,
                        self.self_inductance,
                        resonance_capacitance(self.self_inductance, omega))


@dataclass(frozen=True)
class Pose:
    position: tuple
    orientation: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        p = tuple(float(v) for v in self.position)
        n = tuple(float(v) for v in self.orientation)
        if len(p) != 3 or len(n) != 3:
            raise ValueError("position and orientation must be 3-vectors")
        if abs(math.sqrt(sum(v * v for v in n)) - 1.0) > 1e-12:
            raise ValueError("orientation must be a unit vector")
        object.__setattr__(self, "position", p)
        object.__setattr__(self, "orientation", n)

    @classmethod
    def pointing(cls, position, direction):
        d = np.asarray(direction, dtype=float)
        return cls(position, tuple(d / np.linalg.norm(d)))

    @property
    def is_vertical(self):
        return abs(abs(self.orientation[2]) - 1.0) < 1e-12


@dataclass(frozen=True)
class ImpedanceMatrix:
    matrix: np.ndarray
    n_transmit: int

    @property
    def sensor_index(self):
        return self.n_transmit

    @property
    def receiver_index(self):
        return self.n_transmit + 1

    @property
    def transmit_block(self):
        """``Z_Nt``: the transmit-coil rows and columns."""
        n = self.n_transmit
        return self.matrix[:n, :n]


def impedance(spec, omega, phase_offset=0.0):
    """``[r + j(omega l - 1/(omega c))] e^{j theta}``."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    z = spec.resistance + 1j * (omega * spec.self_inductance - 1.0 / (omega * spec.capacitance))
    return z * np.exp(1j * phase_offset)


def resonance_capacitance(l, omega):
    if not (l > 0 and omega > 0):
        raise ValueError("inductance and omega must be positive")
    return 1.0 / (omega * omega * l)


def mutual_inductance_coplanar(p, q, center_distance, permeability=MU0,
                               quad=DEFAULT_QUADRATURE):
    """Mutual inductance of two coplanar, parallel circular coils.

    ``mu pi a_p a_q N_p N_q int_0^inf J0(s d) J1(s a_p) J1(s a_q) ds``.
    """
    d = float(center_distance)
    a, b = p.radius, q.radius
    if d < 0:
        raise ValueError("center_distance must be non-negative")
    if d == 0 and a == b:
        raise ValueError("coincident equal coils: this is the (divergent) self term")

    def f(s):
        return bessel_j(0, s * d) * bessel_j(1, s * a) * bessel_j(1, s * b)

    scale = d if d > 0 else max(a, b)
    val = integrate_oscillatory_semiinfinite(f, scale, quad).real
    return permeability * math.pi * a * b * p.turns * q.turns * val


def assemble_impedance_matrix(transmit, receiver, sensor, scenario, omega=None,
                              sensor_phase=0.0, quad=DEFAULT_QUADRATURE):
    """Build the ``(N_t + 2)`` square system matrix.

    Parameters
    ----------
    transmit : list of (CoilSpec, Pose)
        Reader transmit coils, vertical, in the plane ``z = 0``.
    receiver : (CoilSpec, Pose)
        Reader receive coil, same plane.
    sensor : (CoilSpec, Pose)
        Buried sensor coil.
    """
    omega = scenario.angular_frequency if omega is None else omega
    reader = list(transmit) + [receiver]
    for spec, pose in reader:
        if not pose.is_vertical:
            raise ValueError("reader coils must be vertically oriented")
        if pose.position[2] != 0.0:
            raise ValueError("reader coils must lie in the z = 0 plane")
    n_t = len(transmit)
    size = n_t + 2
    s_idx, r_idx = n_t, n_t + 1
    order = list(range(n_t)) + [r_idx]
    z = np.zeros((size, size), dtype=np.complex128)
    for idx, (spec, _) in zip(order, reader):
        z[idx, idx] = impedance(spec, omega)
    z[s_idx, s_idx] = impedance(sensor[0], omega, sensor_phase)

    for i in range(n_t):
        for j in range(i + 1, n_t):
            (pi_, qi), (pj, qj) = transmit[i], transmit[j]
            d = math.dist(qi.position[:2], qj.position[:2])
            z[i, j] = z[j, i] = 1j * omega * mutual_inductance_coplanar(
                pi_, pj, d, scenario.air.permeability, quad)
    # transmit/receive isolation: full-duplex reader, coupling forced to zero
    sens_spec, sens_pose = sensor
    for idx, (spec, pose) in zip(order, reader):
        m = mutual_inductance_cross(spec, sens_spec, sens_pose, scenario,
                                    pose.position[:2], quad)
        z[idx, s_idx] = z[s_idx, idx] = 1j * omega * m
    return ImpedanceMatrix(z, n_t)


def solve_circuit(z, v):
    """Currents ``i`` with ``Z i = v`` (LU with partial pivoting)."""
    mat = z.matrix if isinstance(z, ImpedanceMatrix) else np.asarray(z)
    v = np.asarray(v, dtype=np.complex128)
    try:
        i = np.linalg.solve(mat, v)
    except np.linalg.LinAlgError as exc:
        raise SingularCircuitError(str(exc)) from exc
    if not np.all(np.isfinite(i)):
        raise SingularCircuitError("non-finite currents")
    nv = np.linalg.norm(v)
    if nv > 0 and np.linalg.norm(mat @ i - v) / nv > 1e-10:
        raise SingularCircuitError("ill-conditioned impedance matrix")
    return i
