"""Air/soil stratified-medium model for a vertical magnetic coil.

Sign conventions
----------------
The layered-medium field expressions below use the forms ``e^{+j k_z |z|}``,
``H^(1)`` and ``eps = eps' + j sigma / omega``.  Those are the outgoing,
decaying forms of an ``exp(-j omega t)`` phasor, so every field-side quantity
here (wavenumbers with ``Im k >= 0``, spectral kernels, fields) follows that
convention.  The circuit model (:mod:`mibc.coils`, :mod:`mibc.estimation`)
uses ``exp(+j omega t)`` phasors; the two are complex conjugates of each
other, so :func:`mutual_inductance_cross` conjugates the field-side result
before returning it.

Geometry: the reader plane is ``z = 0``, the air/soil interface is at
``z = -d1`` and soil occupies ``z < -d1``.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .numerics import (
    DEFAULT_QUADRATURE,
    bessel_j,
    integrate_oscillatory_semiinfinite,
)

MU0 = 1.25663706212e-6
EPS0 = 8.8541878128e-12
C0 = 299792458.0


@dataclass(frozen=True)
class MediumSpec:
    relative_permittivity: float = 1.0
    relative_permeability: float = 1.0
    conductivity: float = 0.0

    def __post_init__(self):
        for name in ("relative_permittivity", "relative_permeability", "conductivity"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.relative_permittivity < 1.0:
            raise ValueError("relative_permittivity must be >= 1")
        if self.relative_permeability <= 0.0:
            raise ValueError("relative_permeability must be > 0")
        if self.conductivity < 0.0:
            raise ValueError("conductivity must be >= 0")

    @property
    def permeability(self):
        return MU0 * self.relative_permeability

    def permittivity(self, omega):
        """Complex permittivity ``eps0 eps_r + j sigma / omega`` (F/m)."""
        return EPS0 * self.relative_permittivity + 1j * self.conductivity / omega

    def with_conductivity(self, sigma):
        return MediumSpec(self.relative_permittivity, self.relative_permeability, sigma)


AIR = MediumSpec(1.0, 1.0, 0.0)


@dataclass(frozen=True)
class LayeredScenario:
    air: MediumSpec
    soil: MediumSpec
    interface_depth: float
    angular_frequency: float

    def __post_init__(self):
        if not self.interface_depth > 0:
            raise ValueError("interface_depth must be > 0")
        if not self.angular_frequency > 0:
            raise ValueError("angular_frequency must be > 0")

    @classmethod
    def at_frequency(cls, frequency_hz, soil, interface_depth, air=AIR):
        return cls(air, soil, interface_depth, 2.0 * math.pi * frequency_hz)

    def homogeneous(self):
        """The same scenario with the soil replaced by the upper medium."""
        return LayeredScenario(self.air, self.air, self.interface_depth,
                               self.angular_frequency)

    def with_soil(self, soil):
        return LayeredScenario(self.air, soil, self.interface_depth,
                               self.angular_frequency)


@dataclass(frozen=True)
class FieldPoint:
    h_rho: complex
    h_phi: complex
    h_z: complex
    position: tuple

    def cartesian(self):
        """``(h_x, h_y, h_z)`` using the azimuth of :attr:`position`."""
        phi = self.position[1]
        c, s = math.cos(phi), math.sin(phi)
        return np.array([self.h_rho * c - self.h_phi * s,
                         self.h_rho * s + self.h_phi * c,
                         self.h_z])


@dataclass(frozen=True)
class EMLinkSpec:
    """Far-field link used for the EM comparison.

    ``frequency`` defaults to a UHF carrier; pass ``None`` to evaluate at the
    scenario frequency.
    """

    path_air: float
    path_soil: float
    gain_air: float = 1.0
    gain_soil: float = 1.0
    frequency: float | None = 915e6

    def __post_init__(self):
        if not (self.path_air > 0 and self.path_soil > 0):
            raise ValueError("path lengths must be positive")
        if not (self.gain_air > 0 and self.gain_soil > 0):
            raise ValueError("antenna gains must be positive")


def wavenumber(medium, omega):
    """Complex wavenumber ``omega sqrt(mu eps)`` with ``Im k >= 0``."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    k = omega * np.sqrt(complex(medium.permeability * medium.permittivity(omega)))
    return -k if k.imag < 0 else k


def kz(k, k_rho):
    """Vertical wavenumber ``sqrt(k^2 - k_rho^2)`` on the decaying branch.

    ``Im kz >= 0`` so that ``exp(j kz |z|)`` decays; for the evanescent part of
    a lossless spectrum this gives ``kz = +j sqrt(k_rho^2 - k^2)``.
    """
    k_rho = np.asarray(k_rho, dtype=np.float64)
    root = np.sqrt(np.asarray(k, dtype=np.complex128) ** 2 - k_rho.astype(np.complex128) ** 2)
    root = np.where(root.imag < 0, -root, root)
    return root if root.ndim else complex(root)


def _kzs(scenario, k_rho):
    w = scenario.angular_frequency
    return kz(wavenumber(scenario.air, w), k_rho), kz(wavenumber(scenario.soil, w), k_rho)


def transmission_coeff(scenario, k_rho):
    """``T12 = 2 mu2 k1z / (mu2 k1z + mu1 k2z) exp(j d1 (k1z - k2z))``."""
    k1z, k2z = _kzs(scenario, k_rho)
    mu1, mu2 = scenario.air.permeability, scenario.soil.permeability
    den = mu2 * k1z + mu1 * k2z
    with np.errstate(invalid="ignore", divide="ignore"):
        pre = np.where(den == 0, 1.0, 2.0 * mu2 * k1z / np.where(den == 0, 1.0, den))
    out = pre * np.exp(1j * scenario.interface_depth * (k1z - k2z))
    return out if np.ndim(out) else complex(out)


def reflection_coeff(scenario, k_rho):
    """``R12 = (mu2 k1z - mu1 k2z) / (mu2 k1z + mu1 k2z) exp(2 j k1z d1)``.

    For equal permeabilities this is ``(k1z - k2z) / (k1z + k2z)`` times the
    round-trip phase to the interface.
    """
    k1z, k2z = _kzs(scenario, k_rho)
    mu1, mu2 = scenario.air.permeability, scenario.soil.permeability
    den = mu2 * k1z + mu1 * k2z
    with np.errstate(invalid="ignore", divide="ignore"):
        pre = np.where(den == 0, 0.0, (mu2 * k1z - mu1 * k2z) / np.where(den == 0, 1.0, den))
    out = pre * np.exp(2j * k1z * scenario.interface_depth)
    return out if np.ndim(out) else complex(out)


def _soil_spectral_factor(scenario, k_rho):
    """``(k_rho^3 / k2z) T12 * mu1 k2z / (mu2 k1z)`` in cancelled form.

    The extra ``mu1 k2z / (mu2 k1z)`` makes normal B and tangential H
    continuous across the interface given the air-side expansion; it is 1 in
    the homogeneous limit and tends to ``mu1 / mu2`` for evanescent ``k_rho``.
    Returns ``(factor, k1z, k2z)`` where the factor, without powers of
    ``k_rho``, is
    ``2 mu1 / (mu2 k1z + mu1 k2z) * exp(j d1 (k1z - k2z))``.
    """
    k1z, k2z = _kzs(scenario, k_rho)
    mu1, mu2 = scenario.air.permeability, scenario.soil.permeability
    fac = 2.0 * mu1 / (mu2 * k1z + mu1 * k2z)
    return fac * np.exp(1j * scenario.interface_depth * (k1z - k2z)), k1z, k2z


def _branch_points(scenario):
    w = scenario.angular_frequency
    return sorted({abs(wavenumber(scenario.air, w).real),
                   abs(wavenumber(scenario.soil, w).real)})


def _moment(source, current):
    return current * math.pi * source.radius ** 2 * source.turns


def _raw_underground(moment, scenario, rho, z, quad):
    """Field below the interface with the bare ``1/(8 pi)`` constants.

    The full-line Hankel integrals are folded onto ``(0, inf)``:
    ``int_R k f(k^2) H0(k rho) dk = 2 int_0^inf k f J0`` and likewise for
    ``k^2 H1``.
    """
    scale = max(rho, abs(z))

    def kern_z(kr):
        fac, _, k2z = _soil_spectral_factor(scenario, kr)
        return kr ** 3 * fac * np.exp(-1j * k2z * z) * bessel_j(0, kr * rho)

    def kern_rho(kr):
        fac, k1z, k2z = _soil_spectral_factor(scenario, kr)
        # k_rho^2 T12 chi = k_rho^2 k2z * fac
        return kr ** 2 * k2z * fac * np.exp(-1j * k2z * z) * bessel_j(1, kr * rho)

    bps = _branch_points(scenario)
    iz = integrate_oscillatory_semiinfinite(kern_z, scale, quad, bps)
    h_z = -1j * moment / (8 * math.pi) * 2.0 * iz
    if rho == 0.0:
        h_rho = 0j
    else:
        ir = integrate_oscillatory_semiinfinite(kern_rho, scale, quad, bps)
        h_rho = moment / (8 * math.pi) * 2.0 * ir
    return h_rho, h_z


def free_space_dipole_field(moment, k, rho, z):
    """Exact field ``(h_rho, h_z)`` of a z-directed magnetic dipole.

    ``exp(-j omega t)`` convention, dipole at the origin, cylindrical
    observation point ``(rho, z)``.
    """
    r = math.hypot(rho, z)
    cos_t, sin_t = z / r, rho / r
    ph = np.exp(1j * k * r)
    h_r = moment / (2 * math.pi * r ** 3) * (1 - 1j * k * r) * ph * cos_t
    h_t = moment / (4 * math.pi * r ** 3) * (1 - 1j * k * r - (k * r) ** 2) * ph * sin_t
    return complex(h_r * sin_t + h_t * cos_t), complex(h_r * cos_t - h_t * sin_t)


def static_dipole_field(moment, rho, z):
    """Quasi-static dipole field ``(h_rho, h_z)``."""
    r = math.hypot(rho, z)
    return (3 * moment * rho * z / (4 * math.pi * r ** 5),
            moment * (2 * z * z - rho * rho) / (4 * math.pi * r ** 5))


_CAL_FREQUENCY = 2 * math.pi * 13.56e6
_CAL_POINT = (0.3, -0.4)


def calibration_factor(rho=_CAL_POINT[0], z=_CAL_POINT[1], omega=_CAL_FREQUENCY,
                       quad=DEFAULT_QUADRATURE):
    """Ratio of the exact dipole ``h_z`` to the bare-constant integral.

    Evaluated in a homogeneous air scenario.  With the default arguments the
    value is cached and applied to every field evaluation; it should be the
    same for every geometry (it is ``-1`` up to quadrature error).
    """
    if (rho, z, omega, quad) == (*_CAL_POINT, _CAL_FREQUENCY, DEFAULT_QUADRATURE):
        return _default_calibration()
    return _calibration(rho, z, omega, quad)


def _calibration(rho, z, omega, quad):
    scen = LayeredScenario(AIR, AIR, 0.05, omega)
    _, raw = _raw_underground(1.0, scen, rho, z, quad)
    _, exact = free_space_dipole_field(1.0, wavenumber(AIR, omega), rho, z)
    return exact / raw


@lru_cache(maxsize=1)
def _default_calibration():
    return _calibration(*_CAL_POINT, _CAL_FREQUENCY, DEFAULT_QUADRATURE)


def h_field_underground(source, current, scenario, obs, quad=DEFAULT_QUADRATURE):
    """Magnetic field in the soil of a vertical coil at the origin.

    Parameters
    ----------
    source : CoilSpec-like
        Needs ``radius`` and ``turns``.
    current : complex
        Source current phasor (A).
    obs : (rho, phi, z)
        Observation point; ``z`` must lie below the interface.
    """
    rho, phi, z = (float(v) for v in obs)
    if not z < -scenario.interface_depth:
        raise ValueError("observation point must lie below the interface")
    if rho < 0:
        raise ValueError("rho must be non-negative")
    m = _moment(source, current)
    h_rho, h_z = _raw_underground(m, scenario, rho, z, quad)
    cal = calibration_factor()
    return FieldPoint(cal * h_rho, 0j, cal * h_z, (rho, phi, z))


def h_field_air(source, current, scenario, obs, quad=DEFAULT_QUADRATURE):
    """Field in the upper medium: direct wave plus the interface reflection.

    The reflected wave travels ``|z + 2 d1|``; :func:`reflection_coeff`
    already carries ``exp(2 j k1z d1)`` so the remaining phase is
    ``exp(j k1z z)``.
    """
    rho, phi, z = (float(v) for v in obs)
    if not (-scenario.interface_depth < z < 0 or z > 0):
        raise ValueError("observation point must lie in the upper medium, off the source plane")
    m = _moment(source, current)
    w = scenario.angular_frequency
    k1 = wavenumber(scenario.air, w)
    sgn = 1.0 if z > 0 else -1.0

    def kern_z(kr):
        k1z = kz(k1, kr)
        refl = reflection_coeff(scenario, kr)
        return kr ** 3 / k1z * (np.exp(1j * k1z * abs(z)) + refl * np.exp(1j * k1z * z)) \
            * bessel_j(0, kr * rho)

    def kern_rho(kr):
        k1z = kz(k1, kr)
        refl = reflection_coeff(scenario, kr)
        return -kr ** 2 * (sgn * np.exp(1j * k1z * abs(z)) + refl * np.exp(1j * k1z * z)) \
            * bessel_j(1, kr * rho)

    scale = max(rho, abs(z))
    bps = _branch_points(scenario)
    cal = calibration_factor()
    h_z = -1j * m / (8 * math.pi) * 2.0 * integrate_oscillatory_semiinfinite(kern_z, scale, quad, bps)
    h_rho = 0j
    if rho > 0:
        h_rho = m / (8 * math.pi) * 2.0 * integrate_oscillatory_semiinfinite(kern_rho, scale, quad, bps)
    return FieldPoint(cal * h_rho, 0j, cal * h_z, (rho, phi, z))


def mutual_inductance_cross(source, sensor, sensor_pose, scenario,
                            source_position=(0.0, 0.0), quad=DEFAULT_QUADRATURE):
    """Mutual inductance between a vertical coil at ``z = 0`` and a buried coil.

    ``m = mu2 * pi a_s^2 N_s (h . n_c) / i_t`` with the field of the source
    driven by a unit probe current.  Returned in the circuit (``exp(+j w t)``)
    convention, i.e. conjugated relative to the field computation.
    """
    pos = np.asarray(sensor_pose.position, dtype=float)
    n_c = np.asarray(sensor_pose.orientation, dtype=float)
    dx = pos[0] - source_position[0]
    dy = pos[1] - source_position[1]
    rho = math.hypot(dx, dy)
    phi = math.atan2(dy, dx)
    if rho > 0 and (n_c[0] != 0 or n_c[1] != 0):
        fp = h_field_underground(source, 1.0, scenario, (rho, phi, pos[2]), quad)
    else:
        # vertical sensor: h_rho does not contribute
        fp = _h_z_only(source, scenario, rho, phi, pos[2], quad)
    h = fp.cartesian()
    m_field = scenario.soil.permeability * math.pi * sensor.radius ** 2 * sensor.turns \
        * complex(np.dot(h, n_c))
    return m_field.conjugate()


def _h_z_only(source, scenario, rho, phi, z, quad):
    if not z < -scenario.interface_depth:
        raise ValueError("sensor must lie below the interface")
    scale = max(rho, abs(z))

    def kern_z(kr):
        fac, _, k2z = _soil_spectral_factor(scenario, kr)
        return kr ** 3 * fac * np.exp(-1j * k2z * z) * bessel_j(0, kr * rho)

    iz = integrate_oscillatory_semiinfinite(kern_z, scale, quad, _branch_points(scenario))
    h_z = -1j * _moment(source, 1.0) / (8 * math.pi) * 2.0 * iz
    return FieldPoint(0j, 0j, calibration_factor() * h_z, (rho, phi, z))


def propagation_efficiency_mi(m, r_s, omega):
    """``w^2 |m|^2 / (2 (w^2 |m|^2 + 2 r_s^2))``; lies in ``[0, 1/2)``."""
    if not r_s > 0:
        raise ValueError("r_s must be positive")
    x = omega ** 2 * abs(m) ** 2
    return x / (2.0 * (x + 2.0 * r_s ** 2))


def propagation_efficiency_em(link, scenario):
    """Two-segment far-field link efficiency through the interface.

    ``eta_i = sqrt(eps_i / mu_i)`` is a wave admittance, not an impedance;
    the transmission factor enters as ``|2 eta2 / (eta2 + eta1)|``.
    """
    w = scenario.angular_frequency if link.frequency is None else 2 * math.pi * link.frequency
    k1 = wavenumber(scenario.air, w)
    k2 = wavenumber(scenario.soil, w)
    lam1 = 2 * math.pi / k1.real
    lam2 = 2 * math.pi / k2.real
    eta1 = np.sqrt(complex(scenario.air.permittivity(w) / scenario.air.permeability))
    eta2 = np.sqrt(complex(scenario.soil.permittivity(w) / scenario.soil.permeability))
    t_em = abs(2 * eta2 / (eta2 + eta1))
    return float((lam1 / (4 * math.pi * link.path_air)) ** 2
                 * (lam2 / (4 * math.pi * link.path_soil)) ** 2
                 * link.gain_air * link.gain_soil * t_em
                 * math.exp(-2 * k2.imag * link.path_soil))
