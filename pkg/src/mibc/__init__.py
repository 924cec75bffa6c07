"""Magnetic-induction backscatter link simulator for buried sensors.

Subpackages: ``numerics`` (Bessel functions, oscillatory quadrature),
``media`` (layered-ground fields), ``coils`` (circuit model), ``estimation``,
``phy`` (DPSK backscatter), ``beamform`` and ``harness`` (Monte Carlo sweeps,
configuration, CSV, CLI).
"""

from . import beamform, coils, estimation, media, numerics, phy
from ._backend import BACKEND, COMPILED
from .coils import CoilSpec, Pose, assemble_impedance_matrix
from .media import AIR, LayeredScenario, MediumSpec

__version__ = "0.1.0"

__all__ = [
    "beamform", "coils", "estimation", "media", "numerics", "phy",
    "BACKEND", "COMPILED",
    "CoilSpec", "Pose", "assemble_impedance_matrix",
    "AIR", "LayeredScenario", "MediumSpec",
    "__version__",
]
