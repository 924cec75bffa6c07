"""Special functions and semi-infinite oscillatory quadrature."""

from .bessel import bessel_j, bessel_y, hankel1
from .quadrature import (
    DEFAULT_QUADRATURE,
    QuadratureError,
    QuadratureSpec,
    integrate_interval,
    integrate_oscillatory_semiinfinite,
    wynn_epsilon,
)

__all__ = [
    "bessel_j",
    "bessel_y",
    "hankel1",
    "DEFAULT_QUADRATURE",
    "QuadratureError",
    "QuadratureSpec",
    "integrate_interval",
    "integrate_oscillatory_semiinfinite",
    "wynn_epsilon",
]
