"""Integer-order Bessel and Hankel functions (orders 0 and 1).

The evaluation regimes are documented in :mod:`mibc._kernels_py`: power
series below ``|x| = 5``, Miller recurrence with Neumann sums up to 25, and the
Hankel asymptotic expansion beyond.
"""

import numpy as np

from .._backend import kernels


def _check_order(order):
    if order not in (0, 1):
        raise ValueError(f"only orders 0 and 1 are supported, got {order!r}")


def bessel_j(order, x):
    """Bessel function of the first kind ``J_order(x)`` for real ``x``.

    Scalars in, scalar out; arrays are evaluated elementwise.
    """
    _check_order(order)
    out = kernels.bessel_j01y01(x)[order]
    return float(out) if np.ndim(x) == 0 else out


def bessel_y(order, x):
    """Bessel function of the second kind; ``x`` must be positive."""
    _check_order(order)
    if np.any(np.asarray(x) <= 0):
        raise ValueError("Y_n is singular for x <= 0")
    out = kernels.bessel_j01y01(x)[2 + order]
    return float(out) if np.ndim(x) == 0 else out


def hankel1(order, x):
    """Hankel function of the first kind ``H_n^(1)(x) = J_n(x) + j Y_n(x)``.

    Raises
    ------
    ValueError
        If any ``x <= 0`` (``Y_n`` is singular at the origin).
    """
    _check_order(order)
    if np.any(np.asarray(x) <= 0):
        raise ValueError("H_n^(1) is singular for x <= 0")
    res = kernels.bessel_j01y01(x)
    out = res[order] + 1j * res[2 + order]
    return complex(out) if np.ndim(x) == 0 else out
