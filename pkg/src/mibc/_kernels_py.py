"""Pure-numpy implementations of the hot kernels.

This module mirrors ``_kernels.pyx`` function for function and is used when
the compiled extension is unavailable (or ``MIBC_PURE_PYTHON=1``).

Bessel functions of integer order 0 and 1 are evaluated in three regimes:

* ``|x| < SERIES_LIMIT``: ascending power series (A&S 9.1.10 / 9.1.11).
* ``SERIES_LIMIT <= x < ASYMPTOTIC_LIMIT``: Miller backward recurrence for
  ``J_n`` normalised by ``J0 + 2 sum J_2k = 1``; ``Y0`` and ``Y1`` from the
  Neumann expansions in even/odd ``J_n``.
* ``x >= ASYMPTOTIC_LIMIT``: Hankel asymptotic expansion, truncated at the
  smallest term.
"""

import numpy as np

SERIES_LIMIT = 5.0
ASYMPTOTIC_LIMIT = 25.0

EULER_GAMMA = 0.57721566490153286061
TWO_OVER_PI = 2.0 / np.pi

_SERIES_TERMS = 34
_ASYMPTOTIC_TERMS = 60


def _series(x):
    """Power series for J0, J1, Y0, Y1 at moderate |x| (x > 0 for Y)."""
    q = -0.25 * x * x
    j0 = np.ones_like(x)
    j1 = np.ones_like(x)
    t0 = np.ones_like(x)
    t1 = np.ones_like(x)
    # psi(k+1) + psi(k+1) and psi(k+1) + psi(k+2), psi(1) = -gamma
    h = 0.0
    s0 = -2.0 * EULER_GAMMA * t0
    s1 = (-2.0 * EULER_GAMMA + 1.0) * t1
    for k in range(1, _SERIES_TERMS):
        t0 = t0 * q / (k * k)
        t1 = t1 * q / (k * (k + 1))
        j0 = j0 + t0
        j1 = j1 + t1
        h += 1.0 / k
        psi_k1 = -EULER_GAMMA + h
        psi_k2 = psi_k1 + 1.0 / (k + 1)
        s0 = s0 + 2.0 * psi_k1 * t0
        s1 = s1 + (psi_k1 + psi_k2) * t1
    half = 0.5 * x
    j1 = half * j1
    with np.errstate(divide="ignore", invalid="ignore"):
        log_half = np.log(np.abs(half))
        y0 = TWO_OVER_PI * log_half * j0 - s0 / np.pi
        y1 = -TWO_OVER_PI / x + TWO_OVER_PI * log_half * j1 - half * s1 / np.pi
    return j0, j1, y0, y1


def _miller(x):
    """Backward recurrence for J0, J1 and Neumann sums for Y0, Y1 (x > 0)."""
    xmax = float(np.max(x))
    start = 2 * ((int(xmax) + 20 + int(3.0 * np.sqrt(xmax))) // 2)
    inv = 2.0 / x
    j_next = np.zeros_like(x)     # J_{n+1}
    j_cur = np.full_like(x, 1e-30)  # J_n, n = start (even)
    norm = np.zeros_like(x)       # sum_{k>=1} J_2k
    ysum0 = np.zeros_like(x)      # sum (-1)^k J_2k / k
    ysum1 = np.zeros_like(x)      # sum (-1)^k (J_{2k-1} - J_{2k+1}) / k
    j_odd_above = np.zeros_like(x)  # J_{2k+1} for the current even n = 2k
    j1 = None
    for n in range(start, 0, -1):
        # invariant: j_cur = J_n, j_next = J_{n+1}
        if n % 2 == 0:
            k = n // 2
            sign = 1.0 if k % 2 == 0 else -1.0
            norm = norm + j_cur
            ysum0 = ysum0 + sign * j_cur / k
            j_odd_above = j_next
        else:
            k = (n + 1) // 2
            sign = 1.0 if k % 2 == 0 else -1.0
            ysum1 = ysum1 + sign * (j_cur - j_odd_above) / k
        j_prev = n * inv * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        big = np.abs(j_cur) > 1e200
        if np.any(big):
            scale = np.where(big, 1e-200, 1.0)
            j_cur = j_cur * scale
            j_next = j_next * scale
            norm = norm * scale
            ysum0 = ysum0 * scale
            ysum1 = ysum1 * scale
            j_odd_above = j_odd_above * scale
        if n == 1:
            j1 = j_next
    j0 = j_cur
    total = j0 + 2.0 * norm
    j0 = j0 / total
    j1 = j1 / total
    ysum0 = ysum0 / total
    ysum1 = ysum1 / total
    lg = np.log(0.5 * x) + EULER_GAMMA
    y0 = TWO_OVER_PI * lg * j0 - 2.0 * TWO_OVER_PI * ysum0
    y1 = -TWO_OVER_PI * j0 / x + TWO_OVER_PI * lg * j1 + TWO_OVER_PI * ysum1
    return j0, j1, y0, y1


def _asymptotic_pq(x, order):
    mu = 4.0 * order * order
    eight_x = 8.0 * x
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, _ASYMPTOTIC_TERMS):
        term = term * (mu - (2 * k - 1) ** 2) / (k * eight_x)
        mag = np.abs(term)
        active &= mag < prev
        prev = mag
        t = np.where(active, term, 0.0)
        if k % 2 == 1:
            q = q + (1.0 if (k // 2) % 2 == 0 else -1.0) * t
        else:
            p = p + (1.0 if (k // 2) % 2 == 0 else -1.0) * t
        if not np.any(active & (mag > 1e-18)):
            break
    return p, q


def _asymptotic(x):
    amp = np.sqrt(TWO_OVER_PI / x)
    out = []
    for order in (0, 1):
        p, q = _asymptotic_pq(x, order)
        chi = x - (0.5 * order + 0.25) * np.pi
        c, s = np.cos(chi), np.sin(chi)
        out.append((amp * (p * c - q * s), amp * (p * s + q * c)))
    (j0, y0), (j1, y1) = out
    return j0, j1, y0, y1


def bessel_j01y01(x):
    """Return ``(J0, J1, Y0, Y1)`` arrays for positive real ``x``.

    Non-positive entries give NaN for the ``Y`` outputs; ``J`` stays exact
    (``J0`` even, ``J1`` odd).
    """
    x = np.asarray(x, dtype=np.float64)
    shape = x.shape
    x = x.ravel()
    ax = np.abs(x)
    j0 = np.empty_like(ax)
    j1 = np.empty_like(ax)
    y0 = np.full_like(ax, np.nan)
    y1 = np.full_like(ax, np.nan)

    small = ax < SERIES_LIMIT
    mid = (ax >= SERIES_LIMIT) & (ax < ASYMPTOTIC_LIMIT)
    large = ax >= ASYMPTOTIC_LIMIT
    for mask, fn in ((small, _series), (mid, _miller), (large, _asymptotic)):
        if np.any(mask):
            a, b, c, d = fn(ax[mask])
            j0[mask], j1[mask], y0[mask], y1[mask] = a, b, c, d
    zero = ax == 0.0
    j0[zero] = 1.0
    j1[zero] = 0.0
    y0[zero] = -np.inf
    y1[zero] = -np.inf
    j1 = np.where(x < 0, -j1, j1)
    nonpos = x <= 0.0
    y0[nonpos & ~zero] = np.nan
    y1[nonpos & ~zero] = np.nan
    return (j0.reshape(shape), j1.reshape(shape),
            y0.reshape(shape), y1.reshape(shape))


def bessel_j0(x):
    return bessel_j01y01(x)[0]


def bessel_j1(x):
    return bessel_j01y01(x)[1]


def dpsk_decide(r_ref, r_data, order):
    """Nearest differential phase index (0-based) for each frame."""
    r_ref = np.asarray(r_ref, dtype=np.complex128)
    r_data = np.asarray(r_data, dtype=np.complex128)
    step = 2.0 * np.pi / order
    delta = np.angle(r_data * np.conj(r_ref))
    return np.mod(np.rint(delta / step).astype(np.int64), order)


def count_errors(sent, detected, order):
    """Return ``(symbol_errors, bit_errors)`` under Gray labelling."""
    sent = np.asarray(sent, dtype=np.int64)
    detected = np.asarray(detected, dtype=np.int64)
    diff = (sent ^ (sent >> 1)) ^ (detected ^ (detected >> 1))
    bits = np.zeros_like(diff)
    while np.any(diff):
        bits += diff & 1
        diff >>= 1
    return int(np.count_nonzero(sent != detected)), int(bits.sum())
