"""Semi-infinite integration of oscillatory integrands.

The integral over ``(0, inf)`` is split at multiples of ``pi / scale`` (half
the asymptotic oscillation period). Each piece is integrated with
Gauss-Legendre, and the sequence of partial sums is extrapolated with Wynn's
epsilon algorithm (partition-extrapolation).  A "head" region ending at the
last user breakpoint is integrated adaptively with an endpoint-clustering
map, which tolerates integrable ``1/sqrt`` endpoint singularities such as the
branch points of Sommerfeld kernels.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

__all__ = [
    "QuadratureError",
    "QuadratureSpec",
    "DEFAULT_QUADRATURE",
    "integrate_oscillatory_semiinfinite",
    "integrate_interval",
    "wynn_epsilon",
]


class QuadratureError(ArithmeticError):
    """The extrapolated integral did not reach the requested tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    relative_tolerance: float = 1e-9
    max_segments: int = 400
    nodes_per_segment: int = 24

    def __post_init__(self):
        if not self.relative_tolerance > 0:
            raise ValueError("relative_tolerance must be positive")
        if self.nodes_per_segment < 2:
            raise ValueError("nodes_per_segment must be >= 2")
        if self.max_segments < 1:
            raise ValueError("max_segments must be >= 1")


DEFAULT_QUADRATURE = QuadratureSpec()

_WINDOW = 40
_MAX_DEPTH = 40


@lru_cache(maxsize=None)
def _legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def _clustered(n):
    # u in [-1, 1] -> t = (1 - cos(pi (u + 1) / 2)) / 2 in [0, 1]
    u, w = _legendre(n)
    theta = 0.5 * np.pi * (u + 1.0)
    t = 0.5 * (1.0 - np.cos(theta))
    dt = 0.25 * np.pi * np.sin(theta) * w
    t.setflags(write=False)
    dt.setflags(write=False)
    return t, dt


def _gl(f, a, b, n):
    x, w = _legendre(n)
    half = 0.5 * (b - a)
    vals = np.asarray(f(0.5 * (a + b) + half * x))
    terms = half * w * vals
    return terms.sum(), np.abs(terms).sum()


def _gl_clustered(f, a, b, n):
    t, dt = _clustered(n)
    vals = np.asarray(f(a + (b - a) * t))
    terms = (b - a) * dt * vals
    return terms.sum(), np.abs(terms).sum()


def integrate_interval(f, a, b, n=24, rtol=1e-10, clustered=True, _depth=0):
    """Adaptive Gauss-Legendre on ``[a, b]``.

    With ``clustered=True`` the nodes are pushed toward both endpoints by a
    cosine map, so inverse-square-root endpoint singularities integrate
    cleanly.  Returns ``(value, l1)`` where ``l1`` approximates the integral of
    ``|f|``.
    """
    rule = _gl_clustered if clustered else _gl
    coarse, _ = rule(f, a, b, n)
    fine, l1 = rule(f, a, b, 2 * n)
    if abs(fine - coarse) <= rtol * max(abs(fine), l1 * 1e-3) or l1 == 0.0:
        return fine, l1
    if _depth >= _MAX_DEPTH:
        raise QuadratureError(
            f"adaptive subdivision of [{a}, {b}] did not converge "
            f"(|delta| = {abs(fine - coarse):.3e})")
    mid = 0.5 * (a + b)
    left, l1a = integrate_interval(f, a, mid, n, rtol, clustered, _depth + 1)
    right, l1b = integrate_interval(f, mid, b, n, rtol, clustered, _depth + 1)
    return left + right, l1a + l1b


def wynn_epsilon(partial_sums):
    """Extrapolate the limit of a sequence with Wynn's epsilon algorithm.

    Returns ``(estimate, error)``.  The estimate is taken from the even column
    whose two lowest entries agree best.
    """
    s = np.asarray(partial_sums, dtype=np.complex128)
    if s.size == 0:
        raise ValueError("empty sequence")
    if s.size == 1:
        return complex(s[0]), math.inf
    best = complex(s[-1])
    best_err = abs(s[-1] - s[-2])
    prev = np.zeros(s.size + 1, dtype=np.complex128)
    cur = s
    col = 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        while cur.size > 1:
            diff = cur[1:] - cur[:-1]
            nxt = prev[1:cur.size] + 1.0 / diff
            col += 1
            prev, cur = cur, nxt
            if not np.all(np.isfinite(cur)):
                break
            if col % 2 == 0 and cur.size >= 2:
                err = abs(cur[-1] - cur[-2])
                if err < best_err:
                    best, best_err = complex(cur[-1]), err
    return best, best_err


def integrate_oscillatory_semiinfinite(integrand, oscillation_scale,
                                       spec=DEFAULT_QUADRATURE, breakpoints=()):
    """Integrate ``integrand`` over ``(0, inf)``.

    Parameters
    ----------
    integrand : callable
        Vectorised map from a real array to a (complex) array.
    oscillation_scale : float
        Asymptotic angular frequency of the integrand; the tail is partitioned
        every ``pi / oscillation_scale``.  For non-oscillating decaying
        integrands pass the decay rate.
    spec : QuadratureSpec
    breakpoints : sequence of float
        Interior points where the integrand is singular or has a kink (e.g.
        Sommerfeld branch points).  Everything up to the largest breakpoint
        is integrated adaptively before the partitioned tail.

    Raises
    ------
    QuadratureError
        If the extrapolated sequence does not settle within
        ``spec.max_segments`` segments.
    """
    if not (oscillation_scale > 0 and math.isfinite(oscillation_scale)):
        raise ValueError("oscillation_scale must be positive and finite")
    rtol = spec.relative_tolerance
    n = spec.nodes_per_segment
    step = math.pi / oscillation_scale

    total = 0j
    l1 = 0.0
    edge = 0.0
    for bp in sorted(float(b) for b in breakpoints if 0 < b < math.inf):
        if bp <= edge:
            continue
        val, mass = integrate_interval(integrand, edge, bp, n, 0.1 * rtol)
        total += val
        l1 += mass
        edge = bp

    # first tail point: next multiple of the half period, not too close
    nxt = math.ceil(edge / step) * step
    if nxt - edge < 0.25 * step:
        nxt += step
    val, mass = integrate_interval(integrand, edge, nxt, n, 0.1 * rtol)
    total += val
    l1 += mass
    sums = [total]
    estimates = []
    small_run = 0
    a = nxt
    for _ in range(spec.max_segments):
        b = a + step
        val, mass = integrate_interval(integrand, a, b, n, 0.1 * rtol,
                                       clustered=False)
        a = b
        total += val
        l1 += mass
        sums.append(total)
        floor = 1e3 * np.finfo(float).eps * l1
        if l1 == 0.0:
            return 0j
        # contributions that no longer move the sum: tail has died out
        if abs(val) <= 0.01 * rtol * max(abs(total), floor):
            small_run += 1
            if small_run >= 2:
                return complex(total)
        else:
            small_run = 0
        if len(sums) < 4:
            continue
        est, err = wynn_epsilon(sums[-_WINDOW:])
        estimates.append(est)
        if len(estimates) < 3:
            continue
        scale = max(abs(est), floor)
        drift = max(abs(est - estimates[-2]), abs(est - estimates[-3]))
        if err <= rtol * scale and drift <= rtol * scale:
            return complex(est)
    last = estimates[-1] if estimates else total
    raise QuadratureError(
        f"no convergence after {spec.max_segments} segments "
        f"(last estimate {last!r}); check oscillation_scale")
