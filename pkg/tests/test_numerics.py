import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest
from scipy import special

from mibc import _kernels_py
from mibc._backend import COMPILED, kernels
from mibc.numerics import (DEFAULT_QUADRATURE, QuadratureError, QuadratureSpec, bessel_j,
                           bessel_y, hankel1, integrate_oscillatory_semiinfinite, wynn_epsilon)

GRID = np.concatenate([np.linspace(1e-6, 5, 400), np.linspace(4.9, 25.1, 600),
                       np.geomspace(24, 1e4, 400)])


def test_bessel_against_scipy():
    j0, j1, y0, y1 = kernels.bessel_j01y01(GRID)
    for ours, ref in ((j0, special.j0(GRID)), (j1, special.j1(GRID)),
                      (y0, special.y0(GRID)), (y1, special.y1(GRID))):
        assert np.max(np.abs(ours - ref) / np.maximum(1, np.abs(ref))) < 5e-14


def test_bessel_simple_values():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
    assert abs(bessel_j(0, 2.404825557695773)) < 1e-10


def test_bessel_parity_for_negative_argument():
    x = np.linspace(0.1, 40, 50)
    np.testing.assert_array_equal(bessel_j(0, -x), bessel_j(0, x))
    np.testing.assert_array_equal(bessel_j(1, -x), -bessel_j(1, x))


def test_hankel_reference_values():
    assert hankel1(0, 1.0) == pytest.approx(0.7651976866 + 0.0882569642j, abs=1e-10)
    assert hankel1(1, 1.0) == pytest.approx(0.4400505857 - 0.7812128213j, abs=1e-10)


def test_hankel_small_argument():
    h = hankel1(0, 1e-12)
    assert h.real == pytest.approx(1.0, abs=1e-12)
    assert h.imag < -15


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_hankel_domain(x):
    with pytest.raises(ValueError):
        hankel1(0, x)
    with pytest.raises(ValueError):
        bessel_y(1, x)


def test_bad_order():
    with pytest.raises(ValueError):
        bessel_j(2, 1.0)


@settings(max_examples=300, deadline=None)
@given(st.floats(0.1, 100.0))
def test_wronskian(x):
    j0, j1, y0, y1 = kernels.bessel_j01y01(np.array([x]))
    assert abs(j1[0] * y0[0] - j0[0] * y1[0] - 2 / (math.pi * x)) <= 1e-9 * 2 / (math.pi * x)


@pytest.mark.skipif(not COMPILED, reason="compiled kernels not built")
def test_backends_agree():
    from mibc import _kernels
    x = np.concatenate([-GRID[::7], [0.0], GRID])
    for a, b in zip(_kernels.bessel_j01y01(x), _kernels_py.bessel_j01y01(x)):
        fin = np.isfinite(b)
        np.testing.assert_array_equal(np.isfinite(a), fin)
        assert np.max(np.abs(a[fin] - b[fin]) / np.maximum(1, np.abs(b[fin]))) < 1e-14
    rng = np.random.default_rng(1)
    r1 = rng.normal(size=500) + 1j * rng.normal(size=500)
    r2 = rng.normal(size=500) + 1j * rng.normal(size=500)
    for m in (2, 4, 8):
        d1 = _kernels.dpsk_decide(r1, r2, m)
        np.testing.assert_array_equal(d1, _kernels_py.dpsk_decide(r1, r2, m))
        sent = rng.integers(0, m, 500)
        assert _kernels.count_errors(sent, d1, m) == _kernels_py.count_errors(sent, d1, m)


@pytest.mark.skipif(not COMPILED, reason="compiled kernels not built")
@pytest.mark.parametrize("m", [2, 4, 8])
def test_backends_agree_on_decision_boundaries(m):
    from mibc import _kernels
    z = [0j, complex(-0.0, 0.0), complex(-0.0, -0.0), complex(0.0, -0.0), 1 + 1j, -1 + 1j,
         -1 - 1j, 1 - 1j, complex(-1, 0.0), complex(-1, -0.0), 1j, -1j]
    r2 = np.array(z)
    r1 = np.ones_like(r2)
    np.testing.assert_array_equal(_kernels.dpsk_decide(r1, r2, m),
                                  _kernels_py.dpsk_decide(r1, r2, m))


# quadrature ---------------------------------------------------------------

def test_integral_j1_over_s():
    v = integrate_oscillatory_semiinfinite(lambda s: bessel_j(1, s) / np.where(s == 0, 1, s), 1.0)
    assert v == pytest.approx(1.0, abs=1e-8)


def test_integral_exponential():
    v = integrate_oscillatory_semiinfinite(lambda s: np.exp(-s), 1.0)
    assert v == pytest.approx(1.0, abs=1e-9)


def test_integral_laplace_j0():
    v = integrate_oscillatory_semiinfinite(lambda s: bessel_j(0, s) * np.exp(-s), 1.0)
    assert v == pytest.approx(1 / math.sqrt(2), abs=1e-9)


def test_integral_sommerfeld_identity():
    # int J0(k r) e^{-k z} dk = 1 / sqrt(r^2 + z^2)
    r, z = 0.4, 0.05
    v = integrate_oscillatory_semiinfinite(lambda k: bessel_j(0, k * r) * np.exp(-k * z), r)
    assert v == pytest.approx(1 / math.hypot(r, z), rel=1e-8)


def test_divergent_integrand_raises():
    spec = QuadratureSpec(max_segments=60)
    with pytest.raises(QuadratureError):
        integrate_oscillatory_semiinfinite(lambda s: s * np.cos(s) ** 2, 1.0, spec)


@pytest.mark.parametrize("kwargs", [dict(relative_tolerance=0), dict(max_segments=0),
                                    dict(nodes_per_segment=1)])
def test_quadrature_spec_validation(kwargs):
    with pytest.raises(ValueError):
        QuadratureSpec(**kwargs)


def test_wynn_accelerates_alternating_series():
    terms = [(-1) ** k / (k + 1) for k in range(20)]
    est, err = wynn_epsilon(np.cumsum(terms))
    assert est == pytest.approx(math.log(2), abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.5, 4.0), st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(a, b, alpha, beta):
    spec = DEFAULT_QUADRATURE

    def f(s):
        return bessel_j(0, a * s) * np.exp(-0.3 * s)

    def g(s):
        return bessel_j(1, b * s) * s * np.exp(-s)

    scale = min(a, b)
    fi = integrate_oscillatory_semiinfinite(f, scale, spec)
    gi = integrate_oscillatory_semiinfinite(g, scale, spec)
    both = integrate_oscillatory_semiinfinite(lambda s: alpha * f(s) + beta * g(s), scale, spec)
    ref = alpha * fi + beta * gi
    assert abs(both - ref) <= 10 * spec.relative_tolerance * max(abs(alpha * fi) + abs(beta * gi), 1e-300) + 1e-15


@pytest.mark.parametrize("n", [16, 32, 48])
def test_node_refinement_stable(n):
    base = integrate_oscillatory_semiinfinite(
        lambda s: bessel_j(0, 0.5 * s) * bessel_j(1, 0.02 * s) * np.exp(-0.01 * s), 0.5)
    fine = integrate_oscillatory_semiinfinite(
        lambda s: bessel_j(0, 0.5 * s) * bessel_j(1, 0.02 * s) * np.exp(-0.01 * s), 0.5,
        QuadratureSpec(nodes_per_segment=n))
    assert abs(fine - base) <= DEFAULT_QUADRATURE.relative_tolerance * abs(base)
