# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_kernels_py`` for the reference algorithms."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, log, cos, sin, atan2, rint, M_PI, NAN, INFINITY

cnp.import_array()

cdef double SERIES_LIMIT = 5.0
cdef double ASYMPTOTIC_LIMIT = 25.0
cdef double EULER_GAMMA = 0.57721566490153286061
cdef double TWO_OVER_PI = 2.0 / M_PI


cdef void _series(double x, double* out) noexcept nogil:
    cdef double q = -0.25 * x * x
    cdef double j0 = 1.0, j1 = 1.0, t0 = 1.0, t1 = 1.0
    cdef double h = 0.0, psi1, psi2
    cdef double s0 = -2.0 * EULER_GAMMA
    cdef double s1 = -2.0 * EULER_GAMMA + 1.0
    cdef int k
    for k in range(1, 34):
        t0 = t0 * q / (k * k)
        t1 = t1 * q / (k * (k + 1))
        j0 += t0
        j1 += t1
        h += 1.0 / k
        psi1 = -EULER_GAMMA + h
        psi2 = psi1 + 1.0 / (k + 1)
        s0 += 2.0 * psi1 * t0
        s1 += (psi1 + psi2) * t1
    cdef double half = 0.5 * x
    cdef double lh = log(half)
    j1 = half * j1
    out[0] = j0
    out[1] = j1
    out[2] = TWO_OVER_PI * lh * j0 - s0 / M_PI
    out[3] = -TWO_OVER_PI / x + TWO_OVER_PI * lh * j1 - half * s1 / M_PI


cdef void _miller(double x, double* out) noexcept nogil:
    cdef int start = 2 * ((<int>x + 20 + <int>(3.0 * sqrt(x))) // 2)
    cdef double inv = 2.0 / x
    cdef double j_next = 0.0, j_cur = 1e-30, j_prev
    cdef double norm = 0.0, ysum0 = 0.0, ysum1 = 0.0, j_odd_above = 0.0
    cdef double j1 = 0.0, sign, total, lg
    cdef int n, k
    for n in range(start, 0, -1):
        if n % 2 == 0:
            k = n // 2
            sign = 1.0 if k % 2 == 0 else -1.0
            norm += j_cur
            ysum0 += sign * j_cur / k
            j_odd_above = j_next
        else:
            k = (n + 1) // 2
            sign = 1.0 if k % 2 == 0 else -1.0
            ysum1 += sign * (j_cur - j_odd_above) / k
        j_prev = n * inv * j_cur - j_next
        j_next = j_cur
        j_cur = j_prev
        if fabs(j_cur) > 1e200:
            j_cur *= 1e-200
            j_next *= 1e-200
            norm *= 1e-200
            ysum0 *= 1e-200
            ysum1 *= 1e-200
            j_odd_above *= 1e-200
        if n == 1:
            j1 = j_next
    total = j_cur + 2.0 * norm
    out[0] = j_cur / total
    out[1] = j1 / total
    ysum0 /= total
    ysum1 /= total
    lg = log(0.5 * x) + EULER_GAMMA
    out[2] = TWO_OVER_PI * lg * out[0] - 2.0 * TWO_OVER_PI * ysum0
    out[3] = -TWO_OVER_PI * out[0] / x + TWO_OVER_PI * lg * out[1] + TWO_OVER_PI * ysum1


cdef void _asymptotic(double x, double* out) noexcept nogil:
    cdef double amp = sqrt(TWO_OVER_PI / x)
    cdef double eight_x = 8.0 * x
    cdef double mu, p, q, term, mag, prev, chi, c, s
    cdef int order, k
    for order in range(2):
        mu = 4.0 * order * order
        p = 1.0
        q = 0.0
        term = 1.0
        prev = INFINITY
        for k in range(1, 60):
            term = term * (mu - (2 * k - 1) * (2 * k - 1)) / (k * eight_x)
            mag = fabs(term)
            if mag >= prev:
                break
            prev = mag
            if k % 2 == 1:
                q += term if (k // 2) % 2 == 0 else -term
            else:
                p += term if (k // 2) % 2 == 0 else -term
            if mag < 1e-18:
                break
        chi = x - (0.5 * order + 0.25) * M_PI
        c = cos(chi)
        s = sin(chi)
        out[order] = amp * (p * c - q * s)
        out[2 + order] = amp * (p * s + q * c)


cdef void _eval(double x, double* out) noexcept nogil:
    cdef double ax = fabs(x)
    if ax == 0.0:
        out[0] = 1.0
        out[1] = 0.0
        out[2] = -INFINITY
        out[3] = -INFINITY
        return
    if ax < SERIES_LIMIT:
        _series(ax, out)
    elif ax < ASYMPTOTIC_LIMIT:
        _miller(ax, out)
    else:
        _asymptotic(ax, out)
    if x < 0.0:
        out[1] = -out[1]
        out[2] = NAN
        out[3] = NAN


def bessel_j01y01(x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(
        np.asarray(x, dtype=np.float64).ravel())
    cdef Py_ssize_t n = xs.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=2] res = np.empty((4, n), dtype=np.float64)
    cdef double buf[4]
    with nogil:
        for i in range(n):
            _eval(xs[i], buf)
            res[0, i] = buf[0]
            res[1, i] = buf[1]
            res[2, i] = buf[2]
            res[3, i] = buf[3]
    shape = np.shape(x)
    return (res[0].reshape(shape), res[1].reshape(shape),
            res[2].reshape(shape), res[3].reshape(shape))


def bessel_j0(x):
    return bessel_j01y01(x)[0]


def bessel_j1(x):
    return bessel_j01y01(x)[1]


def dpsk_decide(r_ref, r_data, long order):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.ascontiguousarray(
        np.asarray(r_ref, dtype=np.complex128).ravel())
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] b = np.ascontiguousarray(
        np.asarray(r_data, dtype=np.complex128).ravel())
    cdef Py_ssize_t n = a.shape[0], i
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(n, dtype=np.int64)
    cdef double step = 2.0 * M_PI / order
    cdef double re, im, delta
    cdef long idx
    with nogil:
        for i in range(n):
            # b * conj(a)
            re = b[i].real * a[i].real + b[i].imag * a[i].imag
            im = b[i].imag * a[i].real - b[i].real * a[i].imag
            # BPSK and QPSK sectors need no arctangent; exact boundaries
            # (signed zeros, |re| == |im|) go through atan2 to match numpy
            if re == 0 or im == 0 or fabs(re) == fabs(im):
                pass
            elif order == 2:
                out[i] = 0 if re > 0 else 1
                continue
            elif order == 4:
                if fabs(re) > fabs(im):
                    out[i] = 0 if re > 0 else 2
                else:
                    out[i] = 1 if im > 0 else 3
                continue
            delta = atan2(im, re)
            idx = <long>rint(delta / step) % order
            if idx < 0:
                idx += order
            out[i] = idx
    return out.reshape(np.shape(r_ref))


def count_errors(sent, detected, long order):
    cdef cnp.ndarray[cnp.int64_t, ndim=1] s = np.ascontiguousarray(
        np.asarray(sent, dtype=np.int64).ravel())
    cdef cnp.ndarray[cnp.int64_t, ndim=1] d = np.ascontiguousarray(
        np.asarray(detected, dtype=np.int64).ravel())
    cdef Py_ssize_t n = s.shape[0], i
    cdef long sym = 0, bits = 0
    cdef unsigned long diff
    with nogil:
        for i in range(n):
            if s[i] != d[i]:
                sym += 1
                diff = <unsigned long>((s[i] ^ (s[i] >> 1)) ^ (d[i] ^ (d[i] >> 1)))
                while diff:
                    bits += diff & 1
                    diff >>= 1
    return int(sym), int(bits)
