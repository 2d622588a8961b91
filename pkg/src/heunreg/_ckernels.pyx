# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Mirrors ``_pykernels`` function for function."""

import numpy as np

cdef double EPS = 2.220446049250313e-16
cdef int MIN_TERMS = 20
cdef int SMALL_RUN = 4


cdef inline double cmod(double complex z) nogil:
    return abs(z)


cpdef double geometric_tail(double mag, double prev):
    cdef double r
    if mag == 0.0:
        return 0.0
    if prev == 0.0:
        return mag
    r = mag / prev
    if r > 0.99:
        r = 0.99
    r = r / (1.0 - r)
    if r < 1.0:
        r = 1.0
    return mag * r


def recurrence_fill(double complex a, double complex q, double complex alpha,
                    double complex beta, double complex gamma,
                    double complex delta, double complex eps,
                    double complex[:] out, Py_ssize_t start,
                    double complex log_const=0, aux=None):
    cdef Py_ssize_t N = out.shape[0] - 1
    cdef Py_ssize_t n
    cdef double complex eaD = eps + a * delta
    cdef double complex P, Q, R, S, T, U, x1, x2, y0, y1, y2, rhs
    cdef const double complex[:] y
    cdef bint use_log = aux is not None and log_const != 0
    if use_log:
        y = aux
    for n in range(start, N + 1):
        P = a * n * (gamma + (n - 1))
        Q = q + (n - 1) * ((a + 1) * (gamma + (n - 2)) + eaD)
        R = -(n - 2 + alpha) * (n - 2 + beta)
        x1 = out[n - 1] if n >= 1 else 0
        x2 = out[n - 2] if n >= 2 else 0
        rhs = Q * x1 + R * x2
        if use_log:
            S = a * ((1 - 2 * n) - gamma)
            T = eaD + (a + 1) * (gamma + (2 * n - 3))
            U = 4 - 2 * n - alpha - beta
            y0 = y[n]
            y1 = y[n - 1] if n >= 1 else 0
            y2 = y[n - 2] if n >= 2 else 0
            rhs = rhs + log_const * (S * y0 + T * y1 + U * y2)
        out[n] = rhs / P
    return np.asarray(out)


def series_sum(const double complex[:] coeffs, double complex z, double tol,
               Py_ssize_t min_terms=MIN_TERMS):
    cdef double complex S = 0, dS = 0, zn = 1, zn1 = 0, c, t
    cdef Py_ssize_t n, L = coeffs.shape[0], n_used = coeffs.shape[0]
    cdef int run = 0
    cdef double absum = 0.0, mag = 0.0, prev = 0.0, at, scale, w
    cdef bint converged = False
    for n in range(L):
        c = coeffs[n]
        t = c * zn
        S = S + t
        if n:
            dS = dS + n * c * zn1
        at = cmod(t)
        absum += at
        scale = cmod(S)
        w = cmod(z * dS)
        if w > scale:
            scale = w
        if at * (n if n > 1 else 1) <= tol * scale:
            run += 1
        else:
            run = 0
        prev = mag
        mag = at
        zn1 = zn
        zn = zn * z
        if run >= SMALL_RUN and n > min_terms:
            converged = True
            n_used = n + 1
            break
    return S, dS, geometric_tail(mag, prev) + EPS * absum, n_used, converged


def taylor_coeffs(double complex a, double complex q, double complex alpha,
                  double complex beta, double complex gamma,
                  double complex delta, double complex eps, double complex z0,
                  double complex h0, double complex h1, Py_ssize_t N):
    cdef double complex sgde = gamma + delta + eps
    cdef double complex lin = gamma * (1 + a) + a * delta + eps
    cdef double complex ab = alpha * beta
    cdef double complex p30 = z0 * (z0 - 1) * (z0 - a)
    cdef double complex p31 = 3 * z0 * z0 - 2 * (1 + a) * z0 + a
    cdef double complex p32 = 3 * z0 - (1 + a)
    cdef double complex p20 = sgde * z0 * z0 - lin * z0 + gamma * a
    cdef double complex p21 = 2 * sgde * z0 - lin
    cdef double complex p22 = sgde
    cdef double complex p10 = ab * z0 - q
    cdef double complex p11 = ab
    cdef double complex A, B, C, hm1
    cdef Py_ssize_t n
    out = np.zeros(N + 1, dtype=complex)
    cdef double complex[:] h = out
    h[0] = h0
    if N >= 1:
        h[1] = h1
    for n in range(0, N - 1):
        A = p31 * (n + 1) * n + p20 * (n + 1)
        B = p32 * n * (n - 1) + p21 * n + p10
        C = (n - 1) * (n - 2) + p22 * (n - 1) + p11
        hm1 = h[n - 1] if n >= 1 else 0
        h[n + 2] = -(A * h[n + 1] + B * h[n] + C * hm1) / (p30 * (n + 2) * (n + 1))
    return out


def continue_path(double complex a, double complex q, double complex alpha,
                  double complex beta, double complex gamma,
                  double complex delta, double complex eps,
                  const double complex[:] centers, double complex H,
                  double complex dH, double tol, Py_ssize_t cap):
    cdef double complex sgde = gamma + delta + eps
    cdef double complex lin = gamma * (1 + a) + a * delta + eps
    cdef double complex ab = alpha * beta
    cdef double complex z0, u, u2, u3, p30, p31, p32, p20, p21, p10
    cdef double complex gm1, g0, g1, g2, val, der, A, B, C
    cdef double rel = 0.0, absum, prev, mag, at, scale, w
    cdef Py_ssize_t k, n, m, nelem = 0
    cdef int run
    cdef bint converged
    for k in range(centers.shape[0] - 1):
        z0 = centers[k]
        u = centers[k + 1] - z0
        if u == 0:
            continue
        p30 = z0 * (z0 - 1) * (z0 - a)
        p31 = 3 * z0 * z0 - 2 * (1 + a) * z0 + a
        p32 = 3 * z0 - (1 + a)
        p20 = sgde * z0 * z0 - lin * z0 + gamma * a
        p21 = 2 * sgde * z0 - lin
        p10 = ab * z0 - q
        u2 = u * u
        u3 = u2 * u
        gm1 = 0
        g0 = H
        g1 = dH * u
        val = g0 + g1
        der = g1
        absum = cmod(g0) + cmod(g1)
        prev = cmod(g0)
        mag = cmod(g1)
        run = 0
        converged = False
        for n in range(cap):
            m = n + 2
            A = p31 * (n + 1) * n + p20 * (n + 1)
            B = p32 * n * (n - 1) + p21 * n + p10
            C = (n - 1) * (n - 2) + sgde * (n - 1) + ab
            g2 = -(A * u * g1 + B * u2 * g0 + C * u3 * gm1) / (p30 * (n + 2) * (n + 1))
            val = val + g2
            der = der + m * g2
            at = cmod(g2)
            absum += at
            prev = mag
            mag = at
            scale = cmod(val)
            w = cmod(der)
            if w > scale:
                scale = w
            if at * m <= tol * scale:
                run += 1
            else:
                run = 0
            if run >= SMALL_RUN and m > MIN_TERMS:
                converged = True
                break
            gm1 = g0
            g0 = g1
            g1 = g2
        if not converged:
            return H, dH, rel, nelem, False
        H = val
        dH = der / u
        scale = cmod(val)
        w = cmod(der)
        if w > scale:
            scale = w
        if scale > 0.0:
            rel += (geometric_tail(mag, prev) + EPS * absum) / scale
        nelem += 1
    return H, dH, rel, nelem, True
