"""Pure-Python inner loops; reference implementation of ``_ckernels``.

Every function here has a twin with the same signature in the compiled
module. :mod:`heunreg.kernels` picks one at import time.
"""

import numpy as np

EPS = 2.220446049250313e-16
MIN_TERMS = 20
SMALL_RUN = 4


def geometric_tail(mag, prev):
    """Tail bound for a series whose last two term moduli are ``prev, mag``."""
    if mag == 0.0:
        return 0.0
    if prev == 0.0:
        return mag
    r = min(mag / prev, 0.99)
    return mag * max(r / (1.0 - r), 1.0)


def recurrence_fill(a, q, alpha, beta, gamma, delta, eps, out, start,
                    log_const=0j, aux=None):
    """Fill ``out[start:]`` in place from the Frobenius recurrence at z = 0.

    P_n x_n = Q_n x_{n-1} + R_n x_{n-2}
              + log_const * (S_n y_n + T_n y_{n-1} + U_n y_{n-2})

    where ``y`` is ``aux``. Entries with negative index are zero.
    """
    N = len(out) - 1
    use_log = aux is not None and log_const != 0
    eaD = eps + a * delta
    for n in range(start, N + 1):
        P = a * n * (gamma + (n - 1))
        Q = q + (n - 1) * ((a + 1) * (gamma + (n - 2)) + eaD)
        R = -(n - 2 + alpha) * (n - 2 + beta)
        x1 = out[n - 1] if n >= 1 else 0j
        x2 = out[n - 2] if n >= 2 else 0j
        rhs = Q * x1 + R * x2
        if use_log:
            S = a * ((1 - 2 * n) - gamma)
            T = eaD + (a + 1) * (gamma + (2 * n - 3))
            U = 4 - 2 * n - alpha - beta
            y0 = aux[n]
            y1 = aux[n - 1] if n >= 1 else 0j
            y2 = aux[n - 2] if n >= 2 else 0j
            rhs += log_const * (S * y0 + T * y1 + U * y2)
        out[n] = rhs / P
    return out


def series_sum(coeffs, z, tol, min_terms=MIN_TERMS):
    """Sum ``sum c_n z^n`` and its derivative under the truncation rule.

    Stops once ``n * |c_n z^n| <= tol * scale`` for four consecutive n past
    ``min_terms``. Returns ``(value, derivative, err_est, n_used, converged)``.
    """
    S = 0j
    dS = 0j
    zn = 1 + 0j
    zn1 = 0j
    run = 0
    absum = 0.0
    mag = 0.0
    prev = 0.0
    n_used = len(coeffs)
    converged = False
    for n in range(len(coeffs)):
        c = coeffs[n]
        t = c * zn
        S += t
        if n:
            dS += n * c * zn1
        at = abs(t)
        absum += at
        scale = max(abs(S), abs(z * dS))
        if at * max(n, 1) <= tol * scale:
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
    err = geometric_tail(mag, prev) + EPS * absum
    return S, dS, err, n_used, converged


def _local_poly(a, q, alpha, beta, gamma, delta, eps, z0):
    sgde = gamma + delta + eps
    lin = gamma * (1 + a) + a * delta + eps
    ab = alpha * beta
    return (
        z0 * (z0 - 1) * (z0 - a),
        3 * z0 * z0 - 2 * (1 + a) * z0 + a,
        3 * z0 - (1 + a),
        sgde * z0 * z0 - lin * z0 + gamma * a,
        2 * sgde * z0 - lin,
        sgde,
        ab * z0 - q,
        ab,
    )


def taylor_coeffs(a, q, alpha, beta, gamma, delta, eps, z0, h0, h1, N):
    """Taylor coefficients h_0..h_N of the solution with h_0 = H(z0), h_1 = H'(z0)."""
    p30, p31, p32, p20, p21, p22, p10, p11 = _local_poly(
        a, q, alpha, beta, gamma, delta, eps, z0)
    h = np.zeros(N + 1, dtype=complex)
    h[0] = h0
    if N >= 1:
        h[1] = h1
    for n in range(0, N - 1):
        A = p31 * (n + 1) * n + p20 * (n + 1)
        B = p32 * n * (n - 1) + p21 * n + p10
        C = (n - 1) * (n - 2) + p22 * (n - 1) + p11
        hm1 = h[n - 1] if n >= 1 else 0j
        h[n + 2] = -(A * h[n + 1] + B * h[n] + C * hm1) / (p30 * (n + 2) * (n + 1))
    return h


def continue_path(a, q, alpha, beta, gamma, delta, eps, centers, H, dH, tol, cap):
    """Carry ``(H, H')`` through the chain of Taylor elements at ``centers``.

    Each element is summed in the scaled variable g_m = h_m u^m, u being the
    hop to the next center, which keeps the recurrence free of overflow.
    Returns ``(H, dH, rel_err, n_elements, converged)``.
    """
    rel = 0.0
    nelem = 0
    for k in range(len(centers) - 1):
        z0 = centers[k]
        u = centers[k + 1] - z0
        if u == 0:
            continue
        p30, p31, p32, p20, p21, p22, p10, p11 = _local_poly(
            a, q, alpha, beta, gamma, delta, eps, z0)
        u2 = u * u
        u3 = u2 * u
        gm1 = 0j
        g0 = H
        g1 = dH * u
        val = g0 + g1
        der = g1
        absum = abs(g0) + abs(g1)
        prev = abs(g0)
        mag = abs(g1)
        run = 0
        converged = False
        for n in range(cap):
            m = n + 2
            A = p31 * (n + 1) * n + p20 * (n + 1)
            B = p32 * n * (n - 1) + p21 * n + p10
            C = (n - 1) * (n - 2) + p22 * (n - 1) + p11
            g2 = -(A * u * g1 + B * u2 * g0 + C * u3 * gm1) / (p30 * (n + 2) * (n + 1))
            val += g2
            der += m * g2
            at = abs(g2)
            absum += at
            prev = mag
            mag = at
            scale = max(abs(val), abs(der))
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
        scale = max(abs(val), abs(der))
        if scale > 0.0:
            rel += (geometric_tail(mag, prev) + EPS * absum) / scale
        nelem += 1
    return H, dH, rel, nelem, True
