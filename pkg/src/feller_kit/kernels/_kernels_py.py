"""NumPy fallback implementations of the hot kernels.

Double-double (dd) values are pairs (hi, lo) of float64 arrays or scalars
with hi = fl(hi + lo). The error-free transforms below implement Dekker's
splitting explicitly, so the results do not depend on FMA availability.
All functions are elementwise-vectorized and allocate their outputs.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "two_sum",
    "two_prod",
    "dd_add",
    "dd_mul",
    "dd_div_d",
    "dd_axpy",
    "dd_shifted_residual",
    "toeplitz_matvec_direct",
    "toeplitz_matvec_fft",
]

# Veltkamp splitting constant for binary64: 2**27 + 1.
_SPLIT = 134217729.0


def two_sum(a, b):
    """Exact sum: returns (s, e) with s = fl(a+b) and a + b = s + e."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def _split(a):
    c = _SPLIT * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    """Exact product: returns (p, e) with p = fl(a*b) and a*b = p + e."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def dd_add(xh, xl, yh, yl):
    """Double-double addition with a single renormalization pass."""
    sh, se = two_sum(xh, yh)
    se = se + (xl + yl)
    return two_sum(sh, se)


def dd_mul(xh, xl, yh, yl):
    """Double-double multiplication."""
    ph, pe = two_prod(xh, yh)
    pe = pe + (xh * yl + xl * yh)
    return two_sum(ph, pe)


def dd_div_d(xh, xl, d):
    """Divide a double-double by a plain double."""
    q1 = xh / d
    ph, pe = two_prod(q1, d)
    r = ((xh - ph) - pe) + xl
    return two_sum(q1, r / d)


def dd_axpy(acc_h, acc_l, ch, cl, gh, gl):
    """Return acc + c * g in dd, with scalar dd c and vector dd g."""
    th, tl = dd_mul(gh, gl, ch, cl)
    return dd_add(acc_h, acc_l, th, tl)


def dd_shifted_residual(q, mu_h, mu_l, xh, xl, f):
    """Residual f - (mu*x - q @ x) accumulated in dd, collapsed to float64.

    q is a dense (n, n) matrix, mu a dd scalar, x a dd vector, f a float64
    vector. Used for iterative refinement of shifted solves.
    """
    n = q.shape[0]
    # -(mu * x) in dd
    mh, ml = dd_mul(np.full(n, mu_h), np.full(n, mu_l), xh, xl)
    rh, rl = dd_add(f, np.zeros(n), -mh, -ml)
    # + q @ x, column by column, exact products
    for j in range(n):
        col = q[:, j]
        ph, pe = two_prod(col, xh[j])
        pe = pe + col * xl[j]
        rh, rl = dd_add(rh, rl, ph, pe)
    return rh + rl


def toeplitz_matvec_direct(k, F):
    """Symmetric Toeplitz matvec: G[i] = sum_j k[|i-j|] * F[j].

    k is the first column (length n), F a vector or (n, p) block.
    """
    k = np.asarray(k, dtype=float)
    F = np.asarray(F, dtype=float)
    n = k.shape[0]
    idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    return k[idx] @ F


def toeplitz_matvec_fft(k, F):
    """Same contract as toeplitz_matvec_direct, via circulant embedding."""
    k = np.asarray(k, dtype=float)
    F = np.asarray(F, dtype=float)
    n = k.shape[0]
    if n == 1:
        return k[0] * F
    m = 1
    while m < 2 * n - 1:
        m *= 2
    c = np.zeros(m)
    c[:n] = k
    c[m - n + 1 :] = k[1:][::-1]
    kf = np.fft.rfft(c)
    squeeze = F.ndim == 1
    Fb = F[:, None] if squeeze else F
    Ff = np.fft.rfft(Fb, n=m, axis=0)
    G = np.fft.irfft(Ff * kf[:, None], n=m, axis=0)[:n]
    return G[:, 0] if squeeze else G
