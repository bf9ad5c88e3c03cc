# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Semantics mirror the NumPy fallback module exactly; the double-double
element operations are bit-identical because both backends perform the same
float64 operation sequence (no FMA, no reassociation).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double SPLIT = 134217729.0  # 2**27 + 1


cdef inline void _two_sum(double a, double b, double* s, double* e) nogil:
    cdef double t, bb
    t = a + b
    bb = t - a
    e[0] = (a - (t - bb)) + (b - bb)
    s[0] = t


cdef inline void _two_prod(double a, double b, double* p, double* e) nogil:
    cdef double c, ah, al, bh, bl, t
    t = a * b
    c = SPLIT * a
    ah = c - (c - a)
    al = a - ah
    c = SPLIT * b
    bh = c - (c - b)
    bl = b - bh
    e[0] = ((ah * bh - t) + ah * bl + al * bh) + al * bl
    p[0] = t


cdef inline void _dd_add(double xh, double xl, double yh, double yl,
                         double* rh, double* rl) nogil:
    cdef double sh, se
    _two_sum(xh, yh, &sh, &se)
    se = se + (xl + yl)
    _two_sum(sh, se, rh, rl)


cdef inline void _dd_mul(double xh, double xl, double yh, double yl,
                         double* rh, double* rl) nogil:
    cdef double ph, pe
    _two_prod(xh, yh, &ph, &pe)
    pe = pe + (xh * yl + xl * yh)
    _two_sum(ph, pe, rh, rl)


def dd_axpy(const double[::1] acc_h, const double[::1] acc_l, double ch, double cl,
            const double[::1] gh, const double[::1] gl):
    """Return acc + c * g in dd, with scalar dd c and vector dd g."""
    cdef Py_ssize_t n = acc_h.shape[0]
    cdef cnp.ndarray[double, ndim=1] out_h = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] out_l = np.empty(n)
    cdef double th, tl, rh, rl
    cdef Py_ssize_t i
    for i in range(n):
        _dd_mul(gh[i], gl[i], ch, cl, &th, &tl)
        _dd_add(acc_h[i], acc_l[i], th, tl, &rh, &rl)
        out_h[i] = rh
        out_l[i] = rl
    return out_h, out_l


def dd_shifted_residual(const double[:, ::1] q, double mu_h, double mu_l,
                        const double[::1] xh, const double[::1] xl, const double[::1] f):
    """Residual f - (mu*x - q @ x) accumulated in dd, collapsed to float64."""
    cdef Py_ssize_t n = q.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n)
    cdef double rh, rl, mh, ml, ph, pe
    cdef Py_ssize_t i, j
    for i in range(n):
        _dd_mul(mu_h, mu_l, xh[i], xl[i], &mh, &ml)
        _dd_add(f[i], 0.0, -mh, -ml, &rh, &rl)
        for j in range(n):
            _two_prod(q[i, j], xh[j], &ph, &pe)
            pe = pe + q[i, j] * xl[j]
            _dd_add(rh, rl, ph, pe, &rh, &rl)
        out[i] = rh + rl
    return out


def toeplitz_matvec_direct(const double[::1] k, F):
    """Symmetric Toeplitz matvec: G[i] = sum_j k[|i-j|] * F[j]."""
    cdef cnp.ndarray[double, ndim=2] Fb
    squeeze = False
    Fa = np.asarray(F, dtype=float)
    if Fa.ndim == 1:
        Fb = np.ascontiguousarray(Fa[:, None])
        squeeze = True
    else:
        Fb = np.ascontiguousarray(Fa)
    cdef Py_ssize_t n = k.shape[0]
    cdef Py_ssize_t p = Fb.shape[1]
    cdef cnp.ndarray[double, ndim=2] G = np.zeros((n, p))
    cdef double kv
    cdef Py_ssize_t i, j, c, d
    for i in range(n):
        for j in range(n):
            d = i - j if i >= j else j - i
            kv = k[d]
            for c in range(p):
                G[i, c] += kv * Fb[j, c]
    return G[:, 0] if squeeze else G
