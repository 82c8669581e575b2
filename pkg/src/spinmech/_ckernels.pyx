# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; same signatures as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, sqrt, fabs

cnp.import_array()

cdef double[7] PP = [7.96936729297347051624e-4, 8.28352392107440799803e-2,
                     1.23953371646414299388e0, 5.44725003058768775090e0,
                     8.74716500199817011941e0, 5.30324038235394892183e0,
                     9.99999999999999997821e-1]
cdef double[7] PQ = [9.24408810558863637013e-4, 8.56288474354474431428e-2,
                     1.25352743901058953537e0, 5.47097740330417105182e0,
                     8.76190883237069594232e0, 5.30605288235394617618e0,
                     1.00000000000000000218e0]
cdef double[8] QP = [-1.13663838898469149931e-2, -1.28252718670509318512e0,
                     -1.95539544257735972385e1, -9.32060152123768231369e1,
                     -1.77681167980488050595e2, -1.47077505154951170175e2,
                     -5.14105326766599330220e1, -6.05014350600728481186e0]
cdef double[7] QQ = [6.43178256118178023184e1, 8.56430025976980587198e2,
                     3.88240183605401609683e3, 7.24046774195652478189e3,
                     5.93072701187316984827e3, 2.06209331660327847417e3,
                     2.42005740240291393179e2]
cdef double SQ2OPI = 7.9788456080286535587989e-1
cdef double PIO4 = 7.85398163397448309616e-1
cdef double SERIES_LIMIT = 8.0
cdef int SERIES_TERMS = 28


cdef inline double _j0(double x) noexcept nogil:
    cdef double mq, term, total, w, z, p, pd, q, qd, xn
    cdef int k
    x = fabs(x)
    if x < SERIES_LIMIT:
        mq = -0.25 * x * x
        term = 1.0
        total = 1.0
        for k in range(1, SERIES_TERMS):
            term = term * mq / (k * k)
            total = total + term
        return total
    w = 5.0 / x
    z = w * w
    p = PP[0]
    pd = PQ[0]
    for k in range(1, 7):
        p = p * z + PP[k]
        pd = pd * z + PQ[k]
    q = QP[0]
    for k in range(1, 8):
        q = q * z + QP[k]
    qd = z + QQ[0]
    for k in range(1, 7):
        qd = qd * z + QQ[k]
    p = p / pd
    q = q / qd
    xn = x - PIO4
    return (p * cos(xn) - w * q * sin(xn)) * SQ2OPI / sqrt(x)


def j0(x):
    """Bessel function of the first kind, order zero, elementwise."""
    arr = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty_like(arr)
    cdef double[::1] src = arr.reshape(-1)
    cdef double[::1] dst = out.reshape(-1)
    cdef Py_ssize_t i, n = src.shape[0]
    with nogil:
        for i in range(n):
            dst[i] = _j0(src[i])
    return out


def echo_cos_stats(x0, phi0, double scale, double omega_r, double tau):
    """Mean and sum of squared deviations of cos(echo phase) over samples."""
    cdef double[::1] xa = np.ascontiguousarray(x0, dtype=np.float64)
    cdef double[::1] pa = np.ascontiguousarray(phi0, dtype=np.float64)
    cdef Py_ssize_t i, n = xa.shape[0]
    cdef double wt = omega_r * tau
    cdef double total = 0.0, mean, m2 = 0.0, c, d
    if n == 0:
        return 0.0, 0.0
    cdef double[::1] cvals = np.empty(n, dtype=np.float64)
    with nogil:
        for i in range(n):
            c = cos(scale * xa[i] * (sin(2.0 * wt + pa[i]) - 2.0 * sin(wt + pa[i]) + sin(pa[i])))
            cvals[i] = c
            total += c
        mean = total / n
        for i in range(n):
            d = cvals[i] - mean
            m2 += d * d
    return mean, m2


def axial_dipole_field(points, moment, position, axis):
    """Axial (projected) point-dipole field at each row of ``points``."""
    cdef double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef double[::1] m = np.ascontiguousarray(moment, dtype=np.float64)
    cdef double[::1] p0 = np.ascontiguousarray(position, dtype=np.float64)
    cdef double[::1] a = np.ascontiguousarray(axis, dtype=np.float64)
    cdef Py_ssize_t i, n = pts.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] dst = out
    cdef double rx, ry, rz, r2, rn, mr, nr
    cdef double mn = m[0] * a[0] + m[1] * a[1] + m[2] * a[2]
    cdef bint singular = False
    with nogil:
        for i in range(n):
            rx = pts[i, 0] - p0[0]
            ry = pts[i, 1] - p0[1]
            rz = pts[i, 2] - p0[2]
            r2 = rx * rx + ry * ry + rz * rz
            if r2 == 0.0:
                singular = True
                break
            rn = sqrt(r2)
            mr = m[0] * rx + m[1] * ry + m[2] * rz
            nr = a[0] * rx + a[1] * ry + a[2] * rz
            dst[i] = 1e-7 * (3.0 * mr * nr / r2 - mn) / (r2 * rn)
    if singular:
        raise ZeroDivisionError("evaluation point coincides with the dipole")
    return out
