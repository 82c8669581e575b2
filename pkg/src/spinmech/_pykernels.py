"""Pure numpy implementations of the hot kernels.

Used when the compiled extension is unavailable or when
``SPINMECH_PURE_PYTHON=1`` is set. Signatures mirror ``_ckernels``.
"""
import numpy as np

# Hankel-form rational approximations for |x| >= 8 (Cephes j0.c, x > 5 branch).
_PP = np.array([7.96936729297347051624e-4, 8.28352392107440799803e-2,
                1.23953371646414299388e0, 5.44725003058768775090e0,
                8.74716500199817011941e0, 5.30324038235394892183e0,
                9.99999999999999997821e-1])
_PQ = np.array([9.24408810558863637013e-4, 8.56288474354474431428e-2,
                1.25352743901058953537e0, 5.47097740330417105182e0,
                8.76190883237069594232e0, 5.30605288235394617618e0,
                1.00000000000000000218e0])
_QP = np.array([-1.13663838898469149931e-2, -1.28252718670509318512e0,
                -1.95539544257735972385e1, -9.32060152123768231369e1,
                -1.77681167980488050595e2, -1.47077505154951170175e2,
                -5.14105326766599330220e1, -6.05014350600728481186e0])
# leading coefficient 1 implied
_QQ = np.array([6.43178256118178023184e1, 8.56430025976980587198e2,
                3.88240183605401609683e3, 7.24046774195652478189e3,
                5.93072701187316984827e3, 2.06209331660327847417e3,
                2.42005740240291393179e2])
_SQ2OPI = 7.9788456080286535587989e-1
_PIO4 = 7.85398163397448309616e-1

SERIES_LIMIT = 8.0
SERIES_TERMS = 28


def _polevl(x, coef):
    ans = np.full_like(x, coef[0])
    for c in coef[1:]:
        ans = ans * x + c
    return ans


def _p1evl(x, coef):
    ans = x + coef[0]
    for c in coef[1:]:
        ans = ans * x + c
    return ans


def j0(x):
    """Bessel function of the first kind, order zero, elementwise."""
    x = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    small = x < SERIES_LIMIT

    xs = x[small]
    mq = -0.25 * xs * xs
    term = np.ones_like(xs)
    total = np.ones_like(xs)
    for k in range(1, SERIES_TERMS):
        term = term * mq / (k * k)
        total = total + term
    out[small] = total

    xl = x[~small]
    if xl.size:
        w = 5.0 / xl
        z = w * w
        p = _polevl(z, _PP) / _polevl(z, _PQ)
        q = _polevl(z, _QP) / _p1evl(z, _QQ)
        xn = xl - _PIO4
        out[~small] = (p * np.cos(xn) - w * q * np.sin(xn)) * _SQ2OPI / np.sqrt(xl)
    return out


def echo_cos_stats(x0, phi0, scale, omega_r, tau):
    """Mean and sum of squared deviations of cos(echo phase) over samples."""
    wt = omega_r * tau
    phase = scale * x0 * (np.sin(2.0 * wt + phi0) - 2.0 * np.sin(wt + phi0) + np.sin(phi0))
    c = np.cos(phase)
    if c.size == 0:
        return 0.0, 0.0
    mean = float(c.mean())
    m2 = float(np.sum((c - mean) ** 2))
    return mean, m2


def axial_dipole_field(points, moment, position, axis):
    """Axial (projected) point-dipole field at each row of ``points``."""
    r = np.asarray(points, dtype=float) - position
    r2 = np.einsum("ij,ij->i", r, r)
    if np.any(r2 == 0.0):
        raise ZeroDivisionError("evaluation point coincides with the dipole")
    rn = np.sqrt(r2)
    mr = r @ moment
    nr = r @ axis
    mn = float(np.dot(moment, axis))
    return 1e-7 * (3.0 * mr * nr / r2 - mn) / (r2 * rn)
