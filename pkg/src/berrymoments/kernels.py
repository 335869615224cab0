"""Hot numeric kernels, each with a numba and a pure-numpy implementation.

Public entry points (:func:`jacobi_eigh`, :func:`cef_energy`,
:func:`cef_descend`) dispatch on :data:`berrymoments._accel.USE_NUMBA`. The
``*_numpy`` and ``*_numba`` variants are importable directly for testing and
benchmarking.
"""

import math

import numpy as np

from . import _accel

JACOBI_TOL = 1e-15
JACOBI_MAX_SWEEPS = 60


# ---------------------------------------------------------------------------
# Cyclic Jacobi for complex Hermitian matrices
#
# Each rotation U = Phi R acts on the (p, q) plane: Phi removes the phase of
# a[p, q], R is the real Jacobi rotation zeroing the now-real element.
# ---------------------------------------------------------------------------

def _jacobi_loops(a, tol, max_sweeps):
    n = a.shape[0]
    a = a.copy()
    v = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        v[i, i] = 1.0
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j].real ** 2 + a[i, j].imag ** 2
    scale = math.sqrt(scale)
    sweeps = 0
    while sweeps < max_sweeps:
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if math.sqrt(off) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                e = apq / mag
                ec = e.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * ec * akq
                    a[k, q] = s * akp + c * ec * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * e * aqk
                    a[q, k] = s * apk + c * e * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * ec * vkq
                    v[k, q] = s * vkp + c * ec * vkq
        sweeps += 1
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, sweeps


def _jacobi_vectorized(a, tol, max_sweeps):
    n = a.shape[0]
    a = np.array(a, dtype=np.complex128, copy=True)
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    iu = np.triu_indices(n, 1)
    sweeps = 0
    while sweeps < max_sweeps:
        if np.linalg.norm(a[iu]) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                e = apq / mag
                ec = e.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0 / (abs(theta) + math.hypot(theta, 1.0)), theta)
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                colp, colq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * colp - s * ec * colq
                a[:, q] = s * colp + c * ec * colq
                rowp, rowq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rowp - s * e * rowq
                a[q, :] = s * rowp + c * e * rowq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * ec * vq
                v[:, q] = s * vp + c * ec * vq
        sweeps += 1
    return a.diagonal().real.copy(), v, sweeps


_jacobi_compiled = _accel.njit(_jacobi_loops)


def _sorted(w, v, sweeps, max_sweeps):
    if sweeps >= max_sweeps:
        raise RuntimeError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def jacobi_eigh_numpy(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    return _sorted(*_jacobi_vectorized(a, tol, max_sweeps), max_sweeps)


def jacobi_eigh_numba(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    if _jacobi_compiled is None:
        raise RuntimeError("numba is not available")
    a = np.ascontiguousarray(a, dtype=np.complex128)
    return _sorted(*_jacobi_compiled(a, tol, max_sweeps), max_sweeps)


def jacobi_eigh(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a complex Hermitian matrix by cyclic Jacobi.

    Parameters
    ----------
    a : (n, n) array_like
        Hermitian matrix. Only Hermitian input gives meaningful output; the
        caller is responsible for checking it.
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm drops below
        ``tol * ||a||_F``.

    Returns
    -------
    w : (n,) ndarray
        Eigenvalues, ascending.
    v : (n, n) ndarray
        Unitary matrix whose columns are the matching eigenvectors.
    """
    if _accel.USE_NUMBA:
        return jacobi_eigh_numba(a, tol, max_sweeps)
    return jacobi_eigh_numpy(a, tol, max_sweeps)


# ---------------------------------------------------------------------------
# Classical cubic CEF potential on the unit sphere
#
# e(n) = a * sum n^4 + b * (sum n^6 + 30 nx^2 ny^2 nz^2), constants dropped.
# ---------------------------------------------------------------------------

def _cef_energy_loops(points, a, b):
    out = np.empty(points.shape[0])
    for i in range(points.shape[0]):
        x2 = points[i, 0] ** 2
        y2 = points[i, 1] ** 2
        z2 = points[i, 2] ** 2
        out[i] = (a * (x2 * x2 + y2 * y2 + z2 * z2)
                  + b * (x2 ** 3 + y2 ** 3 + z2 ** 3 + 30.0 * x2 * y2 * z2))
    return out


def _cef_descend_loops(points, a, b, steps, eta):
    out = points.copy()
    g = np.empty(3)
    for i in range(out.shape[0]):
        for _ in range(steps):
            x, y, z = out[i, 0], out[i, 1], out[i, 2]
            x2, y2, z2 = x * x, y * y, z * z
            g[0] = 4.0 * a * x * x2 + b * (6.0 * x * x2 * x2 + 60.0 * x * y2 * z2)
            g[1] = 4.0 * a * y * y2 + b * (6.0 * y * y2 * y2 + 60.0 * y * x2 * z2)
            g[2] = 4.0 * a * z * z2 + b * (6.0 * z * z2 * z2 + 60.0 * z * x2 * y2)
            radial = g[0] * x + g[1] * y + g[2] * z
            x -= eta * (g[0] - radial * x)
            y -= eta * (g[1] - radial * y)
            z -= eta * (g[2] - radial * z)
            norm = math.sqrt(x * x + y * y + z * z)
            out[i, 0] = x / norm
            out[i, 1] = y / norm
            out[i, 2] = z / norm
    return out


def cef_energy_numpy(points, a, b):
    sq = np.asarray(points, dtype=float) ** 2
    return (a * np.sum(sq ** 2, axis=-1)
            + b * (np.sum(sq ** 3, axis=-1) + 30.0 * np.prod(sq, axis=-1)))


def cef_gradient_numpy(points, a, b):
    n = np.asarray(points, dtype=float)
    sq = n ** 2
    others = np.stack([sq[..., 1] * sq[..., 2], sq[..., 0] * sq[..., 2],
                       sq[..., 0] * sq[..., 1]], axis=-1)
    return 4.0 * a * n * sq + b * (6.0 * n * sq ** 2 + 60.0 * n * others)


def cef_descend_numpy(points, a, b, steps, eta):
    n = np.array(points, dtype=float, copy=True)
    for _ in range(steps):
        g = cef_gradient_numpy(n, a, b)
        g -= np.sum(g * n, axis=-1, keepdims=True) * n
        n -= eta * g
        n /= np.linalg.norm(n, axis=-1, keepdims=True)
    return n


_cef_energy_compiled = _accel.njit(_cef_energy_loops)
_cef_descend_compiled = _accel.njit(_cef_descend_loops)


def cef_energy_numba(points, a, b):
    return _cef_energy_compiled(np.ascontiguousarray(points, dtype=float), float(a), float(b))


def cef_descend_numba(points, a, b, steps, eta):
    return _cef_descend_compiled(np.ascontiguousarray(points, dtype=float),
                                 float(a), float(b), int(steps), float(eta))


def cef_energy(points, a, b):
    """Anisotropic part of the cubic potential at each row of ``points``."""
    if _accel.USE_NUMBA:
        return cef_energy_numba(points, a, b)
    return cef_energy_numpy(points, a, b)


def cef_descend(points, a, b, steps, eta):
    """Projected gradient descent on the sphere, ``steps`` fixed-size steps per point."""
    if _accel.USE_NUMBA:
        return cef_descend_numba(points, a, b, steps, eta)
    return cef_descend_numpy(points, a, b, steps, eta)
