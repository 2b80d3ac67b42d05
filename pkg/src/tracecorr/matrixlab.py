"""Small dense linear algebra for 2x2 and 4x4 Hermitian matrices.

Matrices are plain ``numpy`` complex arrays. Eigenvalues of X-shaped
matrices come from the exact 2x2 block formula; anything else goes through
a cyclic Jacobi sweep.
"""
from __future__ import annotations

import numpy as np

from .errors import NonHermitianInput

HERMITIAN_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)

# entries that are allowed to be nonzero in an X-shaped 4x4 matrix
X_MASK = np.eye(4, dtype=bool) | np.eye(4, dtype=bool)[::-1]


def kron(a, b):
    """Kronecker product, ``kron(a, b)[2i+k, 2j+l] = a[i, j] * b[k, l]``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n, m = a.shape[0], b.shape[0]
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(n * m, n * m)


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def is_hermitian(m, tol=HERMITIAN_TOL):
    m = np.asarray(m)
    return bool(np.max(np.abs(m - dagger(m)), initial=0.0) <= tol)


def hermitize(m, tol=HERMITIAN_TOL):
    """Return ``(m + m^dagger)/2``; raise if ``m`` is not Hermitian within ``tol``."""
    m = np.asarray(m, dtype=complex)
    if m.shape[-1] != m.shape[-2]:
        raise NonHermitianInput(f"matrix is not square: shape {m.shape}")
    if not is_hermitian(m, tol):
        err = np.max(np.abs(m - dagger(m)))
        raise NonHermitianInput(f"matrix deviates from Hermitian by {err:.3e}")
    return 0.5 * (m + dagger(m))


def is_x_shaped(m, tol=0.0):
    m = np.asarray(m)
    return m.shape == (4, 4) and bool(np.all(np.abs(m[~X_MASK]) <= tol))


def _block_eigs(a, d, b):
    mid = 0.5 * (a + d)
    rad = np.hypot(0.5 * (a - d), abs(b))
    return mid + rad, mid - rad


def x_block_eigenvalues(m):
    """Eigenvalues of an X-shaped Hermitian matrix, descending.

    The outer block couples |00>,|11> and the inner block |01>,|10>.
    """
    m = np.asarray(m)
    outer = _block_eigs(m[0, 0].real, m[3, 3].real, m[3, 0])
    inner = _block_eigs(m[1, 1].real, m[2, 2].real, m[2, 1])
    return np.sort(np.array(outer + inner))[::-1]


def jacobi_eigenvalues(m, tol=1e-15, max_sweeps=50):
    """Cyclic Jacobi eigenvalues of a Hermitian matrix, descending."""
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    scale = max(np.max(np.abs(a)), 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[~np.eye(n, dtype=bool)]) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                # remove the phase of apq, then use the real symmetric rotation
                phase = apq / abs(apq)
                app, aqq = a[p, p].real, a[q, q].real
                theta = 0.5 * np.arctan2(2 * abs(apq), aqq - app)
                c, s = np.cos(theta), np.sin(theta)
                rot = np.eye(n, dtype=complex)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s * phase
                rot[q, p] = -s * np.conj(phase)
                a = dagger(rot) @ a @ rot
    return np.sort(np.diag(a).real)[::-1]


def hermitian_eigenvalues(m):
    """Real eigenvalues of a Hermitian 4x4 (or 2x2) matrix in descending order.

    Raises
    ------
    NonHermitianInput
        If ``m`` differs from its conjugate transpose by more than 1e-12.
    """
    m = hermitize(m)
    if is_x_shaped(m):
        return x_block_eigenvalues(m)
    return jacobi_eigenvalues(m)


def trace_norm(m):
    """Schatten 1-norm, the sum of absolute eigenvalues."""
    return float(np.sum(np.abs(hermitian_eigenvalues(m))))


def trace_norm_batch(ms):
    """Trace norms of a stack of Hermitian matrices with shape ``(..., n, n)``.

    Used by the measurement-grid searches, where thousands of small
    matrices are evaluated at once.
    """
    ms = np.asarray(ms, dtype=complex)
    ms = 0.5 * (ms + dagger(ms))
    return np.sum(np.abs(np.linalg.eigvalsh(ms)), axis=-1)
