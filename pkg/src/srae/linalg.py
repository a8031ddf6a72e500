"""Dense complex linear algebra for small Hilbert spaces.

Matrices are plain ``numpy`` complex arrays.  Subsystem index 0 is the
leftmost tensor factor and basis states are ordered row-major, so the
amplitude of ``|i_0 i_1 ... i_{n-1}>`` sits at ``np.ravel_multi_index``.
"""

from __future__ import annotations

from math import prod
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, NotHermitianError, NotPSDError

DIMENSION_CAP = 4096
HERMITIAN_TOL = 1e-10
CLIP_TOL = 1e-10
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def kron(a, b, cap: int = DIMENSION_CAP) -> np.ndarray:
    """Kronecker product ``a (x) b`` with a guard on the resulting size."""
    a, b = as_matrix(a), as_matrix(b)
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if max(rows, cols) > cap:
        raise DimensionError(f"dimension cap exceeded ({max(rows, cols)} > {cap})")
    return np.kron(a, b)


def kron_all(factors: Iterable, cap: int = DIMENSION_CAP) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        f = np.asarray(f, dtype=complex)
        out = kron(out, f.reshape(f.shape[0], -1), cap=cap)
    return out


def _check_keep(dims: Sequence[int], keep) -> list[int]:
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise DimensionError("must keep at least one subsystem")
    bad = [k for k in keep if k < 0 or k >= len(dims)]
    if bad:
        raise DimensionError(f"subsystem index out of range: {bad} (have {len(dims)})")
    return keep


def partial_trace(matrix, dims: Sequence[int], keep) -> np.ndarray:
    """Reduce an operator on ``prod(dims)`` to the subsystems in ``keep``.

    The kept subsystems stay in ascending index order.
    """
    dims = [int(d) for d in dims]
    keep = _check_keep(dims, keep)
    rho = as_matrix(matrix)
    n = len(dims)
    if rho.shape != (prod(dims), prod(dims)):
        raise DimensionError(f"matrix shape {rho.shape} does not match dims {dims}")
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    perm = keep + traced + [n + i for i in keep] + [n + i for i in traced]
    t = t.transpose(perm)
    dk, dt = prod(dims[i] for i in keep), prod(dims[i] for i in traced)
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def reduced_from_vector(psi, dims: Sequence[int], keep) -> np.ndarray:
    """Marginal ``Tr_rest |psi><psi|`` without forming the full projector.

    ``psi`` may carry leading batch axes; the last axis is the amplitude axis.
    """
    dims = [int(d) for d in dims]
    keep = _check_keep(dims, keep)
    psi = np.asarray(psi, dtype=complex)
    batch = psi.shape[:-1]
    if keep == list(range(len(keep))):
        m = psi.reshape(batch + (prod(dims[: len(keep)]), -1))
        return m @ np.conj(np.swapaxes(m, -1, -2))
    traced = [i for i in range(len(dims)) if i not in keep]
    nb = len(batch)
    t = psi.reshape(batch + tuple(dims))
    perm = list(range(nb)) + [nb + i for i in keep] + [nb + i for i in traced]
    dk, dt = prod(dims[i] for i in keep), prod(dims[i] for i in traced)
    m = t.transpose(perm).reshape(batch + (dk, dt))
    return m @ np.conj(np.swapaxes(m, -1, -2))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and float(np.max(np.abs(m - m.conj().T), initial=0.0)) <= tol


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    apq = a[p, q]
    mag = abs(apq)
    phase = apq / mag
    theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # phase-fix column q, then a real Givens rotation in the (p, q) plane
    j = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
    idx = [p, q]
    a[:, idx] = a[:, idx] @ j
    a[idx, :] = j.conj().T @ a[idx, :]
    v[:, idx] = v[:, idx] @ j
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def eig_hermitian(m, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    m : array_like
        Square matrix, Hermitian to within ``tol`` (max-norm of ``m - m^H``).

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in descending order.
    eigenvectors : ndarray
        Unitary matrix whose columns are the matching eigenvectors.

    Sweeps stop once the off-diagonal Frobenius norm falls below ``1e-13``
    (relative to the matrix norm when that exceeds one) or after 100 sweeps.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionError(f"square matrix required, got {a.shape}")
    if not is_hermitian(a, tol):
        raise NotHermitianError("matrix not Hermitian")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    thresh = JACOBI_TOL * max(1.0, float(np.linalg.norm(a)))
    for _ in range(JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > 1e-300:
                    _jacobi_rotate(a, v, p, q)
    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def eigvals_hermitian(m) -> np.ndarray:
    return eig_hermitian(m)[0]


def psd_sqrt(m) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues down to ``-1e-10`` are treated as roundoff and clipped to 0.
    """
    w, v = eig_hermitian(m)
    if w.size and w[-1] < -CLIP_TOL:
        raise NotPSDError(f"matrix not PSD (min eigenvalue {w[-1]:.3e})")
    s = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return 0.5 * (s + s.conj().T)


def clip_spectrum(w: np.ndarray) -> np.ndarray:
    """Zero out roundoff-level negative eigenvalues (``>= -1e-10``)."""
    w = np.asarray(w, dtype=float)
    if np.any(w < -CLIP_TOL):
        raise NotPSDError(f"matrix not PSD (min eigenvalue {w.min():.3e})")
    return np.clip(w, 0.0, None)


def batched_spectrum(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of a stack of Hermitian matrices (LAPACK), clipped at zero.

    Used on hot paths (roof search, random-state scans) where the pure-Python
    Jacobi loop would dominate the run time.
    """
    w = np.linalg.eigvalsh(np.asarray(m))
    return np.clip(w, 0.0, None)


def permute_subsystems(matrix, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder the tensor factors of an operator to ``order``."""
    dims = [int(d) for d in dims]
    order = [int(i) for i in order]
    if sorted(order) != list(range(len(dims))):
        raise DimensionError(f"order {order} is not a permutation of {len(dims)} subsystems")
    n = len(dims)
    d = prod(dims)
    t = as_matrix(matrix).reshape(dims + dims)
    return t.transpose(order + [n + i for i in order]).reshape(d, d)
