"""Dense complex linear algebra for 2- and 4-dimensional spaces.

Everything here operates on plain complex numpy arrays: vectors of length
2 or 4 (kets) and square matrices of size 2 or 4 (Hermitian operators).
Operations validate their inputs and are pure; there is no shared state.
"""

from __future__ import annotations

import numpy as np

from .config import default_tol

HERMITICITY_TOL = 1e-12


def as_operator(a, dims=(2, 4)) -> np.ndarray:
    """Coerce to a complex square matrix of an allowed dimension."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] not in dims:
        raise ValueError(f"expected dimension in {dims}, got {a.shape[0]}")
    return a


def require_hermitian(a, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate Hermiticity entrywise and return the exact Hermitian part."""
    a = as_operator(a)
    if np.max(np.abs(a - a.conj().T)) > tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    return (a + a.conj().T) / 2


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def ket(entries) -> np.ndarray:
    """Complex column vector of length 2 or 4."""
    v = np.asarray(entries, dtype=complex).ravel()
    if v.size not in (2, 4):
        raise ValueError(f"expected a vector of length 2 or 4, got {v.size}")
    return v


def unit_ket(entries) -> np.ndarray:
    v = ket(entries)
    n = np.linalg.norm(v)
    if abs(n - 1.0) > 1e-12:
        raise ValueError(f"vector norm {n} is not 1 within 1e-12")
    return v


def outer(v, w=None) -> np.ndarray:
    """|v><w| (defaults to |v><v|)."""
    v = ket(v)
    w = v if w is None else ket(w)
    return np.outer(v, w.conj())


def kron(a, b) -> np.ndarray:
    """Tensor product of two single-qubit operators.

    Basis order of the result is |00>, |01>, |10>, |11| (second factor
    fastest), matching numpy's kron convention.
    """
    a = as_operator(a, dims=(2,))
    b = as_operator(b, dims=(2,))
    return np.kron(a, b)


def kron_vec(a, b) -> np.ndarray:
    """Tensor product of two single-qubit kets, same basis order as kron."""
    a = ket(a)
    b = ket(b)
    if a.size != 2 or b.size != 2:
        raise ValueError("kron_vec expects two length-2 vectors")
    return np.kron(a, b)


def hermitian_eig(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvectors as columns).  Eigenvector
    phases are fixed deterministically: the first component of significant
    modulus is made real positive.
    """
    a = require_hermitian(a)
    w, v = np.linalg.eigh(a)
    for k in range(v.shape[1]):
        col = v[:, k]
        idx = int(np.argmax(np.abs(col) > 1e-8))
        phase = col[idx] / abs(col[idx])
        v[:, k] = col / phase
    return w, v


def psd_check(a, tol: float | None = None) -> bool:
    """True iff the minimum eigenvalue of Hermitian `a` is >= -tol."""
    if tol is None:
        tol = default_tol()
    w, _ = hermitian_eig(a)
    return bool(w[0] >= -tol)


def min_eigenvalue(a) -> float:
    w, _ = hermitian_eig(a)
    return float(w[0])


def project_psd(a) -> np.ndarray:
    """Frobenius-nearest PSD matrix: clip negative eigenvalues at zero."""
    w, v = hermitian_eig(a)
    w = np.maximum(w, 0.0)
    out = (v * w) @ v.conj().T
    return (out + out.conj().T) / 2


def partial_transpose(a) -> np.ndarray:
    """Transpose on the second qubit of a 4x4 operator (basis |00>,|01>,|10>,|11>)."""
    a = as_operator(a, dims=(4,))
    return a.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def schmidt_rank_one(v, tol: float = 1e-8):
    """Local factors (a, b) with a (x) b == v, or None if v is entangled.

    Decides via the singular values of the 2x2 reshaping of v: the vector is
    a product vector iff the second singular value is <= tol.
    """
    v = ket(v)
    if v.size != 4:
        raise ValueError("schmidt_rank_one expects a length-4 vector")
    if np.linalg.norm(v) == 0:
        raise ValueError("zero vector has no Schmidt decomposition")
    m = v.reshape(2, 2)
    u, s, vh = np.linalg.svd(m)
    if s[1] > tol:
        return None
    a = u[:, 0] * s[0]
    b = vh[0, :].copy()
    # Deterministic phase: put the full phase on b's first significant entry.
    idx = int(np.argmax(np.abs(a) > 1e-8))
    phase = a[idx] / abs(a[idx])
    return a / phase, b * phase


def trace_norm(a) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    w, _ = hermitian_eig(a)
    return float(np.sum(np.abs(w)))


IDENTITY_2 = np.eye(2, dtype=complex)
IDENTITY_4 = np.eye(4, dtype=complex)
