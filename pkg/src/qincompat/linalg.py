"""Dense Hermitian linear algebra and the Hilbert-Schmidt vectorization layer."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import NotPSDError, ValidationError

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-9


def as_hermitian(H, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``H`` as a square Hermitian matrix and return its symmetrized copy.

    The check is relative: ``|H[j,k] - conj(H[k,j])| <= tol * max|H|``.
    """
    H = np.asarray(H)
    H = H.astype(complex if np.iscomplexobj(H) else float)
    if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] == 0:
        raise ValidationError(f"expected a nonempty square matrix, got shape {H.shape}")
    scale = max(np.abs(H).max(), 1e-300)
    dev = np.abs(H - H.conj().T)
    if dev.max() > tol * scale:
        j, k = np.unravel_index(np.argmax(dev), dev.shape)
        raise ValidationError(
            f"matrix is not Hermitian: entry ({j}, {k}) = {H[j, k]:.6g} but "
            f"conj of ({k}, {j}) = {np.conj(H[k, j]):.6g}"
        )
    return 0.5 * (H + H.conj().T)


def spectral_decompose(H, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order and the matching orthonormal eigenvector columns."""
    H = as_hermitian(H, tol)
    w, v = np.linalg.eigh(H)
    return w[::-1].copy(), v[:, ::-1].copy()


class PsdFunctions(NamedTuple):
    sqrt: np.ndarray
    pinv: np.ndarray
    inv_sqrt_pinv: np.ndarray


def _psd_threshold(w: np.ndarray, tol: float) -> float:
    return tol * max(1.0, float(np.abs(w).max()))


def psd_functions(H, tol: float = PSD_TOL) -> PsdFunctions:
    """Square root, Moore-Penrose inverse and pseudo-inverse square root of a PSD matrix.

    Eigenvalues with magnitude below ``tol * max(1, ||H||)`` count as zero; anything
    more negative raises :class:`NotPSDError`.
    """
    w, v = spectral_decompose(H)
    thr = _psd_threshold(w, tol)
    if w.size and w[-1] < -thr:
        raise NotPSDError(w[-1], thr)
    support = w > thr
    wp = np.where(support, w, 0.0)
    vs = v[:, support]
    ws = wp[support]
    sq = (v * np.sqrt(wp)) @ v.conj().T
    pinv = (vs / ws) @ vs.conj().T
    isq = (vs / np.sqrt(ws)) @ vs.conj().T
    return PsdFunctions(_herm(sq), _herm(pinv), _herm(isq))


def psd_sqrt(H, tol: float = PSD_TOL) -> np.ndarray:
    return psd_functions(H, tol).sqrt


def support_projector(H, tol: float = PSD_TOL) -> np.ndarray:
    """Orthogonal projector onto the eigenvectors with eigenvalue above threshold."""
    w, v = spectral_decompose(H)
    vs = v[:, w > _psd_threshold(w, tol)]
    return _herm(vs @ vs.conj().T)


def min_eigenvalue(H) -> float:
    return float(np.linalg.eigvalsh(_herm(np.asarray(H)))[0])


def trace_norm(H) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.abs(np.linalg.eigvalsh(as_hermitian(H))).sum())


def abs_hermitian(H) -> np.ndarray:
    """Matrix absolute value |H| = sqrt(H^2) of a Hermitian matrix."""
    w, v = np.linalg.eigh(as_hermitian(H))
    return _herm((v * np.abs(w)) @ v.conj().T)


def _herm(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().T)


def hs_inner(E, F) -> complex:
    """Hilbert-Schmidt inner product tr(E^dagger F)."""
    return complex(np.vdot(np.asarray(E), np.asarray(F)))


# ---------------------------------------------------------------------------
# operator basis
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """Orthonormal Hermitian operator basis; ``elements[0]`` is identity/sqrt(d)."""

    dim: int
    elements: np.ndarray  # shape (d*d, d, d)

    def __post_init__(self):
        self.elements.setflags(write=False)

    @property
    def size(self) -> int:
        return self.dim * self.dim

    @property
    def traceless(self) -> np.ndarray:
        return self.elements[1:]


@lru_cache(maxsize=32)
def gell_mann_basis(d: int) -> OperatorBasis:
    """Normalized identity followed by the generalized Gell-Mann matrices.

    Ordering: symmetric off-diagonal, antisymmetric off-diagonal, then diagonal
    elements, each scaled to unit Hilbert-Schmidt norm.
    """
    if d < 1:
        raise ValidationError("dimension must be positive")
    mats = [np.eye(d, dtype=complex) / np.sqrt(d)]
    for k in range(1, d):
        for j in range(k):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1 / np.sqrt(2)
            mats.append(m)
    for k in range(1, d):
        for j in range(k):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j / np.sqrt(2)
            m[k, j] = 1j / np.sqrt(2)
            mats.append(m)
    for ell in range(1, d):
        diag = np.zeros(d)
        diag[:ell] = 1.0
        diag[ell] = -ell
        mats.append(np.diag(diag / np.sqrt(ell * (ell + 1))).astype(complex))
    return OperatorBasis(d, np.array(mats))


def pauli_basis() -> OperatorBasis:
    """Qubit basis (1, sx, sy, sz)/sqrt(2), matching Bloch-vector coordinates."""
    return OperatorBasis(2, np.array([np.eye(2), SX, SY, SZ], dtype=complex) / np.sqrt(2))


def vectorize(H, basis: OperatorBasis) -> np.ndarray:
    """Real coordinates ``c_k = tr(B_k H)`` of a Hermitian operator."""
    H = np.asarray(H, dtype=complex)
    if H.shape != (basis.dim, basis.dim):
        raise ValidationError(f"operator shape {H.shape} does not match basis dimension {basis.dim}")
    return np.einsum("kji,ij->k", basis.elements, H).real


def vectorize_many(ops, basis: OperatorBasis) -> np.ndarray:
    ops = np.asarray(ops, dtype=complex)
    if ops.shape[1:] != (basis.dim, basis.dim):
        raise ValidationError(f"operator shape {ops.shape[1:]} does not match basis dimension {basis.dim}")
    return np.einsum("kji,nij->nk", basis.elements, ops).real


def unvectorize(c, basis: OperatorBasis) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.shape != (basis.size,):
        raise ValidationError(f"coordinate vector of length {c.size} does not match basis size {basis.size}")
    return np.einsum("k,kij->ij", c, basis.elements)


SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.array([SX, SY, SZ])


def bloch_operator(v) -> np.ndarray:
    """v . sigma for a real 3-vector."""
    return np.einsum("k,kij->ij", np.asarray(v, dtype=float), PAULIS)
