"""Maximal CHSH violation for a pair of +-1-valued observables of one party."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import as_hermitian
from .measures import tau_von_neumann
from .povm import SharpObservable, from_observable

PM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ChshResult:
    max_violation: float
    angles: tuple[float, ...]
    subspace: np.ndarray | None  # (d, 2) orthonormal columns, or None when commuting
    psi: np.ndarray | None
    phi: np.ndarray | None

    @property
    def theta(self) -> float:
        return max((math.sin(t), t) for t in self.angles)[1] if self.angles else 0.0

    def restricted(self, A, B) -> tuple[np.ndarray, np.ndarray]:
        """Restrictions of ``A`` and ``B`` to the optimal two-dimensional subspace."""
        if self.subspace is None:
            raise ValidationError("commuting pair: no optimal subspace")
        Q = self.subspace
        return Q.conj().T @ np.asarray(A) @ Q, Q.conj().T @ np.asarray(B) @ Q

    def to_dict(self) -> dict:
        from .io import matrix_to_json
        return {
            "max_violation": self.max_violation,
            "local_bound": 1.0,
            "angles": list(self.angles),
            "theta": self.theta,
            "subspace": None if self.subspace is None else matrix_to_json(self.subspace),
        }


def _unit(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or abs(np.linalg.norm(v) - 1) > 1e-9:
        raise ValidationError(f"{name} must be a unit 3-vector")
    return v


def chsh_max_qubit(a, b) -> float:
    """``sqrt(1 + sin theta)`` for ``A = a.sigma``, ``B = b.sigma``."""
    a, b = _unit(a, "a"), _unit(b, "b")
    sin = np.linalg.norm(np.cross(a, b))
    return math.sqrt(1 + min(sin, 1.0))


def _pm_operator(A) -> np.ndarray:
    if isinstance(A, SharpObservable):
        A = A.operator
    A = as_hermitian(np.asarray(A, dtype=complex)).astype(complex)
    w = np.linalg.eigvalsh(A)
    if np.abs(np.abs(w) - 1).max() > PM_TOL:
        raise ValidationError("observable must have spectrum in {+1, -1}")
    return A


def _plus_range(A: np.ndarray) -> np.ndarray:
    obs = from_observable(A)
    for lam, P in zip(obs.eigenvalues, obs.projectors):
        if lam > 0:
            w, v = np.linalg.eigh(P)
            return v[:, w > 0.5]
    return np.zeros((A.shape[0], 0), dtype=complex)


def chsh_max_general(A, B) -> ChshResult:
    """Maximal CHSH value from the SVD of ``A_+ B_+``.

    With ``A_+ = sum |psi_j><psi_j|`` and ``B_+ = sum |phi_k><phi_k|`` chosen so that
    ``<psi_j|phi_k> = delta_jk cos(theta_j / 2)``, the maximum is ``sqrt(1 + max sin theta_j)``.
    """
    A, B = _pm_operator(A), _pm_operator(B)
    if A.shape != B.shape:
        raise ValidationError("observables have different dimensions")
    UA, UB = _plus_range(A), _plus_range(B)
    if UA.shape[1] == 0 or UB.shape[1] == 0:
        return ChshResult(1.0, (), None, None, None)
    W, s, Vh = np.linalg.svd(UA.conj().T @ UB)
    s = np.clip(s, 0.0, 1.0)
    angles = tuple(float(2 * math.acos(c)) for c in s)
    sins = [math.sin(t) for t in angles]
    j = int(np.argmax(sins))  # first index on ties
    if sins[j] <= 1e-12:
        return ChshResult(1.0, angles, None, None, None)
    psi = UA @ W[:, j]
    phi = UB @ Vh.conj().T[:, j]
    Q, _ = np.linalg.qr(np.stack([psi, phi], axis=1))
    return ChshResult(math.sqrt(1 + sins[j]), angles, Q, psi, phi)


def chsh_commutator_bound(A, B) -> float:
    """``sqrt(1 + ||[A, B]|| / 2)`` with the spectral norm."""
    A, B = _pm_operator(A), _pm_operator(B)
    return math.sqrt(1 + 0.5 * np.linalg.norm(A @ B - B @ A, 2))


def restricted_tau(A, B, result: ChshResult | None = None) -> float:
    """tau of the pair restricted to the optimal subspace; its square root is the CHSH maximum."""
    A, B = _pm_operator(A), _pm_operator(B)
    result = result or chsh_max_general(A, B)
    if result.subspace is None:
        return 1.0
    Ar, Br = result.restricted(A, B)
    return tau_von_neumann(from_observable(Ar), from_observable(Br))
