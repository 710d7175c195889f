"""Classical and quantum Fisher information at a point of a parametrized state family."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InfeasibleAdjustmentError, RankDeficiencyError, SingularModelError, ValidationError
from .linalg import (PAULIS, OperatorBasis, as_hermitian, bloch_operator, gell_mann_basis,
                     psd_functions, support_projector, vectorize, vectorize_many)
from .povm import Povm

SLD_TOL = 1e-10
PROB_FLOOR = 1e-12
SCORE_TOL = 1e-9
ADJUST_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ParamPoint:
    """A state together with the derivatives of the state along each parameter."""

    rho: np.ndarray
    tangents: tuple[np.ndarray, ...]

    def __post_init__(self):
        rho = as_hermitian(np.asarray(self.rho, dtype=complex)).astype(complex)
        if abs(np.trace(rho).real - 1) > 1e-10:
            raise ValidationError(f"state has trace {np.trace(rho).real:.12g}, expected 1")
        if np.linalg.eigvalsh(rho)[0] < -1e-9:
            raise ValidationError("state is not positive semidefinite")
        tangents = []
        for k, t in enumerate(self.tangents):
            t = as_hermitian(np.asarray(t, dtype=complex)).astype(complex)
            if t.shape != rho.shape:
                raise ValidationError(f"tangent {k} has shape {t.shape}, state has {rho.shape}")
            if abs(np.trace(t)) > 1e-10:
                raise ValidationError(f"tangent {k} is not traceless (trace {np.trace(t):.3e})")
            tangents.append(t)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "tangents", tuple(tangents))

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @property
    def n_params(self) -> int:
        return len(self.tangents)


def full_param_point(rho, basis: OperatorBasis | None = None) -> ParamPoint:
    """Parametrize every direction of state space: tangents are the traceless basis elements."""
    rho = np.asarray(rho, dtype=complex)
    basis = basis or gell_mann_basis(rho.shape[0])
    return ParamPoint(rho, tuple(basis.traceless))


def central_point(d: int) -> ParamPoint:
    """Full parametrization at the completely mixed state."""
    return full_param_point(np.eye(d) / d)


def qubit_param_point(s) -> ParamPoint:
    """Bloch parametrization ``rho = (1 + s.sigma)/2`` with tangents ``sigma_k / 2``."""
    s = np.asarray(s, dtype=float)
    return ParamPoint((np.eye(2) + bloch_operator(s)) / 2, tuple(PAULIS / 2))


def qubit_qfi_closed_form(s) -> np.ndarray:
    """Inverse of ``1 - s s^T``; the SLD Fisher matrix of the Bloch parametrization."""
    s = np.asarray(s, dtype=float)
    return np.linalg.inv(np.eye(3) - np.outer(s, s))


def sld(rho, drho, tol: float = SLD_TOL) -> np.ndarray:
    """Symmetric logarithmic derivative ``L`` solving ``drho = (rho L + L rho)/2``.

    Solved in the eigenbasis of ``rho``; the kernel-kernel block of ``L`` is set to zero.
    """
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    p, v = np.linalg.eigh(rho)
    D = v.conj().T @ drho @ v
    denom = p[:, None] + p[None, :]
    on = denom > tol
    off = np.abs(D[~on])
    if off.size and off.max() > tol * max(1.0, np.abs(D).max()):
        raise RankDeficiencyError(
            f"tangent has weight {off.max():.3e} on the kernel of the state; no SLD exists"
        )
    Lb = np.zeros_like(D)
    Lb[on] = 2 * D[on] / denom[on]
    L = v @ Lb @ v.conj().T
    return 0.5 * (L + L.conj().T)


def sld_residual(rho, drho, L) -> float:
    rho, drho, L = (np.asarray(x, dtype=complex) for x in (rho, drho, L))
    return float(np.linalg.norm(drho - 0.5 * (rho @ L + L @ rho)))


def slds(pt: ParamPoint, tol: float = SLD_TOL) -> list[np.ndarray]:
    return [sld(pt.rho, t, tol) for t in pt.tangents]


def qfi_matrix(pt: ParamPoint, tol: float = SLD_TOL) -> np.ndarray:
    """SLD quantum Fisher matrix ``J_jk = tr(rho (L_j L_k + L_k L_j)) / 2``."""
    Ls = np.array(slds(pt, tol))
    RL = np.einsum("ij,njk->nik", pt.rho, Ls)
    J = np.einsum("aij,bji->ab", RL, Ls).real
    return 0.5 * (J + J.T)


def fisher_matrix(pt: ParamPoint, p: Povm, prob_floor: float = PROB_FLOOR,
                  score_tol: float = SCORE_TOL) -> np.ndarray:
    """Measurement Fisher matrix ``sum_xi tr(d_j rho A_xi) tr(d_k rho A_xi) / tr(rho A_xi)``."""
    if p.dim != pt.dim:
        raise ValidationError(f"POVM dimension {p.dim} does not match state dimension {pt.dim}")
    ops = p.operators
    probs = np.einsum("ij,nji->n", pt.rho, ops).real
    if probs.min() < -1e-9:
        raise ValidationError(f"negative outcome probability {probs.min():.3e}")
    if pt.n_params == 0:
        return np.zeros((0, 0))
    scores = np.einsum("tij,nji->nt", np.array(pt.tangents), ops).real
    keep = probs > prob_floor
    dropped = scores[~keep]
    if dropped.size and np.abs(dropped).max() > score_tol:
        bad = int(np.flatnonzero(~keep)[np.argmax(np.abs(dropped).max(axis=1))])
        raise SingularModelError(
            f"outcome {p.labels[bad]!r} has probability {probs[bad]:.3e} but nonzero score; "
            "Fisher information is undefined at this point"
        )
    s = scores[keep]
    I = (s.T / probs[keep]) @ s
    return 0.5 * (I + I.T)


def _check_support(I: np.ndarray, J: np.ndarray, tol: float) -> None:
    P = support_projector(J, tol)
    out = I - P @ I @ P
    if np.abs(out).max() > tol * max(1.0, np.abs(I).max()) * 10:
        raise InfeasibleAdjustmentError(
            f"Fisher matrix has weight {np.abs(out).max():.3e} outside the support of J"
        )


def metric_adjusted(I, J, tol: float = ADJUST_TOL) -> np.ndarray:
    """``J^{-1/2} I J^{-1/2}`` with pseudo-inverse square roots."""
    I = np.asarray(I, dtype=float)
    J = np.asarray(J, dtype=float)
    _check_support(I, J, tol)
    K = psd_functions(J, tol).inv_sqrt_pinv.real
    A = K @ I @ K
    return 0.5 * (A + A.T)


def gm_trace(I, J, tol: float = ADJUST_TOL) -> float:
    """Gill-Massar trace ``tr(J^+ I)``; at most ``d - 1`` for any measurement."""
    I = np.asarray(I, dtype=float)
    J = np.asarray(J, dtype=float)
    _check_support(I, J, tol)
    return float(np.trace(psd_functions(J, tol).pinv.real @ I))


def traceless_projector(basis: OperatorBasis) -> np.ndarray:
    e0 = vectorize(np.eye(basis.dim) / np.sqrt(basis.dim), basis)
    return np.eye(basis.size) - np.outer(e0, e0)


def frame_superoperators(p: Povm, basis: OperatorBasis | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Frame superoperator ``G = sum |A><A| / tr A`` and its traceless restriction ``Gbar``.

    Both are real symmetric ``d^2 x d^2`` matrices in the coordinates of ``basis``.
    """
    basis = basis or gell_mann_basis(p.dim)
    ops = p.operators
    tr = np.einsum("nii->n", ops).real
    keep = tr > 1e-14 * p.dim
    vecs = vectorize_many(ops[keep], basis)
    G = (vecs.T / tr[keep]) @ vecs
    G = 0.5 * (G + G.T)
    Ib = traceless_projector(basis)
    Gbar = Ib @ G @ Ib
    return G, 0.5 * (Gbar + Gbar.T)


def reduced_gbar(p: Povm) -> np.ndarray:
    """``Gbar`` restricted to the ``d^2 - 1`` traceless Gell-Mann coordinates."""
    return frame_superoperators(p)[1][1:, 1:]


def fisher_matrices(pt: ParamPoint, povms: Sequence[Povm], **kw) -> list[np.ndarray]:
    return [fisher_matrix(pt, p, **kw) for p in povms]
