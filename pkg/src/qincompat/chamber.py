"""Qubit complementarity chamber, Gill-Massar precision bounds and MUB realizations."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleAdjustmentError, UnsupportedInputError, ValidationError
from .estimation import gm_trace
from .linalg import psd_functions, support_projector

CHAMBER_TOL = 1e-9
CSV_HEADER = ("i11", "i12", "i13", "i22", "i23", "i33")


def _bloch(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.shape != (3,):
        raise ValidationError("Bloch vector must have three components")
    if np.linalg.norm(s) >= 1:
        raise ValidationError(f"|s| = {np.linalg.norm(s):.12g}; the chamber needs a mixed state")
    return s


def _sym3(I) -> np.ndarray:
    I = np.asarray(I, dtype=float)
    if I.shape != (3, 3):
        raise ValidationError("qubit Fisher matrices are 3 x 3")
    if np.abs(I - I.T).max() > 1e-10 * max(1.0, np.abs(I).max()):
        raise ValidationError("Fisher matrix is not symmetric")
    return 0.5 * (I + I.T)


def inverse_qfi_qubit(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return np.eye(3) - np.outer(s, s)


def membership_qubit(I, s, tol: float = CHAMBER_TOL) -> bool:
    """Whether ``I`` is the Fisher matrix of some qubit measurement at Bloch point ``s``."""
    s = _bloch(s)
    I = _sym3(I)
    return bool(np.linalg.eigvalsh(I)[0] >= -tol and np.trace(inverse_qfi_qubit(s) @ I) <= 1 + tol)


def _check_weight(W, J) -> tuple[np.ndarray, np.ndarray]:
    W = np.asarray(W, dtype=float)
    J = np.asarray(J, dtype=float)
    if W.shape != J.shape:
        raise ValidationError("weighting matrix and QFI have different shapes")
    if np.linalg.eigvalsh(0.5 * (W + W.T))[0] < -CHAMBER_TOL * max(1.0, np.abs(W).max()):
        raise ValidationError("weighting matrix is not PSD")
    P = support_projector(J)
    if np.abs(W - P @ W @ P).max() > 1e-9 * max(1.0, np.abs(W).max()):
        raise InfeasibleAdjustmentError("weighting matrix has weight outside the support of J")
    return 0.5 * (W + W.T), J


def _adjusted_sqrt(W, J) -> tuple[np.ndarray, np.ndarray]:
    f = psd_functions(J)
    K = f.inv_sqrt_pinv.real
    S = psd_functions(K @ W @ K).sqrt.real
    return S, f.sqrt.real


def gm_wmse_bound(W, J, d: int) -> float:
    """Gill-Massar lower bound ``(tr sqrt(J^-1/2 W J^-1/2))^2 / (d - 1)`` on the weighted MSE."""
    W, J = _check_weight(W, J)
    S, _ = _adjusted_sqrt(W, J)
    return float(np.trace(S) ** 2 / (d - 1))


def optimal_fisher(W, J, d: int) -> np.ndarray:
    """Fisher matrix that would saturate the Gill-Massar bound for weighting ``W``."""
    W, J = _check_weight(W, J)
    S, Jh = _adjusted_sqrt(W, J)
    tr = np.trace(S)
    if tr <= 1e-300:
        raise ValidationError("weighting matrix is zero; the optimal direction is undefined")
    I = (d - 1) * Jh @ S @ Jh / tr
    return 0.5 * (I + I.T)


@dataclass(frozen=True, eq=False)
class MeasurementSchedule:
    """Random choice among projective qubit measurements ``r.sigma``.

    An all-zero axis stands for the trivial (uninformative) measurement.
    """

    axes: np.ndarray  # (k, 3)
    probabilities: np.ndarray  # (k,)

    def __post_init__(self):
        if abs(self.probabilities.sum() - 1) > 1e-9 or self.probabilities.min() < -1e-12:
            raise ValidationError("schedule probabilities must be nonnegative and sum to 1")

    def fisher(self, s) -> np.ndarray:
        """Fisher matrix of the schedule at Bloch point ``s``, tangents ``sigma_k / 2``."""
        s = np.asarray(s, dtype=float)
        I = np.zeros((3, 3))
        for r, p in zip(self.axes, self.probabilities):
            if np.any(r):
                c = r @ s
                I += p * np.outer(r, r) / (1 - c * c)
        return I

    def to_dict(self) -> dict:
        return {"entries": [{"axis": r.tolist(), "probability": float(p)}
                            for r, p in zip(self.axes, self.probabilities)]}


def realize_qubit(I, s, tol: float = 1e-8, allow_interior: bool = False) -> MeasurementSchedule:
    """Mutually unbiased projective measurements reproducing a saturating Fisher matrix.

    Eigen-axes ``r_j`` of ``I`` with eigenvalues ``a_j`` are measured with probability
    ``a_j (1 - (r_j . s)^2)``. With ``allow_interior`` a matrix strictly inside the
    chamber is realized by mixing the rescaled boundary schedule with the trivial
    measurement.
    """
    s = _bloch(s)
    I = _sym3(I)
    if not membership_qubit(I, s, tol):
        raise ValidationError("Fisher matrix lies outside the qubit complementarity chamber")
    g = float(np.trace(inverse_qfi_qubit(s) @ I))
    if abs(g - 1) > tol:
        if not allow_interior:
            raise UnsupportedInputError(
                f"GM trace {g:.9g} is not saturated; realization is given only on the boundary"
            )
        if g <= tol:
            return MeasurementSchedule(np.zeros((1, 3)), np.ones(1))
        inner = realize_qubit(I / g, s, tol)
        axes = np.vstack([inner.axes, np.zeros((1, 3))])
        probs = np.concatenate([g * inner.probabilities, [1 - g]])
        return MeasurementSchedule(axes, probs)
    a, R = np.linalg.eigh(I)
    a = np.clip(a, 0.0, None)
    sj = R.T @ s
    probs = a * (1 - sj ** 2)
    keep = probs > tol * 1e-3
    probs = probs[keep] / probs[keep].sum()
    return MeasurementSchedule(R.T[keep], probs)


def _haar_rotation(rng: np.random.Generator) -> np.ndarray:
    Q, Rm = np.linalg.qr(rng.normal(size=(3, 3)))
    Q = Q * np.sign(np.diag(Rm))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def chamber_export(s, n_samples: int, seed: int = 0) -> np.ndarray:
    """Deterministic sample of boundary Fisher matrices ``{I >= 0, tr(J^-1 I) = 1}``.

    Rows are ``(i11, i12, i13, i22, i23, i33)``. Metric-adjusted matrices are drawn as
    ``O diag(a) O^T`` with ``a`` uniform on the simplex and ``O`` Haar random, then
    mapped back by ``J^{1/2}``.
    """
    s = _bloch(s)
    if n_samples < 1:
        raise ValidationError("need at least one sample")
    rng = np.random.default_rng(seed)
    Jh = psd_functions(np.linalg.inv(inverse_qfi_qubit(s))).sqrt.real
    rows = np.empty((n_samples, 6))
    iu = np.triu_indices(3)
    for k in range(n_samples):
        a = np.sort(rng.dirichlet(np.ones(3)))[::-1]
        O = _haar_rotation(rng)
        It = O @ np.diag(a) @ O.T
        I = Jh @ It @ Jh
        rows[k] = 0.5 * (I + I.T)[iu]
    return rows


def export_csv(rows: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([f"{x:.12g}" for x in r])
    return buf.getvalue()


def row_to_matrix(row) -> np.ndarray:
    i11, i12, i13, i22, i23, i33 = row
    return np.array([[i11, i12, i13], [i12, i22, i23], [i13, i23, i33]])


def gm_trace_qubit(I, s) -> float:
    return gm_trace(I, np.linalg.inv(inverse_qfi_qubit(s)))
