"""Generalized observables: validation, coarse graining, noise and canonical constructors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ValidationError
from .linalg import PAULIS, as_hermitian, bloch_operator

POVM_TOL = 1e-9
STOCHASTIC_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Effect:
    label: str
    operator: np.ndarray

    def __post_init__(self):
        self.operator.setflags(write=False)


@dataclass(frozen=True, eq=False)
class Povm:
    """Ordered list of labeled effects on a ``dim``-dimensional Hilbert space.

    Construction only checks shapes and Hermiticity; positivity and completeness
    are reported by :func:`validate` (or enforced with ``from_operators(strict=True)``).
    """

    dim: int
    effects: tuple[Effect, ...]

    @classmethod
    def from_operators(cls, operators, labels: Sequence[str] | None = None,
                       strict: bool = True, tol: float = POVM_TOL) -> "Povm":
        ops = [as_hermitian(np.asarray(op, dtype=complex)).astype(complex) for op in operators]
        if not ops:
            raise ValidationError("a POVM needs at least one effect")
        d = ops[0].shape[0]
        if any(op.shape != (d, d) for op in ops):
            raise ValidationError("effects have inconsistent dimensions")
        if labels is None:
            labels = [str(k) for k in range(len(ops))]
        if len(labels) != len(ops):
            raise ValidationError("number of labels does not match number of effects")
        p = cls(d, tuple(Effect(str(lab), op) for lab, op in zip(labels, ops)))
        if strict:
            report = validate(p, tol)
            if not report.passed:
                raise ValidationError(f"invalid POVM: {report.message()}")
        return p

    @property
    def operators(self) -> np.ndarray:
        return np.array([e.operator for e in self.effects])

    @property
    def labels(self) -> list[str]:
        return [e.label for e in self.effects]

    def __len__(self) -> int:
        return len(self.effects)

    def probabilities(self, rho) -> np.ndarray:
        return np.einsum("ij,nji->n", np.asarray(rho), self.operators).real


@dataclass(frozen=True)
class ValidationReport:
    min_eigenvalue: float
    completeness_residual: float
    positive: bool
    complete: bool
    tol: float

    @property
    def passed(self) -> bool:
        return self.positive and self.complete

    def message(self) -> str:
        parts = []
        if not self.positive:
            parts.append(f"minimum effect eigenvalue {self.min_eigenvalue:.3e}")
        if not self.complete:
            parts.append(f"completeness residual {self.completeness_residual:.3e}")
        return "; ".join(parts) or "ok"

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "positive": self.positive,
            "complete": self.complete,
            "min_eigenvalue": self.min_eigenvalue,
            "completeness_residual": self.completeness_residual,
            "tolerance": self.tol,
        }


def validate(p: Povm, tol: float = POVM_TOL) -> ValidationReport:
    ops = p.operators
    min_eig = float(min(np.linalg.eigvalsh(op)[0] for op in ops))
    resid = float(np.abs(ops.sum(axis=0) - np.eye(p.dim)).max())
    return ValidationReport(min_eig, resid, min_eig >= -tol, resid <= tol, tol)


def require_valid(p: Povm, tol: float = POVM_TOL) -> None:
    report = validate(p, tol)
    if not report.passed:
        raise ValidationError(f"invalid POVM: {report.message()}")


def as_stochastic(L, tol: float = STOCHASTIC_TOL) -> np.ndarray:
    """Validate a column-stochastic matrix (nonnegative, columns summing to one)."""
    L = np.asarray(L, dtype=float)
    if L.ndim != 2:
        raise ValidationError(f"stochastic matrix must be 2-D, got shape {L.shape}")
    if L.min() < -tol:
        raise ValidationError(f"stochastic matrix has negative entry {L.min():.3e}")
    dev = np.abs(L.sum(axis=0) - 1.0)
    if dev.max() > tol:
        raise ValidationError(f"column {int(np.argmax(dev))} of stochastic matrix sums to "
                              f"{L.sum(axis=0)[np.argmax(dev)]:.12g}, not 1")
    return L


def is_doubly_stochastic(L, tol: float = STOCHASTIC_TOL) -> bool:
    L = np.asarray(L, dtype=float)
    return (L.ndim == 2 and L.shape[0] == L.shape[1] and L.min() >= -tol
            and np.abs(L.sum(axis=0) - 1).max() <= tol and np.abs(L.sum(axis=1) - 1).max() <= tol)


def coarse_grain(p: Povm, L, labels: Sequence[str] | None = None) -> Povm:
    """Effects ``C_xi = sum_zeta L[xi, zeta] A_zeta``."""
    L = as_stochastic(L)
    if L.shape[1] != len(p):
        raise ValidationError(f"stochastic matrix has {L.shape[1]} columns but the POVM has {len(p)} effects")
    ops = np.einsum("xz,zij->xij", L, p.operators)
    return Povm.from_operators(ops, labels, strict=False)


def depolarizing_matrix(p: Povm, eta: float) -> np.ndarray:
    """Stochastic matrix realizing :func:`depolarize` as a coarse graining."""
    _check_eta(eta)
    w = np.array([np.trace(op).real for op in p.operators]) / p.dim
    return eta * np.eye(len(p)) + (1 - eta) * np.outer(w, np.ones(len(p)))


def _check_eta(eta: float) -> None:
    if not 0.0 <= eta <= 1.0:
        raise ValidationError(f"noise parameter eta must lie in [0, 1], got {eta}")


def depolarize(p: Povm, eta: float) -> Povm:
    """``A_xi -> eta A_xi + (1 - eta) tr(A_xi) / d``."""
    _check_eta(eta)
    ops = p.operators
    tr = np.einsum("nii->n", ops).real
    new = eta * ops + (1 - eta) * (tr / p.dim)[:, None, None] * np.eye(p.dim)
    return Povm.from_operators(new, p.labels, strict=False)


def epsilon_smooth(p: Povm, eps: float) -> Povm:
    """``A_xi -> (A_xi + eps tr(A_xi) / d) / (1 + eps)``."""
    if eps < 0:
        raise ValidationError(f"epsilon must be nonnegative, got {eps}")
    ops = p.operators
    tr = np.einsum("nii->n", ops).real
    new = (ops + eps * (tr / p.dim)[:, None, None] * np.eye(p.dim)) / (1 + eps)
    return Povm.from_operators(new, p.labels, strict=False)


def conjugate(p: Povm, U) -> Povm:
    """``U A U^dagger`` applied to every effect."""
    U = np.asarray(U, dtype=complex)
    ops = np.einsum("ij,njk,lk->nil", U, p.operators, U.conj())
    return Povm.from_operators(ops, p.labels, strict=False)


def split_effect(p: Povm, index: int) -> Povm:
    """Replace effect ``index`` by two halves; the information content is unchanged."""
    ops = list(p.operators)
    labels = p.labels
    half = ops[index] / 2
    new_ops = ops[:index] + [half, half] + ops[index + 1:]
    new_labels = labels[:index] + [labels[index] + "a", labels[index] + "b"] + labels[index + 1:]
    return Povm.from_operators(new_ops, new_labels, strict=False)


def equal_up_to_relabeling(p: Povm, q: Povm, tol: float = POVM_TOL) -> bool:
    """True if the effect lists agree after some permutation of outcomes."""
    if p.dim != q.dim or len(p) != len(q):
        return False
    a, b = p.operators, q.operators
    close = np.array([[np.abs(x - y).max() <= tol for y in b] for x in a])
    # a perfect matching in the "close" bipartite graph
    rows, cols = linear_sum_assignment(~close)
    return bool(close[rows, cols].all())


# ---------------------------------------------------------------------------
# sharp observables
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SharpObservable:
    operator: np.ndarray
    eigenvalues: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.operator.shape[0]

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(int(round(np.trace(P).real)) for P in self.projectors)

    @property
    def nondegenerate(self) -> bool:
        return all(r == 1 for r in self.ranks)

    def to_povm(self) -> Povm:
        labels = [f"{lam:.12g}" for lam in self.eigenvalues]
        return Povm.from_operators(self.projectors, labels, strict=False)


def from_observable(H, degeneracy_tol: float | None = None) -> SharpObservable:
    """Group the eigenvectors of ``H`` into spectral projectors.

    Eigenvalues closer than ``degeneracy_tol`` (default ``1e-8`` times the
    spectral range, at least ``1e-12``) share one projector.
    """
    H = as_hermitian(np.asarray(H, dtype=complex)).astype(complex)
    w, v = np.linalg.eigh(H)
    w, v = w[::-1], v[:, ::-1]
    if degeneracy_tol is None:
        degeneracy_tol = max(1e-8 * (w[0] - w[-1]), 1e-12)
    clusters: list[list[int]] = [[0]]
    for k in range(1, len(w)):
        if w[clusters[-1][0]] - w[k] <= degeneracy_tol:
            clusters[-1].append(k)
        else:
            clusters.append([k])
    eigs, projs = [], []
    for c in clusters:
        vc = v[:, c]
        eigs.append(float(np.mean(w[c])))
        projs.append(vc @ vc.conj().T)
    return SharpObservable(H, tuple(eigs), tuple(projs))


def sharp_from_povm(p: Povm, tol: float = POVM_TOL) -> SharpObservable:
    """Interpret a projective POVM as a sharp observable with eigenvalues 0, 1, 2, ..."""
    ops = p.operators
    for P in ops:
        if np.abs(P @ P - P).max() > tol:
            raise ValidationError("POVM is not projective")
    H = sum(k * P for k, P in enumerate(ops))
    return SharpObservable(H, tuple(float(k) for k in range(len(ops))), tuple(ops))


def pairwise_commute(observables: Sequence[SharpObservable], tol: float = 1e-9) -> bool:
    """True iff every pair of spectral projectors across all observables commutes."""
    projs = [P for obs in observables for P in obs.projectors]
    for i, P in enumerate(projs):
        for Q in projs[i + 1:]:
            if np.linalg.norm(P @ Q - Q @ P, 2) > tol:
                return False
    return True


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

_AXES = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}


def qubit_binary_povm(a, labels=("+", "-")) -> Povm:
    """Binary qubit POVM ``{(1 + a.sigma)/2, (1 - a.sigma)/2}`` for ``|a| <= 1``."""
    a = np.asarray(a, dtype=float)
    if a.shape != (3,):
        raise ValidationError("Bloch vector must have three components")
    if np.linalg.norm(a) > 1 + 1e-12:
        raise ValidationError(f"Bloch vector norm {np.linalg.norm(a):.6g} exceeds 1")
    A = bloch_operator(a)
    return Povm.from_operators([(np.eye(2) + A) / 2, (np.eye(2) - A) / 2], labels, strict=False)


def pauli_povm(axis) -> Povm:
    """Projective measurement of ``n.sigma`` for ``axis`` in {'x','y','z'} or a unit 3-vector."""
    n = np.asarray(_AXES[axis] if isinstance(axis, str) else axis, dtype=float)
    n = n / np.linalg.norm(n)
    return qubit_binary_povm(n)


def qubit_mub_triple() -> list[Povm]:
    return [pauli_povm(ax) for ax in "xyz"]


def basis_povm(U) -> Povm:
    """Rank-one projective measurement onto the columns of a unitary."""
    U = np.asarray(U, dtype=complex)
    return Povm.from_operators([np.outer(U[:, k], U[:, k].conj()) for k in range(U.shape[1])],
                               strict=False)


def fourier_matrix(d: int) -> np.ndarray:
    j = np.arange(d)
    return np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)


def fourier_pair(d: int) -> tuple[Povm, Povm]:
    """Computational-basis measurement and its discrete-Fourier conjugate."""
    if d < 2:
        raise ValidationError("fourier_pair needs d >= 2")
    return basis_povm(np.eye(d)), basis_povm(fourier_matrix(d))


def trine_qubit() -> Povm:
    """Three effects ``(1 + n_k.sigma)/3`` with ``n_k`` at 120 degrees in the xz-plane."""
    angles = 2 * np.pi * np.arange(3) / 3
    ns = np.stack([np.sin(angles), np.zeros(3), np.cos(angles)], axis=1)
    return Povm.from_operators([(np.eye(2) + bloch_operator(n)) / 3 for n in ns], strict=False)


def trivial_povm(d: int) -> Povm:
    return Povm.from_operators([np.eye(d)], ["1"], strict=False)


def bloch_vector(op) -> np.ndarray:
    """Bloch coordinates ``tr(op sigma_k)`` of a qubit operator."""
    return np.einsum("ij,kji->k", np.asarray(op), PAULIS).real
