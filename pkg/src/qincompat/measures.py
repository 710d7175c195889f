"""Incompatibility measures, detection criteria, uncertainty relations and robustness.

The central quantity is ``tau({A_j}) = t({Gbar_j})``, the minimum trace of a
matrix dominating every traceless frame superoperator. Sets with
``tau > d - 1`` are necessarily incompatible; for ``d > 2`` the converse fails,
so the verdict vocabulary is ``incompatible`` / ``undetected``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import UnsupportedInputError, ValidationError
from .estimation import (ParamPoint, central_point, fisher_matrix, frame_superoperators,
                         metric_adjusted, qfi_matrix)
from .povm import (Povm, SharpObservable, coarse_grain, depolarize, epsilon_smooth,
                   is_doubly_stochastic, require_valid, sharp_from_povm)
from .sdp import DEFAULT_MAX_ITER, DEFAULT_TOL, SdpSolution, joint_feasibility, min_trace_dominating

log = logging.getLogger(__name__)

BOUNDARY_BAND = 1e-6


def _common_dim(povms: Sequence[Povm]) -> int:
    if not povms:
        raise ValidationError("need at least one POVM")
    d = povms[0].dim
    if any(p.dim != d for p in povms):
        raise ValidationError("POVMs have different dimensions")
    return d


@dataclass
class IncompatReport:
    tau: float
    threshold: float
    tol: float
    solution: SdpSolution | None = None
    cross_check: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "incompatible" if self.tau > self.threshold + self.tol else "undetected"

    @property
    def normalized(self) -> float:
        return self.tau / self.threshold if self.threshold > 0 else math.inf

    @property
    def excess(self) -> float:
        return max(self.tau - self.threshold, 0.0)

    @property
    def boundary(self) -> bool:
        return abs(self.tau - self.threshold) <= BOUNDARY_BAND

    def to_dict(self) -> dict:
        out = {
            "tau": self.tau,
            "threshold": self.threshold,
            "verdict": self.verdict,
            "normalized": self.normalized,
            "excess": self.excess,
            "boundary": self.boundary,
            "tolerance": self.tol,
        }
        certs = {}
        if self.solution is not None:
            s = self.solution
            certs.update(method=s.method, lower_bound=s.lower, gap=s.gap,
                         iterations=s.iterations, certified=s.certified)
        if self.cross_check is not None:
            certs["t_G_minus_one"] = self.cross_check
        out["certificates"] = certs
        out.update(self.extra)
        return out


def tau(povms: Sequence[Povm], tol: float = DEFAULT_TOL, method: str = "auto",
        cross_check: bool = True, max_iter: int = DEFAULT_MAX_ITER) -> IncompatReport:
    """Incompatibility measure computed from the frame superoperators."""
    povms = list(povms)
    d = _common_dim(povms)
    for p in povms:
        require_valid(p)
    frames = [frame_superoperators(p) for p in povms]
    # Gbar vanishes on the identity coordinate, so solve on the traceless block
    gbars = [Gb[1:, 1:] for _, Gb in frames]
    sol = min_trace_dominating(gbars, tol=tol, max_iter=max_iter, method=method)
    check = None
    if cross_check:
        check = min_trace_dominating([G for G, _ in frames], tol=tol, max_iter=max_iter,
                                     method=method).value - 1.0
        if abs(check - sol.value) > max(10 * tol, 1e-7):
            log.warning("tau routes disagree: t(Gbar) = %.12g, t(G) - 1 = %.12g", sol.value, check)
    return IncompatReport(float(sol.value), float(d - 1), tol, sol, check)


def tau_value(povms: Sequence[Povm], **kw) -> float:
    return tau(povms, cross_check=False, **kw).tau


@dataclass(frozen=True)
class PointCriterion:
    t_value: float
    threshold: float
    tol: float

    @property
    def verdict(self) -> str:
        return "incompatible" if self.t_value > self.threshold + self.tol else "undetected"

    def to_dict(self) -> dict:
        return {"t": self.t_value, "threshold": self.threshold, "verdict": self.verdict,
                "tolerance": self.tol}


def adjusted_fishers(povms: Sequence[Povm], pt: ParamPoint) -> list[np.ndarray]:
    J = qfi_matrix(pt)
    return [metric_adjusted(fisher_matrix(pt, p), J) for p in povms]


def criterion_at_point(povms: Sequence[Povm], pt: ParamPoint, tol: float = DEFAULT_TOL,
                       method: str = "auto") -> PointCriterion:
    """Universal criterion: ``t({J^-1/2 I_j J^-1/2}) > d - 1`` proves incompatibility."""
    d = _common_dim(list(povms))
    if pt.dim != d:
        raise ValidationError("parameter point dimension does not match the POVMs")
    mats = adjusted_fishers(povms, pt)
    if mats[0].size == 0:
        return PointCriterion(0.0, float(d - 1), tol)
    return PointCriterion(min_trace_dominating(mats, tol=tol, method=method).value, float(d - 1), tol)


def criterion_scan(povms: Sequence[Povm], points: Sequence[ParamPoint],
                   tol: float = DEFAULT_TOL) -> list[PointCriterion]:
    """Evaluate the criterion over several parameter points; no ordering is implied."""
    return [criterion_at_point(povms, pt, tol) for pt in points]


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def _bloch_pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != (3,) or b.shape != (3,):
        raise ValidationError("Bloch vectors must have three components")
    for name, v in (("a", a), ("b", b)):
        if np.linalg.norm(v) > 1 + 1e-12:
            raise ValidationError(f"|{name}| = {np.linalg.norm(v):.12g} exceeds 1")
    return a, b


def tau_qubit_pair(a, b) -> float:
    """tau of the binary qubit POVMs with effects ``(1 +- a.sigma)/2`` and ``(1 +- b.sigma)/2``."""
    a, b = _bloch_pair(a, b)
    s = a @ a + b @ b
    disc = max(s * s - 4 * (a @ b) ** 2, 0.0)
    return 0.5 * (s + math.sqrt(disc))


def busch_sum(a, b) -> float:
    a, b = _bloch_pair(a, b)
    return float(np.linalg.norm(a + b) + np.linalg.norm(a - b))


def busch_criterion(a, b) -> bool:
    """Coexistence of the two qubit effects: ``|a + b| + |a - b| <= 2``."""
    return busch_sum(a, b) <= 2 + 1e-12


def _as_sharp(obs) -> SharpObservable:
    return obs if isinstance(obs, SharpObservable) else sharp_from_povm(obs)


def vn_singular_values(A, B) -> np.ndarray:
    """The ``d - 1`` largest singular values of ``Gbar_A Gbar_B`` for von Neumann observables."""
    A, B = _as_sharp(A), _as_sharp(B)
    if A.dim != B.dim:
        raise ValidationError("observables have different dimensions")
    if not (A.nondegenerate and B.nondegenerate):
        raise UnsupportedInputError(
            "closed form needs nondegenerate sharp observables; use tau() for degenerate ones"
        )
    ga = frame_superoperators(A.to_povm())[1]
    gb = frame_superoperators(B.to_povm())[1]
    s = np.linalg.svd(ga @ gb, compute_uv=False)
    return np.clip(s[:A.dim - 1], 0.0, 1.0)


def tau_von_neumann(A, B) -> float:
    s = vn_singular_values(A, B)
    return float(np.sum(1 + np.sqrt(1 - s ** 2)))


def tau_von_neumann_noisy(A, B, lam: float, mu: float) -> float:
    """tau of the depolarized pair ``A(lam)``, ``B(mu)``."""
    for v in (lam, mu):
        if not 0 <= v <= 1:
            raise ValidationError("noise parameters must lie in [0, 1]")
    s = vn_singular_values(A, B)
    l2, m2 = lam * lam, mu * mu
    disc = np.clip((l2 + m2) ** 2 - 4 * l2 * m2 * s ** 2, 0.0, None)
    return float(np.sum((l2 + m2 + np.sqrt(disc)) / 2))


def tau_complementary(etas: Sequence[float], d: int) -> float:
    """tau of depolarized mutually complementary von Neumann observables."""
    etas = np.asarray(etas, dtype=float)
    if np.any(etas < 0) or np.any(etas > 1):
        raise ValidationError("noise parameters must lie in [0, 1]")
    return float((d - 1) * np.sum(etas ** 2))


def tau_doubly_stochastic(lambdas: Sequence, d: int) -> float:
    """tau of complementary observables post-processed by doubly stochastic matrices.

    Equals ``sum_j ||L_j - K/d||_F^2`` with ``K`` the all-ones matrix.
    """
    total = 0.0
    K = np.ones((d, d)) / d
    for L in lambdas:
        L = np.asarray(L, dtype=float)
        if L.shape != (d, d) or not is_doubly_stochastic(L):
            raise ValidationError("expected a doubly stochastic d x d matrix")
        total += float(np.sum((L - K) ** 2))
    return total


# ---------------------------------------------------------------------------
# uncertainty relations and noise
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UncertaintyResult:
    t_value: float
    threshold: float
    tol: float

    @property
    def verdict(self) -> str:
        return "violates-QM-bound" if self.t_value > self.threshold + self.tol else "within-QM-bound"

    def to_dict(self) -> dict:
        return {"t": self.t_value, "threshold": self.threshold, "verdict": self.verdict,
                "tolerance": self.tol}


def uncertainty_check(povms: Sequence[Povm], lambdas: Sequence, pt: ParamPoint | None = None,
                      tol: float = DEFAULT_TOL) -> UncertaintyResult:
    """Coarse-grain each POVM by its stochastic matrix and evaluate the universal criterion.

    A violation means the noisy family cannot be jointly measured.
    """
    povms = list(povms)
    if len(lambdas) != len(povms):
        raise ValidationError("need one stochastic matrix per POVM")
    d = _common_dim(povms)
    noisy = [coarse_grain(p, L) for p, L in zip(povms, lambdas)]
    pt = pt or central_point(d)
    crit = criterion_at_point(noisy, pt, tol)
    return UncertaintyResult(crit.t_value, crit.threshold, tol)


def uncertainty_check_eta(povms: Sequence[Povm], etas, pt: ParamPoint | None = None,
                          tol: float = DEFAULT_TOL) -> UncertaintyResult:
    povms = list(povms)
    etas = np.broadcast_to(np.asarray(etas, dtype=float), (len(povms),))
    d = _common_dim(povms)
    noisy = [depolarize(p, e) for p, e in zip(povms, etas)]
    crit = criterion_at_point(noisy, pt or central_point(d), tol)
    return UncertaintyResult(crit.t_value, crit.threshold, tol)


def noise_threshold(povms: Sequence[Povm], tol: float = DEFAULT_TOL) -> float:
    """Largest common ``eta`` with ``eta^2 tau <= d - 1``, clamped to [0, 1]."""
    rep = tau(povms, tol=tol, cross_check=False)
    if rep.tau <= 0:
        return 1.0
    return float(min(1.0, math.sqrt(rep.threshold / rep.tau)))


# ---------------------------------------------------------------------------
# robustness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RobustnessResult:
    epsilon: float
    lower_bound: float
    bracket: tuple[float, float]
    tau: float
    evaluations: int
    tol: float
    warning: str | None = None

    @property
    def log_robustness(self) -> float:
        return math.log1p(self.epsilon)

    @property
    def consistent(self) -> bool:
        return self.lower_bound <= self.epsilon + self.tol

    def to_dict(self) -> dict:
        out = {
            "epsilon": self.epsilon,
            "log_robustness": self.log_robustness,
            "lower_bound": self.lower_bound,
            "bracket": list(self.bracket),
            "tau": self.tau,
            "evaluations": self.evaluations,
            "consistent": self.consistent,
            "tolerance": self.tol,
        }
        if self.warning:
            out["warning"] = self.warning
        return out


def robustness(povms: Sequence[Povm], tol: float = 1e-6, feas_tol: float = DEFAULT_TOL,
               max_iter: int = DEFAULT_MAX_ITER) -> RobustnessResult:
    """Smallest ``eps`` making the epsilon-smoothed POVMs jointly measurable, by bisection.

    The upper end ``m - 1`` (``m`` POVMs) is always feasible: picking one POVM
    uniformly at random and sampling the others from ``tr(A_xi)/d`` realizes it.
    """
    povms = list(povms)
    d = _common_dim(povms)
    t = tau_value(povms, tol=feas_tol)
    lb = max(0.0, math.sqrt(t / (d - 1)) - 1.0)

    def status(eps: float) -> str:
        return joint_feasibility([epsilon_smooth(p, eps) for p in povms], tol=feas_tol,
                                 max_iter=max_iter).status

    evals = 1
    s0 = status(0.0)
    if s0 == "feasible":
        return RobustnessResult(0.0, lb, (0.0, 0.0), t, evals, tol)
    lo, hi = 0.0, float(max(len(povms) - 1, 1))
    warning = None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        s = status(mid)
        evals += 1
        if s == "feasible":
            hi = mid
        elif s == "infeasible":
            lo = mid
        else:
            warning = (f"feasibility inconclusive at eps = {mid:.9g}; "
                       f"bracket [{lo:.9g}, {hi:.9g}] reported at widened tolerance")
            warnings.warn(warning, RuntimeWarning, stacklevel=2)
            break
    res = RobustnessResult(hi, lb, (lo, hi), t, evals, tol, warning)
    if not res.consistent:
        log.warning("robustness %.9g below tau lower bound %.9g", hi, lb)
    return res
