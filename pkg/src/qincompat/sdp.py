"""Semidefinite programming core.

A dense primal-dual interior-point solver for block-diagonal problems

    (P)  min <C, X>   s.t.  <A_i, X> = b_i,  X >= 0
    (D)  max b . y    s.t.  sum_i y_i A_i + Z = C,  Z >= 0

using the HKM search direction with Mehrotra predictor-corrector steps. Blocks
may be real symmetric or complex Hermitian. Two problems are built on it: the
minimum-trace dominating matrix ``t({M_j})`` and joint measurability of POVMs
in phase-I form.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve, null_space

from .errors import CapExceededError, NotPSDError, SolverError, ValidationError
from .linalg import abs_hermitian, gell_mann_basis, min_eigenvalue
from .povm import Povm, require_valid

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-7
DEFAULT_MAX_ITER = 200
OUTCOME_CAP = 4096


# ---------------------------------------------------------------------------
# generic interior-point solver
# ---------------------------------------------------------------------------

@dataclass
class IpmResult:
    X: list[np.ndarray]
    y: np.ndarray
    Z: list[np.ndarray]
    pobj: float
    dobj: float
    pinf: float
    dinf: float
    iterations: int
    converged: bool
    history: list[tuple[float, float]] = field(default_factory=list)


def _sym(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().swapaxes(-1, -2))


def _aop(A: list[np.ndarray], X: list[np.ndarray]) -> np.ndarray:
    return sum(np.einsum("kij,ji->k", Ab, Xb).real for Ab, Xb in zip(A, X))


def _aadj(A: list[np.ndarray], y: np.ndarray) -> list[np.ndarray]:
    return [np.einsum("k,kij->ij", y, Ab) for Ab in A]


def _inner(X: list[np.ndarray], Z: list[np.ndarray]) -> float:
    return float(sum(np.vdot(Xb, Zb).real for Xb, Zb in zip(X, Z)))


def _max_step(X: list[np.ndarray], dX: list[np.ndarray]) -> float:
    """Largest alpha keeping X + alpha dX PSD (inf if unbounded)."""
    alpha = np.inf
    for Xb, dXb in zip(X, dX):
        L = np.linalg.cholesky(Xb)
        Li = np.linalg.inv(L)
        lam = np.linalg.eigvalsh(_sym(Li @ dXb @ Li.conj().T))[0]
        if lam < 0:
            alpha = min(alpha, -1.0 / lam)
    return alpha


def solve_sdp(C: list[np.ndarray], A: list[np.ndarray], b: np.ndarray,
              X0: list[np.ndarray], y0: np.ndarray, Z0: list[np.ndarray],
              gap_tol: float = 1e-10, feas_tol: float = 1e-10,
              max_iter: int = DEFAULT_MAX_ITER, record_history: bool = False,
              certify: Callable | None = None, callback: Callable | None = None) -> IpmResult:
    """Primal-dual interior-point iterations from a strictly positive start.

    ``A`` holds, per block, an array of shape ``(k, n_b, n_b)`` with the block of
    every constraint matrix ``A_i``. ``certify(X, y, Z)``, if given, returns the
    duality gap after repairing an iterate to exact feasibility; the iterate with
    the smallest such gap is returned, since raw iterates can deteriorate once the
    residuals reach machine precision. ``callback(X, y, Z)`` runs on every iterate.
    """
    X = [np.array(x) for x in X0]
    Z = [np.array(z) for z in Z0]
    Aflat = [Ab.reshape(Ab.shape[0], -1) for Ab in A]
    y = np.array(y0, dtype=float)
    n_total = sum(x.shape[0] for x in X)
    bnorm = 1 + np.linalg.norm(b)
    cnorm = 1 + max(np.abs(c).max() for c in C)
    history: list[tuple[float, float]] = []
    converged = False
    it = 0
    # iterates can deteriorate at machine precision; keep the best one seen
    best: tuple = (np.inf,)

    def direction(Rc, rp, Rd, Zinv, XRdZ, Mfac):
        rhs = rp - _aop(A, Rc) + _aop(A, XRdZ)
        dy = cho_solve(Mfac, rhs)
        dZ = [Rdb - Adb for Rdb, Adb in zip(Rd, _aadj(A, dy))]
        dX = [_sym(Rcb - Xb @ dZb @ Zib) for Rcb, Xb, dZb, Zib in zip(Rc, X, dZ, Zinv)]
        return dX, dy, dZ

    for it in range(max_iter + 1):
        rp = b - _aop(A, X)
        Rd = [Cb - Zb - Ab for Cb, Zb, Ab in zip(C, Z, _aadj(A, y))]
        pobj = _inner(C, X)
        dobj = float(b @ y)
        pinf = float(np.linalg.norm(rp) / bnorm)
        dinf = float(max(np.abs(r).max() for r in Rd) / cnorm)
        mu = _inner(X, Z) / n_total
        if record_history:
            history.append((pobj, dobj))
        if callback is not None:
            callback(X, y, Z)
        rgap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
        if certify is None:
            score = 0.0  # keep the latest iterate
        elif rgap < 1e-7:
            score = certify(X, y, Z)
        else:
            score = np.inf
        if score <= best[0]:
            best = (score, X, y, Z, pobj, dobj, pinf, dinf, it)
        if rgap <= gap_tol and pinf <= feas_tol and dinf <= feas_tol:
            converged = True
            break
        if it == max_iter:
            break
        try:
            Zinv = [np.linalg.inv(Zb) for Zb in Z]
            # M_ik = Re tr(A_i X A_k Z^-1), via row-major vec(X A Z^-1) = (X kron Z^-T) vec(A)
            M = sum((Af.conj() @ np.kron(Xb, Zib.T) @ Af.T).real
                    for Af, Xb, Zib in zip(Aflat, X, Zinv))
            M = 0.5 * (M + M.T)
            Mfac = cho_factor(M)
        except np.linalg.LinAlgError:
            log.debug("Schur complement factorization failed at iteration %d", it)
            break
        XRdZ = [Xb @ Rdb @ Zib for Xb, Rdb, Zib in zip(X, Rd, Zinv)]

        # predictor
        dXa, dya, dZa = direction([-Xb for Xb in X], rp, Rd, Zinv, XRdZ, Mfac)
        try:
            ap = min(1.0, _max_step(X, dXa))
            ad = min(1.0, _max_step(Z, dZa))
        except np.linalg.LinAlgError:
            log.debug("iterate lost definiteness at iteration %d (predictor)", it)
            break
        mu_aff = _inner([Xb + ap * d for Xb, d in zip(X, dXa)],
                        [Zb + ad * d for Zb, d in zip(Z, dZa)]) / n_total
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3)) if mu > 0 else 0.0

        # corrector
        Rc = [sigma * mu * Zib - Xb - dXab @ dZab @ Zib
              for Zib, Xb, dXab, dZab in zip(Zinv, X, dXa, dZa)]
        dX, dy, dZ = direction(Rc, rp, Rd, Zinv, XRdZ, Mfac)
        try:
            ap = min(1.0, 0.98 * _max_step(X, dX))
            ad = min(1.0, 0.98 * _max_step(Z, dZ))
        except np.linalg.LinAlgError:
            log.debug("iterate lost definiteness at iteration %d (corrector)", it)
            break
        if ap < 1e-12 and ad < 1e-12:
            log.debug("step length collapsed at iteration %d", it)
            break
        X = [_sym(Xb + ap * d) for Xb, d in zip(X, dX)]
        y = y + ad * dy
        Z = [_sym(Zb + ad * d) for Zb, d in zip(Z, dZ)]

    if best[0] == np.inf and certify is not None:
        best = (np.inf, X, y, Z, pobj, dobj, pinf, dinf, it)
    _, X, y, Z, pobj, dobj, pinf, dinf, best_it = best
    if best_it != it:
        log.debug("returning iterate %d of %d", best_it, it)
    return IpmResult(X, y, Z, pobj, dobj, pinf, dinf, it, converged, history)


# ---------------------------------------------------------------------------
# minimum-trace dominating matrix
# ---------------------------------------------------------------------------

@dataclass
class SdpSolution:
    """Certified solution of ``min tr X  s.t.  X >= M_j``.

    ``primal`` is the dominating matrix; ``duals`` are the multipliers ``Y_j``
    (PSD, summing to the identity) of the dual ``max sum_j tr(M_j Y_j)``.
    Both are repaired to exact feasibility, so ``lower <= t <= value`` holds
    rigorously up to floating-point error.
    """

    value: float
    primal: np.ndarray
    duals: list[np.ndarray]
    primal_infeasibility: float
    dual_infeasibility: float
    gap: float
    lower: float
    iterations: int
    method: str
    tol: float
    certified: bool
    history: list[tuple[float, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        from .io import matrix_to_json
        return {
            "value": self.value,
            "lower_bound": self.lower,
            "gap": self.gap,
            "primal_infeasibility": self.primal_infeasibility,
            "dual_infeasibility": self.dual_infeasibility,
            "iterations": self.iterations,
            "method": self.method,
            "certified": self.certified,
            "tolerance": self.tol,
            "primal": matrix_to_json(self.primal),
            "duals": [matrix_to_json(Y) for Y in self.duals],
        }


def _check_inputs(Ms: Sequence, tol: float) -> list[np.ndarray]:
    if len(Ms) == 0:
        raise ValidationError("need at least one matrix")
    out = []
    n = None
    for j, M in enumerate(Ms):
        M = np.asarray(M, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValidationError(f"matrix {j} is not square: shape {M.shape}")
        if n is not None and M.shape[0] != n:
            raise ValidationError(f"matrix {j} has size {M.shape[0]}, expected {n}")
        n = M.shape[0]
        scale = max(1.0, np.abs(M).max())
        if np.abs(M - M.T).max() > 1e-10 * scale:
            raise ValidationError(f"matrix {j} is not symmetric")
        M = 0.5 * (M + M.T)
        lam = np.linalg.eigvalsh(M)[0] if n else 0.0
        if lam < -tol * scale:
            raise NotPSDError(lam, tol * scale)
        out.append(M)
    return out


def _repair_primal(X: np.ndarray, Ms: list[np.ndarray]) -> tuple[np.ndarray, float]:
    viol = max(0.0, max(-min_eigenvalue(X - M) for M in Ms))
    return X + viol * np.eye(X.shape[0]), viol


def _repair_duals(Ys: list[np.ndarray]) -> tuple[list[np.ndarray], float]:
    n = Ys[0].shape[0]
    clipped = []
    neg = 0.0
    for Y in Ys:
        w, v = np.linalg.eigh(_sym(Y))
        neg = max(neg, -w[0])
        clipped.append((v * np.clip(w, 0, None)) @ v.T)
    S = sum(clipped)
    dinf = max(neg, float(np.abs(S - np.eye(n)).max()))
    w, v = np.linalg.eigh(S)
    Sih = (v / np.sqrt(np.clip(w, 1e-300, None))) @ v.T
    return [_sym(Sih @ Y @ Sih) for Y in clipped], dinf


def _certified_bounds(X: np.ndarray, Ys: list[np.ndarray], Ms: list[np.ndarray]) -> tuple[float, float]:
    """Upper and lower bounds on t from an iterate repaired to exact feasibility."""
    Xr, _ = _repair_primal(X, Ms)
    Yr, _ = _repair_duals(Ys)
    return float(np.trace(Xr)), float(sum(np.sum(M * Y) for M, Y in zip(Ms, Yr)))


def _finish(X: np.ndarray, Ys: list[np.ndarray], Ms: list[np.ndarray], iterations: int,
            method: str, tol: float, scale: float = 1.0,
            history: list | None = None) -> SdpSolution:
    Xr, pinf = _repair_primal(X, Ms)
    Yr, dinf = _repair_duals(Ys)
    upper = float(np.trace(Xr))
    lower = float(sum(np.sum(M * Y) for M, Y in zip(Ms, Yr)))
    gap = upper - lower
    cert = gap * scale <= max(tol, 1e-12 * max(1.0, abs(upper * scale)))
    return SdpSolution(upper * scale, Xr * scale, Yr, pinf * scale, dinf, gap * scale,
                       lower * scale, iterations, method, tol, bool(cert), history or [])


def _sym_basis(n: int) -> np.ndarray:
    mats = []
    for i in range(n):
        E = np.zeros((n, n))
        E[i, i] = 1.0
        mats.append(E)
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n))
            E[i, j] = E[j, i] = 1 / np.sqrt(2)
            mats.append(E)
    return np.array(mats)


def _two_matrix(M1: np.ndarray, M2: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    D = M1 - M2
    w, v = np.linalg.eigh(D)
    thr = 1e-14 * max(1.0, np.abs(w).max())
    Pp = v[:, w > thr] @ v[:, w > thr].T
    Pm = v[:, w < -thr] @ v[:, w < -thr].T
    P0 = np.eye(len(w)) - Pp - Pm
    X = 0.5 * (M1 + M2) + 0.5 * abs_hermitian(D)
    return X, [Pp + 0.5 * P0, Pm + 0.5 * P0]


def min_trace_dominating(Ms: Sequence, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                         method: str = "auto", record_history: bool = False) -> SdpSolution:
    """``t({M_j}) = min{tr X : X >= M_j for all j}`` with a dual certificate.

    ``method`` is ``"auto"`` (closed forms for one or two matrices, interior point
    otherwise), ``"closed"`` or ``"ipm"``.
    """
    Ms = _check_inputs(Ms, tol)
    n = Ms[0].shape[0]
    m = len(Ms)
    if method not in ("auto", "closed", "ipm"):
        raise ValidationError(f"unknown method {method!r}")
    if all(not np.any(M) for M in Ms):
        return _finish(np.zeros((n, n)), [np.eye(n) / m] * m, Ms, 0, "trivial", tol)
    if method != "ipm" and m == 1:
        return _finish(Ms[0], [np.eye(n)], Ms, 0, "closed", tol)
    if method != "ipm" and m == 2:
        X, Ys = _two_matrix(*Ms)
        return _finish(X, Ys, Ms, 0, "closed", tol)
    if method == "closed":
        raise ValidationError("closed form exists only for one or two matrices")

    scale = max(float(np.trace(M)) for M in Ms)
    # Optimal X can be compressed onto the joint support of the M_j without
    # raising tr X, and a shared kernel makes the dual non-unique, so solve there.
    w, V = np.linalg.eigh(sum(Ms) / scale)
    Q = V[:, w > 1e-12 * w[-1]]
    Ns = [Q.T @ M @ Q / scale for M in Ms]
    n_full, n = n, Q.shape[1]
    S = _sym_basis(n)
    k = len(S)
    C = [-N for N in Ns]
    A = [-S] * m
    b = -np.einsum("kii->k", S)
    X_init = sum(Ns) + np.eye(n)
    y0 = np.einsum("kij,ij->k", S, X_init)
    Z0 = [X_init - N for N in Ns]
    Y0 = [np.eye(n) / m for _ in range(m)]
    hist: list[tuple[float, float]] = []

    def bounds(Yb, yv, _Z):
        upper, lower = _certified_bounds(np.einsum("k,kij->ij", yv, S), [Y.real for Y in Yb], Ns)
        return upper - lower

    def observe(Yb, yv, Zb):
        upper, lower = _certified_bounds(np.einsum("k,kij->ij", yv, S), [Y.real for Y in Yb], Ns)
        hist.append((upper * scale, lower * scale))

    res = solve_sdp(C, A, b, Y0, y0, Z0, max_iter=max_iter, certify=bounds,
                    callback=observe if record_history else None)
    Xopt = Q @ np.einsum("k,kij->ij", res.y, S) @ Q.T
    kernel = (np.eye(n_full) - Q @ Q.T) / m
    Ys = [Q @ _sym(Y).real @ Q.T + kernel for Y in res.X]
    sol = _finish(Xopt, Ys, [M / scale for M in Ms], res.iterations, "ipm", tol, scale, hist)
    if not res.converged and not sol.certified:
        raise SolverError("interior-point solver did not converge", sol.lower, sol.value,
                          res.iterations)
    log.debug("t-solve: %d matrices of size %d, %d vars, %d iterations, gap %.2e",
              m, n, k, res.iterations, sol.gap)
    return sol


@dataclass(frozen=True)
class CertificateReport:
    primal_margin: float
    dual_min_eigenvalue: float
    dual_residual: float
    primal_value: float
    dual_value: float
    gap: float
    tol: float

    @property
    def passed(self) -> bool:
        lim = 10 * self.tol
        return (self.primal_margin >= -lim and self.dual_min_eigenvalue >= -lim
                and self.dual_residual <= lim and abs(self.gap) <= lim)

    def to_dict(self) -> dict:
        return {**self.__dict__, "passed": self.passed}


def verify_solution(sol: SdpSolution, Ms: Sequence, tol: float | None = None) -> CertificateReport:
    """Recompute feasibility and duality gap of a solution from scratch."""
    tol = sol.tol if tol is None else tol
    Ms = [np.asarray(M, dtype=float) for M in Ms]
    X = np.asarray(sol.primal)
    n = X.shape[0]
    margin = min(min_eigenvalue(X - M) for M in Ms)
    ymin = min(min_eigenvalue(Y) for Y in sol.duals)
    resid = float(np.abs(sum(sol.duals) - np.eye(n)).max())
    pval = float(np.trace(X))
    dval = float(sum(np.sum(M * Y) for M, Y in zip(Ms, sol.duals)))
    return CertificateReport(margin, ymin, resid, pval, dval, pval - dval, tol)


# ---------------------------------------------------------------------------
# joint measurability
# ---------------------------------------------------------------------------

@dataclass
class JointSolution:
    """Outcome of the joint-measurability test.

    ``slack`` is the optimal minimum eigenvalue over the joint effects; it is
    nonnegative exactly when a joint observable exists. ``lower`` comes from the
    returned joint candidate, ``upper`` from the dual witness.
    """

    status: str  # feasible | infeasible | inconclusive
    joint: Povm | None
    certificate: dict | None
    slack: float
    lower: float
    upper: float
    iterations: int
    tol: float
    outcome_shape: tuple[int, ...]

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def to_dict(self, include_matrices: bool = True) -> dict:
        from .io import povm_to_json, matrix_to_json
        out = {
            "status": self.status,
            "feasible": self.feasible,
            "slack": self.slack,
            "lower_bound": self.lower,
            "upper_bound": self.upper,
            "iterations": self.iterations,
            "outcome_shape": list(self.outcome_shape),
            "tolerance": self.tol,
        }
        if include_matrices and self.joint is not None:
            out["joint"] = povm_to_json(self.joint)
        if include_matrices and self.certificate is not None:
            cert = dict(self.certificate)
            cert["operators"] = [[matrix_to_json(Y) for Y in row] for row in cert["operators"]]
            out["certificate"] = cert
        return out


def _incidence(shape: tuple[int, ...]) -> tuple[list[tuple[int, ...]], np.ndarray]:
    tuples = list(product(*[range(n) for n in shape]))
    offsets = np.concatenate([[0], np.cumsum(shape)[:-1]])
    K = np.zeros((len(tuples), sum(shape)))
    for r, t in enumerate(tuples):
        for j, xi in enumerate(t):
            K[r, offsets[j] + xi] = 1.0
    return tuples, K


def joint_feasibility(povms: Sequence[Povm], tol: float = DEFAULT_TOL,
                      max_iter: int = DEFAULT_MAX_ITER, cap: int = OUTCOME_CAP) -> JointSolution:
    """Decide whether the POVMs admit a joint observable.

    Phase-I form: maximize ``lam`` subject to ``M_t >= lam * 1`` over all joint
    POVMs ``{M_t}`` with the prescribed marginals, ``t`` ranging row-major over
    outcome tuples. ``lam* >= -tol`` is reported feasible (with the joint), a
    certified ``lam* < -tol`` infeasible (with a witness), anything else
    inconclusive.
    """
    povms = list(povms)
    if not povms:
        raise ValidationError("need at least one POVM")
    d = povms[0].dim
    for p in povms:
        if p.dim != d:
            raise ValidationError("POVMs have different dimensions")
        require_valid(p)
    shape = tuple(len(p) for p in povms)
    N = int(np.prod(shape))
    if N > cap:
        raise CapExceededError(f"{N} joint outcomes exceed the cap of {cap}")
    if len(povms) == 1:
        p = povms[0]
        lam = min(min_eigenvalue(op) for op in p.operators)
        return JointSolution("feasible", p, None, lam, lam, lam, 0, tol, shape)

    tuples, K = _incidence(shape)
    marg = [p.operators for p in povms]
    # particular solution with the right marginals
    M0 = np.zeros((N, d, d), dtype=complex)
    for r, t in enumerate(tuples):
        M0[r] = sum(marg[j][xi] * n / N for j, (xi, n) in enumerate(zip(t, shape)))
        M0[r] -= (len(povms) - 1) / N * np.eye(d)
    W = null_space(K.T)  # (N, r): directions with vanishing marginals
    basis = gell_mann_basis(d).elements
    nz = W.shape[1] * d * d
    k = nz + 1
    # block t of A_(r, c) is -W[t, r] B_c; the last variable is lam with block +1
    A = []
    for t in range(N):
        At = np.empty((k, d, d), dtype=complex)
        At[:nz] = -(W[t][:, None, None, None] * basis[None]).reshape(nz, d, d)
        At[nz] = np.eye(d)
        A.append(At)
    C = list(M0)
    b = np.zeros(k)
    b[nz] = 1.0
    lam0 = min(min_eigenvalue(M) for M in M0) - 1.0
    y0 = np.zeros(k)
    y0[nz] = lam0
    Z0 = [M - lam0 * np.eye(d) for M in M0]
    X0 = [np.eye(d, dtype=complex) / (N * d) for _ in range(N)]
    res = solve_sdp(C, A, b, X0, y0, Z0, max_iter=max_iter)

    z = res.y[:nz].reshape(W.shape[1], d * d)
    Ms = M0 + np.einsum("tr,rc,cij->tij", W, z, basis)
    Ms = _sym(Ms)
    lower = min(min_eigenvalue(M) for M in Ms)

    # dual witness: X_t = sum_j Y_{j, t_j}
    Xs = np.array([_sym(x) for x in res.X])
    Yflat = np.linalg.lstsq(K, Xs.reshape(N, -1), rcond=None)[0].reshape(-1, d, d)
    Yflat = _sym(Yflat)
    Xrec = np.einsum("ts,sij->tij", K, Yflat)
    shift = max(0.0, -min(min_eigenvalue(x) for x in Xrec))
    offsets = np.concatenate([[0], np.cumsum(shape)[:-1]])
    # adding shift*1 to every Y_{0, xi} makes each reconstructed X_t PSD
    Yflat[offsets[0]:offsets[0] + shape[0]] += shift * np.eye(d)
    norm = float(np.einsum("tii->", Xrec).real) + N * d * shift
    all_ops = np.concatenate(marg)
    wit = float(np.einsum("sij,sji->", all_ops, Yflat).real)
    upper = wit / norm if norm > 0 else np.inf

    if lower >= -tol:
        status = "feasible"
    elif upper < -tol:
        status = "infeasible"
    else:
        status = "inconclusive"
    joint = None
    if status != "infeasible":
        labels = ["|".join(povms[j].labels[xi] for j, xi in enumerate(t)) for t in tuples]
        joint = Povm.from_operators(Ms, labels, strict=False)
    certificate = None
    if status != "feasible":
        Ys = [[Yflat[offsets[j] + xi] / norm for xi in range(n)] for j, n in enumerate(shape)]
        certificate = {"value": upper, "operators": Ys,
                       "description": "sum_j Y[j][t_j] >= 0 for every outcome tuple t while "
                                      "sum_{j,xi} tr(A_j[xi] Y[j][xi]) = value < 0"}
    slack = lower if status == "feasible" else upper
    return JointSolution(status, joint, certificate, float(slack), float(lower), float(upper),
                         res.iterations, tol, shape)


def marginals(joint: Povm, shape: tuple[int, ...]) -> list[np.ndarray]:
    """Marginal effects of a joint POVM whose outcomes are ordered row-major over ``shape``."""
    ops = joint.operators.reshape(*shape, joint.dim, joint.dim)
    out = []
    for j in range(len(shape)):
        axes = tuple(i for i in range(len(shape)) if i != j)
        out.append(ops.sum(axis=axes) if axes else ops)
    return out
