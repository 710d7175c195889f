from __future__ import annotations

import time

import numpy as np
import pytest
from scipy.stats import unitary_group

from qincompat.povm import Povm, qubit_binary_povm


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(rng, d: int) -> np.ndarray:
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (X + X.conj().T) / 2


def random_unitary(rng, d: int) -> np.ndarray:
    return unitary_group.rvs(d, random_state=rng)


def random_state(rng, d: int, rank: int | None = None) -> np.ndarray:
    rank = rank or d
    X = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = X @ X.conj().T
    return rho / np.trace(rho).real


def random_povm(rng, d: int, n: int, rank_one: bool = False) -> Povm:
    """Random POVM from ``S^{-1/2} W_k S^{-1/2}`` with Wishart-like ``W_k``."""
    if rank_one and n < d:
        raise ValueError("rank-one POVMs need at least d outcomes")
    k = 1 if rank_one else d
    Ws = []
    for _ in range(n):
        X = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
        Ws.append(X @ X.conj().T)
    S = sum(Ws)
    w, v = np.linalg.eigh(S)
    Sih = v @ np.diag(w ** -0.5) @ v.conj().T
    return Povm.from_operators([Sih @ W @ Sih for W in Ws])


def random_stochastic(rng, rows: int, cols: int) -> np.ndarray:
    L = rng.random((rows, cols))
    return L / L.sum(axis=0)


def random_ball(rng, r_max: float = 1.0) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v) * r_max * rng.random() ** (1 / 3)


def random_unit(rng) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_psd(rng, n: int, rank: int | None = None) -> np.ndarray:
    X = rng.normal(size=(n, rank or n))
    return X @ X.T


def binary_pair(a, b) -> list[Povm]:
    return [qubit_binary_povm(a), qubit_binary_povm(b)]


# acceptance lines collected by test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}
_SESSION_START = [0.0]


def pytest_sessionstart(session):
    _SESSION_START[0] = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    elapsed = time.perf_counter() - _SESSION_START[0]
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
    verdict = "PASS" if elapsed < 300 else "FAIL"
    terminalreporter.write_line(f"suite runtime: {verdict}  {elapsed:.1f} s (limit 300 s)")
