from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import block_diag

from qincompat.bell import chsh_commutator_bound, chsh_max_general, chsh_max_qubit, restricted_tau
from qincompat.errors import ValidationError
from qincompat.linalg import SX, SZ, bloch_operator
from qincompat.measures import tau_qubit_pair

from conftest import random_unit, random_unitary


def axis(theta):
    return np.array([math.sin(theta), 0.0, math.cos(theta)])


def block_pair(angles):
    A = block_diag(*[SZ for _ in angles])
    B = block_diag(*[bloch_operator(axis(t)) for t in angles])
    return A, B


def test_qubit_examples():
    z = np.array([0.0, 0, 1])
    assert chsh_max_qubit(z, z) == pytest.approx(1)
    assert chsh_max_qubit(z, [1, 0, 0]) == pytest.approx(math.sqrt(2))
    assert chsh_max_qubit(z, axis(math.pi / 6)) == pytest.approx(math.sqrt(1.5))
    res = chsh_max_general(SZ, bloch_operator(axis(math.pi / 6)))
    assert res.max_violation == pytest.approx(math.sqrt(1.5), abs=1e-10)


def test_qubit_non_unit_rejected():
    with pytest.raises(ValidationError):
        chsh_max_qubit([0.5, 0, 0], [0, 0, 1])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_qubit_routes_agree(seed):
    rng = np.random.default_rng(seed)
    a, b = random_unit(rng), random_unit(rng)
    v = chsh_max_qubit(a, b)
    A, B = bloch_operator(a), bloch_operator(b)
    assert v == pytest.approx(math.sqrt(tau_qubit_pair(a, b)), abs=1e-10)
    assert chsh_max_general(A, B).max_violation == pytest.approx(v, abs=1e-10)
    assert chsh_commutator_bound(A, B) == pytest.approx(v, abs=1e-10)
    assert 1 - 1e-12 <= v <= math.sqrt(2) + 1e-12


def test_commuting_pair():
    A = np.diag([1.0, -1, 1, -1])
    B = np.diag([1.0, 1, -1, -1])
    res = chsh_max_general(A, B)
    assert res.max_violation == 1.0 and res.subspace is None
    assert chsh_commutator_bound(A, B) == pytest.approx(1)
    assert restricted_tau(A, B) == 1.0


def test_anticommuting_paulis():
    assert chsh_commutator_bound(SX, SZ) == pytest.approx(math.sqrt(2))


def test_block_construction_picks_max_angle():
    A, B = block_pair([math.pi / 2, math.pi / 6])
    res = chsh_max_general(A, B)
    assert res.max_violation == pytest.approx(math.sqrt(2), abs=1e-10)
    assert res.theta == pytest.approx(math.pi / 2, abs=1e-8)
    assert sorted(res.angles) == pytest.approx(sorted([math.pi / 2, math.pi / 6]), abs=1e-8)
    assert chsh_commutator_bound(A, B) == pytest.approx(res.max_violation, abs=1e-9)
    assert restricted_tau(A, B, res) == pytest.approx(res.max_violation ** 2, abs=1e-8)
    # the optimal subspace is the first block
    Q = res.subspace
    assert np.abs(Q[2:]).max() < 1e-10


def test_block_order_irrelevant():
    A, B = block_pair([math.pi / 6, math.pi / 3])
    assert chsh_max_general(A, B).max_violation == pytest.approx(math.sqrt(1 + math.sin(math.pi / 3)))


def test_restricted_pair_identity(rng):
    for _ in range(20):
        d = 2 * int(rng.integers(1, 4))
        U, V = random_unitary(rng, d), random_unitary(rng, d)
        D = np.diag([1.0] * (d // 2) + [-1.0] * (d // 2))
        A, B = U @ D @ U.conj().T, V @ D @ V.conj().T
        res = chsh_max_general(A, B)
        assert res.max_violation == pytest.approx(chsh_commutator_bound(A, B), abs=1e-9)
        assert res.max_violation ** 2 == pytest.approx(restricted_tau(A, B, res), abs=1e-8)
        assert res.max_violation == pytest.approx(math.sqrt(1 + math.sin(res.theta)), abs=1e-10)
        W = random_unitary(rng, d)
        conj = chsh_max_general(W @ A @ W.conj().T, W @ B @ W.conj().T)
        assert conj.max_violation == pytest.approx(res.max_violation, abs=1e-9)


def test_bad_spectrum():
    with pytest.raises(ValidationError):
        chsh_max_general(np.diag([1.0, 0.5]), SZ)
    with pytest.raises(ValidationError):
        chsh_max_general(SZ, np.diag([1.0, -1, 1]))


def test_to_dict_round_values():
    d = chsh_max_general(SZ, SX).to_dict()
    assert d["local_bound"] == 1.0
    assert d["max_violation"] == pytest.approx(math.sqrt(2))
