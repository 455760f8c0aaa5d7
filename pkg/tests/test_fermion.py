from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import jw_annihilator, jw_majoranas, monomial_matrix
from treespile.fermion import (
    FermionicAnsatz,
    FermionicGenerator,
    HamiltonianSpec,
    MajoranaMonomial,
    enumerate_pool,
    expand_generator,
    is_antihermitian,
    normalize_indices,
    qeb_double,
    qeb_single,
    random_ansatz,
    random_hamiltonian,
)
from treespile.pauli import PauliString


def monos_matrix(monos, n):
    maj = jw_majoranas(n)
    return sum(monomial_matrix(m.indices, m.coefficient, maj) for m in monos)


def ladder_matrix(ops, n):
    out = np.eye(2**n, dtype=complex)
    for dag, j in ops:
        a = jw_annihilator(j, n)
        out = out @ (a.conj().T if dag else a)
    return out


def test_majorana_generators():
    assert expand_generator(FermionicGenerator("maj2", (0, 1)), 1) == [MajoranaMonomial((0, 1), 1.0)]
    assert expand_generator(FermionicGenerator("maj4", (0, 1, 2, 3)), 2) == [MajoranaMonomial((0, 1, 2, 3), 1j)]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_single_matches_dense_ladder_operators(n):
    for i, j in itertools.permutations(range(n), 2):
        monos = expand_generator(FermionicGenerator("single", (i, j)), n)
        assert is_antihermitian(monos)
        want = ladder_matrix([(1, i), (0, j)], n) - ladder_matrix([(1, j), (0, i)], n)
        np.testing.assert_allclose(monos_matrix(monos, n), want, atol=1e-12)


@pytest.mark.parametrize("idx", [(0, 1, 2, 3), (0, 2, 1, 3), (3, 1, 0, 2)])
def test_double_matches_dense_ladder_operators(idx):
    n = 4
    i, j, k, l = idx
    monos = expand_generator(FermionicGenerator("double", idx), n)
    assert len(monos) == 8
    assert is_antihermitian(monos)
    want = ladder_matrix([(1, i), (1, j), (0, k), (0, l)], n) - ladder_matrix([(1, k), (1, l), (0, i), (0, j)], n)
    np.testing.assert_allclose(monos_matrix(monos, n), want, atol=1e-12)


def test_renormalized_expansion_is_same_operator():
    n = 3
    monos = expand_generator(FermionicGenerator("single", (2, 0)), n)
    renorm = [m.normalized() for m in monos]
    np.testing.assert_allclose(monos_matrix(monos, n), monos_matrix(renorm, n), atol=1e-12)


@given(st.lists(st.integers(0, 7), min_size=0, max_size=6))
def test_normalization_idempotent_and_correct(idx):
    sign, canon = normalize_indices(idx)
    assert list(canon) == sorted(set(canon)) and len(canon) == len(set(canon))
    assert normalize_indices(canon) == (1, canon)
    maj = jw_majoranas(4)
    np.testing.assert_allclose(monomial_matrix(idx, 1, maj), monomial_matrix(canon, sign, maj), atol=1e-12)


@pytest.mark.parametrize(
    "kind, idx",
    [("maj2", (0, 0)), ("single", (1, 1)), ("maj4", (0, 1, 2)), ("nope", (0, 1)), ("maj2", (-1, 0))],
)
def test_bad_generators_rejected(kind, idx):
    with pytest.raises(ValueError):
        FermionicGenerator(kind, idx)


def test_out_of_range_rejected():
    with pytest.raises(ValueError):
        expand_generator(FermionicGenerator("maj2", (0, 4)), 2)
    with pytest.raises(ValueError):
        FermionicAnsatz(2, (0, 1), (FermionicGenerator("single", (0, 2)),))
    with pytest.raises(ValueError):
        FermionicAnsatz(2, (0, 2))


def test_hamiltonian_hermiticity():
    HamiltonianSpec(1, (MajoranaMonomial((0, 1), 1j),))
    with pytest.raises(ValueError):
        HamiltonianSpec(1, (MajoranaMonomial((0, 1), 1.0),))
    with pytest.raises(ValueError):
        HamiltonianSpec(1, (MajoranaMonomial((0, 2), 1j),))


@pytest.mark.parametrize("seed", range(5))
def test_random_hamiltonian_is_hermitian_matrix(seed):
    h = random_hamiltonian(3, seed)
    m = monos_matrix(h.terms, 3)
    np.testing.assert_allclose(m, m.conj().T, atol=1e-12)


def test_qeb_single_letters():
    s = qeb_single(0, 2, 3)
    assert {(str(p), c) for c, p in s} == {("XIY", 0.5j), ("YIX", -0.5j)}
    assert s.is_antihermitian()


def test_qeb_double_antihermitian():
    assert qeb_double(0, 1, 2, 3, 4).is_antihermitian()
    assert len(qeb_double(0, 1, 2, 3, 4)) == 8


@pytest.mark.parametrize("n", [2, 3, 4])
def test_pool_sizes(n):
    maj = enumerate_pool("majoranic", n)
    assert sum(g.kind == "maj2" for g in maj) == math.comb(2 * n, 2)
    assert sum(g.kind == "maj4" for g in maj) == math.comb(2 * n, 4)
    for g in maj:
        assert is_antihermitian(expand_generator(g, n))
    fer = enumerate_pool("fermionic", n)
    assert sum(g.kind == "single" for g in fer) == math.comb(n, 2)


def test_qubit_pool_contains_split_qeb_string():
    pool = enumerate_pool("qubit", 3)
    strings = {str(p) for gen in pool for _, p in gen}
    assert "XYI" in strings
    assert all(len(g) == 1 and g.is_antihermitian() for g in pool)
    assert {bin(PauliString.from_label(s).support_mask).count("1") for s in strings} == {2}


def test_pool_needs_two_modes():
    with pytest.raises(ValueError):
        enumerate_pool("majoranic", 1)
    with pytest.raises(ValueError):
        enumerate_pool("unknown", 3)


def test_random_ansatz_seeded():
    a = random_ansatz(5, 3, 10, kinds=("single", "double", "maj2", "maj4"))
    assert a == random_ansatz(5, 3, 10, kinds=("single", "double", "maj2", "maj4"))
    assert len(a.generators) == 10
    assert a.reference_occupations == (1, 1, 0, 0, 0)
