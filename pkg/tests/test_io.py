from __future__ import annotations

import json

import pytest

from treespile.anneal import AnnealConfig
from treespile.fermion import FermionicAnsatz, QubitAnsatz, random_ansatz, random_hamiltonian
from treespile.io import (
    ansatz_from_dict,
    bundled_ansatz,
    bundled_path,
    config_from,
    dumps,
    hamiltonian_from_dict,
    load_ansatz,
    load_hamiltonian,
    load_mapping,
    save_ansatz,
    save_hamiltonian,
    save_mapping,
)
from treespile.mapping import random_tree


def test_ansatz_round_trip(tmp_path):
    a = random_ansatz(5, 2, 7, kinds=("single", "double", "maj2", "maj4"))
    save_ansatz(tmp_path / "a.json", a)
    assert load_ansatz(tmp_path / "a.json") == a


def test_hamiltonian_round_trip(tmp_path):
    h = random_hamiltonian(4, 3)
    save_hamiltonian(tmp_path / "h.json", h)
    assert load_hamiltonian(tmp_path / "h.json") == h


def test_mapping_round_trip_with_extra(tmp_path):
    t = random_tree(5, 1, braids=True)
    save_mapping(tmp_path / "m.json", t, extra={"note": 1})
    assert load_mapping(tmp_path / "m.json") == t


def test_qubit_pool_kinds():
    a = ansatz_from_dict({"n_modes": 3, "generators": [
        {"kind": "qeb_single", "indices": [0, 2], "theta": 0.1},
        {"kind": "qubit", "pauli": "XYI", "theta": 0.2},
    ]})
    assert isinstance(a, QubitAnsatz) and len(a.generators) == 2
    with pytest.raises(ValueError):
        ansatz_from_dict({"n_modes": 2, "generators": [{"kind": "qubit", "pauli": "XYZ"}]})
    with pytest.raises(ValueError):
        ansatz_from_dict({"n_modes": 2, "generators": [{"kind": "triple", "indices": [0, 1, 2]}]})
    with pytest.raises(ValueError):
        ansatz_from_dict({"n_modes": 2, "generators": [
            {"kind": "maj2", "indices": [0, 1]}, {"kind": "qubit", "pauli": "XY"}]})


def test_hamiltonian_file_format():
    h = hamiltonian_from_dict({"n_modes": 1, "terms": [{"majoranas": [0, 1], "coeff": [0, 0.5]}]})
    assert h.terms[0].coefficient == 0.5j


def test_config_flags_win():
    cfg = config_from({"iterations": 10, "seed": 3}, {"seed": 8, "restarts": None})
    assert cfg == AnnealConfig(iterations=10, seed=8)


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


def test_bundled_benchmark():
    a = bundled_ansatz()
    assert isinstance(a, FermionicAnsatz)
    assert a.n_modes == 12 and len(a.generators) == 40 and a.is_majoranic
    for name in ("fermionic_4.json", "majoranic_4.json", "hamiltonian_4.json"):
        assert json.loads(bundled_path(name).read_text())["n_modes"] == 4
