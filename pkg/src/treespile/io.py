"""JSON readers and writers for ansatz, Hamiltonian, mapping, graph and config files."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any

from .anneal import AnnealConfig
from .fermion import (
    GENERATOR_KINDS,
    FermionicAnsatz,
    FermionicGenerator,
    HamiltonianSpec,
    MajoranaMonomial,
    QubitAnsatz,
    qeb_double,
    qeb_single,
)
from .hardware import HardwareGraph, preset
from .mapping import MappingTree
from .pauli import PauliString, PauliSum

QUBIT_KINDS = ("qeb_single", "qeb_double", "qubit")


def _read(path: str | Path) -> Any:
    return json.loads(Path(path).read_text())


def _write(path: str | Path, data: Any) -> None:
    Path(path).write_text(dumps(data))


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


# ------------------------------------------------------------------------ ansatz


def ansatz_from_dict(data: dict) -> FermionicAnsatz | QubitAnsatz:
    """Fermionic kinds give a :class:`FermionicAnsatz`; any qubit-pool kind gives a :class:`QubitAnsatz`."""
    n = int(data["n_modes"])
    occ = tuple(int(b) for b in data.get("reference_occupations", [0] * n))
    records = list(data.get("generators", []))
    kinds = {r["kind"] for r in records}
    unknown = kinds - set(GENERATOR_KINDS) - set(QUBIT_KINDS)
    if unknown:
        raise ValueError(f"unknown generator kinds {sorted(unknown)}")
    if kinds & set(QUBIT_KINDS):
        gens = []
        for r in records:
            theta = float(r.get("theta", 0.0))
            if r["kind"] == "qeb_single":
                gens.append((theta, qeb_single(*r["indices"], n)))
            elif r["kind"] == "qeb_double":
                gens.append((theta, qeb_double(*r["indices"], n)))
            elif r["kind"] == "qubit":
                p = PauliString.from_label(r["pauli"])
                if p.width != n:
                    raise ValueError("qubit-pool string width differs from n_modes")
                gens.append((theta, PauliSum(n, [(1j, p)])))
            else:
                raise ValueError("fermionic and qubit-pool generators cannot be mixed")
        return QubitAnsatz(n, occ, tuple(gens))
    gens = tuple(FermionicGenerator(r["kind"], tuple(r["indices"]), float(r.get("theta", 0.0))) for r in records)
    return FermionicAnsatz(n, occ, gens)


def ansatz_to_dict(a: FermionicAnsatz) -> dict:
    return {
        "n_modes": a.n_modes,
        "reference_occupations": list(a.reference_occupations),
        "generators": [{"kind": g.kind, "indices": list(g.indices), "theta": g.theta} for g in a.generators],
    }


def load_ansatz(path: str | Path) -> FermionicAnsatz | QubitAnsatz:
    return ansatz_from_dict(_read(path))


def save_ansatz(path: str | Path, a: FermionicAnsatz) -> None:
    _write(path, ansatz_to_dict(a))


# ------------------------------------------------------------------- Hamiltonian


def hamiltonian_from_dict(data: dict) -> HamiltonianSpec:
    terms = []
    for t in data["terms"]:
        re, im = t["coeff"]
        terms.append(MajoranaMonomial(tuple(int(i) for i in t["majoranas"]), complex(re, im)))
    return HamiltonianSpec(int(data["n_modes"]), tuple(terms))


def hamiltonian_to_dict(h: HamiltonianSpec) -> dict:
    return {
        "n_modes": h.n_modes,
        "terms": [{"majoranas": list(t.indices), "coeff": [t.coefficient.real, t.coefficient.imag]} for t in h.terms],
    }


def load_hamiltonian(path: str | Path) -> HamiltonianSpec:
    return hamiltonian_from_dict(_read(path))


def save_hamiltonian(path: str | Path, h: HamiltonianSpec) -> None:
    _write(path, hamiltonian_to_dict(h))


# ----------------------------------------------------------------- mapping/graph


def load_mapping(path: str | Path) -> MappingTree:
    return MappingTree.from_dict(_read(path))


def save_mapping(path: str | Path, tree: MappingTree, extra: dict | None = None) -> None:
    data = tree.to_dict()
    if extra:
        data.update(extra)
    _write(path, data)


def load_graph(spec: str) -> HardwareGraph:
    return preset(spec)


def save_graph(path: str | Path, g: HardwareGraph) -> None:
    _write(path, g.to_dict())


def load_config(path: str | Path) -> dict:
    data = _read(path)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data


def config_from(file_values: dict, overrides: dict) -> AnnealConfig:
    """Merge a config file with explicit flags; flags win."""
    merged = dict(file_values)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return AnnealConfig.from_dict(merged)


# ------------------------------------------------------------------ bundled data


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("treespile") / "data" / name))


def bundled_ansatz(name: str = "majoranic_12x40.json") -> FermionicAnsatz:
    a = load_ansatz(bundled_path(name))
    assert isinstance(a, FermionicAnsatz)
    return a
