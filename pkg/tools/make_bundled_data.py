"""Regenerate the bundled benchmark files from fixed seeds."""

from __future__ import annotations

from pathlib import Path

from treespile.fermion import random_ansatz, random_hamiltonian
from treespile.io import save_ansatz, save_hamiltonian

DATA = Path(__file__).resolve().parents[1] / "src" / "treespile" / "data"


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    save_ansatz(DATA / "majoranic_12x40.json", random_ansatz(12, seed=20240612, n_generators=40, n_occupied=4))
    save_ansatz(DATA / "fermionic_4.json", random_ansatz(4, seed=11, n_generators=6, kinds=("single", "double")))
    save_ansatz(DATA / "majoranic_4.json", random_ansatz(4, seed=12, n_generators=8))
    save_hamiltonian(DATA / "hamiltonian_4.json", random_hamiltonian(4, seed=13))


if __name__ == "__main__":
    main()
