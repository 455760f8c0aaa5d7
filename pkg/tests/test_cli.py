from __future__ import annotations

import csv
import json

import pytest

from treespile.circuit import parse_qasm
from treespile.cli import content_hash, main
from treespile.hardware import preset
from treespile.fermion import FermionicAnsatz, FermionicGenerator, random_ansatz
from treespile.io import bundled_path, save_ansatz, save_mapping
from treespile.mapping import MappingTree, bonsai_tree, jw_tree


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def last_error(err: str) -> dict:
    lines = err.strip().splitlines()
    assert len(lines) == 1
    return json.loads(lines[0])


@pytest.fixture
def small(tmp_path):
    a = random_ansatz(6, 5, 10)
    save_ansatz(tmp_path / "a.json", a)
    return tmp_path, a


def test_treespile_outputs_are_deterministic(capsys, small):
    tmp, a = small
    for d in ("o1", "o2"):
        code, _, _ = run(capsys, "treespile", "--ansatz", str(tmp / "a.json"), "--graph", "heavy_hex:12",
                         "--mode", "cp", "--cost", "pauli", "--seed", "7", "--iterations", "300",
                         "--out-dir", str(tmp / d))
        assert code == 0
    c1 = json.loads((tmp / "o1" / "cost.json").read_text())
    c2 = json.loads((tmp / "o2" / "cost.json").read_text())
    assert c1["content_sha256"] == c2["content_sha256"] == content_hash(c1)
    m1 = json.loads((tmp / "o1" / "mapping.json").read_text())
    m2 = json.loads((tmp / "o2" / "mapping.json").read_text())
    assert m1["content_sha256"] == m2["content_sha256"]
    assert (tmp / "o1" / "trace.csv").read_text() == (tmp / "o2" / "trace.csv").read_text()
    assert c1["best_cost"] <= c1["initial_cost"]
    assert MappingTree.from_dict(m1).is_subgraph_of(preset("heavy_hex:12"))
    rows = list(csv.reader((tmp / "o1" / "trace.csv").read_text().splitlines()[1:]))
    assert rows[0] == ["iteration", "cost"] and len(rows) == 302


def test_ms_mode_only_permutes_modes(capsys, tmp_path):
    path = bundled_path("fermionic_4.json")
    code, _, _ = run(capsys, "treespile", "--ansatz", str(path), "--graph", "line:4", "--mode", "ms",
                     "--iterations", "200", "--out-dir", str(tmp_path))
    assert code == 0
    t = MappingTree.from_dict(json.loads((tmp_path / "mapping.json").read_text()))
    jw = jw_tree(4)
    assert t.root == jw.root
    assert {q: (nd.braid, nd.children) for q, nd in t.nodes.items()} == {q: (nd.braid, nd.children) for q, nd in jw.nodes.items()}


def test_config_file_and_flag_precedence(capsys, small):
    tmp, _ = small
    (tmp / "cfg.json").write_text(json.dumps({"iterations": 50, "seed": 1, "restarts": 2}))
    code, _, _ = run(capsys, "treespile", "--ansatz", str(tmp / "a.json"), "--graph", "heavy_hex:12",
                     "--config", str(tmp / "cfg.json"), "--seed", "4", "--out-dir", str(tmp / "o"))
    assert code == 0
    cfg = json.loads((tmp / "o" / "cost.json").read_text())["manifest"]["config"]
    assert (cfg["iterations"], cfg["seed"], cfg["restarts"]) == (50, 4, 2)


def test_qubit_pool_is_rejected(capsys, tmp_path):
    (tmp_path / "q.json").write_text(json.dumps({"n_modes": 2, "generators": [{"kind": "qeb_single", "indices": [0, 1]}]}))
    code, _, err = run(capsys, "treespile", "--ansatz", str(tmp_path / "q.json"), "--graph", "line:2",
                       "--out-dir", str(tmp_path / "o"))
    assert code == 2
    assert last_error(err)["message"] == "pool has no fermionic representation"


def test_compile_examples(capsys, tmp_path):
    vac = FermionicAnsatz(2, (0, 0))
    save_ansatz(tmp_path / "vac.json", vac)
    save_mapping(tmp_path / "jw.json", jw_tree(2))
    code, out, _ = run(capsys, "compile", "--ansatz", str(tmp_path / "vac.json"), "--mapping", str(tmp_path / "jw.json"),
                       "--graph", "line:2", "--qasm", str(tmp_path / "vac.qasm"))
    assert code == 0 and parse_qasm((tmp_path / "vac.qasm").read_text()).gates == []
    maj4 = FermionicAnsatz(2, (0, 0), (FermionicGenerator("maj4", (0, 1, 2, 3), 0.3),))
    save_ansatz(tmp_path / "m4.json", maj4)
    code, out, _ = run(capsys, "compile", "--ansatz", str(tmp_path / "m4.json"), "--mapping", str(tmp_path / "jw.json"),
                       "--graph", "line:2")
    assert code == 0 and json.loads(out)["cnots"] == 2


def test_compile_cp_on_heavy_hex_is_on_edge(capsys, tmp_path):
    g = preset("heavy_hex:12")
    a = random_ansatz(6, 8, 12, kinds=("single", "double", "maj2", "maj4"))
    save_ansatz(tmp_path / "a.json", a)
    save_mapping(tmp_path / "m.json", bonsai_tree(g, 6))
    code, out, _ = run(capsys, "compile", "--ansatz", str(tmp_path / "a.json"), "--mapping", str(tmp_path / "m.json"),
                       "--graph", "heavy_hex:12", "--qasm", str(tmp_path / "c.qasm"))
    report = json.loads(out)
    assert code == 0 and report["on_edge"]
    circ = parse_qasm((tmp_path / "c.qasm").read_text())
    assert not circ.off_edge_cnots(g) and circ.cnot_count == report["cnots"] <= report["cnots_before_cancellation"]


def test_compile_size_mismatch(capsys, tmp_path):
    save_ansatz(tmp_path / "a.json", FermionicAnsatz(3, (0, 0, 0)))
    save_mapping(tmp_path / "m.json", jw_tree(2))
    code, _, err = run(capsys, "compile", "--ansatz", str(tmp_path / "a.json"), "--mapping", str(tmp_path / "m.json"),
                       "--graph", "line:3")
    assert code == 2 and last_error(err)["command"] == "compile"


@pytest.mark.parametrize("kind, expect", [("pauli_fc", "pauli_fc"), ("pauli_lc", "pauli_lc"), ("compiled", "compiled")])
def test_cost_command(capsys, small, kind, expect):
    tmp, a = small
    g = preset("heavy_hex:12")
    save_mapping(tmp / "m.json", bonsai_tree(g, 6))
    code, out, _ = run(capsys, "cost", "--ansatz", str(tmp / "a.json"), "--mapping", str(tmp / "m.json"),
                       "--graph", "heavy_hex:12", "--kind", kind, "--csv", str(tmp / "c.csv"))
    r = json.loads(out)
    assert code == 0 and r["cost_kind"] == expect and sum(r["per_generator"]) == r["total_cnots"]
    assert len((tmp / "c.csv").read_text().splitlines()) == len(a.generators) + 1


def test_verify_bundled_fermionic(capsys, tmp_path):
    save_mapping(tmp_path / "jw.json", jw_tree(4))
    code, out, _ = run(capsys, "verify", "--ansatz", str(bundled_path("fermionic_4.json")),
                       "--mapping", str(tmp_path / "jw.json"), "--hamiltonian", str(bundled_path("hamiltonian_4.json")))
    r = json.loads(out)
    assert code == 0 and r["pass"]
    assert r["suites"]["energy_invariance"]["spread"] <= 1e-9
    assert r["suites"]["circuit_unitary"]["mappings"]["0"]["unitary_distance"] <= 1e-9


def test_verify_two_mappings(capsys, tmp_path):
    g = preset("grid:2x3")
    save_mapping(tmp_path / "a.json", bonsai_tree(g, 4))
    save_mapping(tmp_path / "b.json", jw_tree(4))
    code, out, _ = run(capsys, "verify", "--ansatz", str(bundled_path("majoranic_4.json")),
                       "--mapping", str(tmp_path / "a.json"), str(tmp_path / "b.json"), "--graph", "grid:2x3")
    assert code == 0 and json.loads(out)["pass"]


def test_verify_corrupted_mapping(capsys, tmp_path):
    d = jw_tree(4).to_dict()
    d["nodes"][2]["qubit"] = 0
    (tmp_path / "bad.json").write_text(json.dumps(d))
    code, _, err = run(capsys, "verify", "--ansatz", str(bundled_path("fermionic_4.json")),
                       "--mapping", str(tmp_path / "bad.json"))
    assert code == 2 and "duplicate qubit" in last_error(err)["message"]


def test_enumerate_command(capsys):
    code, out, _ = run(capsys, "enumerate", "--n-modes", "2", "--graph", "complete:2")
    r = json.loads(out)
    assert code == 0 and r["mappings"] <= r["complete_bound"] == 48
    code, out, _ = run(capsys, "enumerate", "--n-modes", "2", "--graph", "complete:2", "--task", "reachability")
    assert json.loads(out)["fraction"] == 1.0
    code, out, _ = run(capsys, "enumerate", "--n-modes", "3", "--graph", "line:4")
    r = json.loads(out)
    assert r["mappings"] <= r["bounded_degree_bound"]
    code, _, err = run(capsys, "enumerate", "--n-modes", "5", "--graph", "complete:5")
    assert code == 2 and last_error(err)["command"] == "enumerate"


def test_hardware_command(capsys, tmp_path):
    code, out, _ = run(capsys, "hardware", "--graph", "grid:3x4", "--out", str(tmp_path / "g.json"))
    assert code == 0 and len(json.loads(out)["edges"]) == 17
    assert preset(f"file:{tmp_path / 'g.json'}") == preset("grid:3x4")
    code, _, err = run(capsys, "hardware", "--graph", "torus:3")
    assert code == 2 and last_error(err)["error"] == "ValueError"


def test_usage_errors_are_single_line_json(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["compile", "--ansatz", "a.json"])
    assert exc.value.code == 2
    assert last_error(capsys.readouterr().err)["error"] == "UsageError"


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "cost", "--ansatz", str(tmp_path / "none.json"), "--mapping", "x", "--graph", "line:2")
    assert code == 2 and last_error(err)["error"] == "FileNotFoundError"
