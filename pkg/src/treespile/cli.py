"""Command-line front end.

Every report embeds a manifest (command, inputs, config, seed, version,
timestamp) plus a SHA-256 of its content with the timestamp left out, so two
runs with equal inputs and seed can be compared byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import io as _io
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.linalg

from . import __version__
from .anneal import treespile
from .circuit import compile_ansatz, emit_qasm, peephole_cancel
from .cost import CostEvaluator, compiled_cost, pauli_cost
from .enumeration import count_mappings, reachability
from .fermion import FermionicAnsatz, HamiltonianSpec, NonFermionicPoolError, QubitAnsatz, random_hamiltonian
from .hardware import HardwareGraph, complete
from .io import config_from, dumps, load_ansatz, load_config, load_graph, load_hamiltonian, load_mapping, save_graph
from .mapping import MappingTree, braid_variant, map_ansatz
from .oracle import (
    DenseState,
    ansatz_energy,
    apply_circuit,
    circuit_unitary,
    evolve,
    pauli_sum_matrix,
    prepare_fock_state,
    state_distance,
    unitary_distance,
    vacuum_residuals,
)


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Usage errors become the same one-line JSON diagnostic as runtime errors."""

    def error(self, message):
        diag = {"command": self.prog.split()[-1], "error": "UsageError", "message": message}
        sys.stderr.write(json.dumps(diag, sort_keys=True) + "\n")
        raise SystemExit(2)


# --------------------------------------------------------------------- manifest


def _manifest(command: str, inputs: dict, config: dict, seed) -> dict:
    return {
        "command": command,
        "inputs": {k: str(v) for k, v in inputs.items() if v is not None},
        "config": config,
        "seed": seed,
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def content_hash(report: dict) -> str:
    """SHA-256 of the report with the manifest timestamp and the hash field removed."""
    clean = json.loads(json.dumps(report))
    clean.pop("content_sha256", None)
    clean.get("manifest", {}).pop("timestamp", None)
    return hashlib.sha256(json.dumps(clean, sort_keys=True).encode()).hexdigest()


def _finish(report: dict) -> dict:
    report["content_sha256"] = content_hash(report)
    return report


def _emit(report: dict, out: str | None) -> None:
    text = dumps(report)
    if out:
        Path(out).write_text(text)
    sys.stdout.write(text)


def _fermionic(path: str) -> FermionicAnsatz:
    a = load_ansatz(path)
    if isinstance(a, QubitAnsatz):
        raise NonFermionicPoolError("pool has no fermionic representation")
    return a


# --------------------------------------------------------------------- commands


def cmd_treespile(args) -> int:
    ansatz = _fermionic(args.ansatz)
    graph = load_graph(args.graph)
    file_cfg = load_config(args.config) if args.config else {}
    if args.braiding is None and "enable_braiding" not in file_cfg:
        # braid flips cannot change the cost of excitation-type generators
        file_cfg["enable_braiding"] = ansatz.is_majoranic
    cfg = config_from(file_cfg, {
        "iterations": args.iterations,
        "initial_temp": args.initial_temp,
        "cooling_factor": args.cooling,
        "seed": args.seed,
        "restarts": args.restarts,
        "search_mode": args.mode,
        "cost_kind": args.cost,
        "enable_braiding": args.braiding,
    })
    result = treespile(ansatz, graph, cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = _manifest("treespile", {"ansatz": args.ansatz, "graph": args.graph, "config": args.config},
                         cfg.to_dict(), cfg.seed)

    if cfg.cost_kind == "pauli":
        breakdown = CostEvaluator(ansatz, graph, "limited").breakdown(result.best_mapping)
    else:
        breakdown = compiled_cost(ansatz, result.best_mapping, graph)
    mapping_doc = _finish({**result.best_mapping.to_dict(), "manifest": manifest})
    cost_doc = _finish({
        "manifest": manifest,
        "initial_cost": result.initial_cost,
        "best_cost": result.best_cost,
        "best_restart": result.best_restart,
        "restart_costs": result.restart_costs,
        "accepted_moves": result.accepted_moves,
        "breakdown": breakdown.to_dict(),
    })
    (out / "mapping.json").write_text(dumps(mapping_doc))
    (out / "cost.json").write_text(dumps(cost_doc))
    buf = _io.StringIO()
    clean = dict(manifest)
    clean.pop("timestamp")
    buf.write("# manifest: " + json.dumps(clean, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["iteration", "cost"])
    writer.writerows(result.cost_trace)
    (out / "trace.csv").write_text(buf.getvalue())
    sys.stdout.write(dumps({"initial_cost": result.initial_cost, "best_cost": result.best_cost, "out_dir": str(out)}))
    return 0


def _compile_mode(tree: MappingTree, graph: HardwareGraph, requested: str | None) -> str:
    if requested:
        return requested
    return "cp" if tree.width <= graph.n and tree.is_subgraph_of(graph) else "general"


def _check_sizes(ansatz: FermionicAnsatz, tree: MappingTree, graph: HardwareGraph) -> None:
    if ansatz.n_modes != tree.n_modes:
        raise CliError(f"ansatz has {ansatz.n_modes} modes but the mapping has {tree.n_modes}")
    if tree.width > graph.n:
        raise CliError(f"mapping uses qubit {tree.width - 1} but the graph has {graph.n} vertices")


def cmd_compile(args) -> int:
    ansatz = _fermionic(args.ansatz)
    tree = load_mapping(args.mapping)
    graph = load_graph(args.graph)
    _check_sizes(ansatz, tree, graph)
    mode = _compile_mode(tree, graph, args.mode)
    raw = compile_ansatz(map_ansatz(tree, ansatz, graph.n), tree, graph, mode, ansatz.reference_occupations)
    circ = raw if args.no_cancel else peephole_cancel(raw)
    off = circ.off_edge_cnots(graph)
    if off:
        raise CliError(f"{len(off)} CNOTs off the device edges")
    if args.qasm:
        Path(args.qasm).write_text(emit_qasm(circ))
    report = _finish({
        "manifest": _manifest("compile", {"ansatz": args.ansatz, "mapping": args.mapping, "graph": args.graph},
                              {"mode": mode, "cancel": not args.no_cancel}, None),
        "cnots": circ.cnot_count,
        "total_gates": len(circ),
        "cnots_before_cancellation": raw.cnot_count,
        "per_generator": raw.blocks,
        "on_edge": True,
    })
    _emit(report, args.report)
    return 0


def cmd_cost(args) -> int:
    ansatz = _fermionic(args.ansatz)
    tree = load_mapping(args.mapping)
    graph = load_graph(args.graph)
    _check_sizes(ansatz, tree, graph)
    if args.kind == "compiled":
        breakdown = compiled_cost(ansatz, tree, graph)
    else:
        conn = "full" if args.kind == "pauli_fc" else "limited"
        breakdown = pauli_cost(map_ansatz(tree, ansatz, graph.n), graph, tree, conn)
    report = _finish({
        "manifest": _manifest("cost", {"ansatz": args.ansatz, "mapping": args.mapping, "graph": args.graph},
                              {"kind": args.kind}, None),
        **breakdown.to_dict(),
    })
    _emit(report, args.report)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["generator", "cnots"])
            w.writerows(enumerate(breakdown.per_generator))
    return 0


def _verify_suites(ansatz: FermionicAnsatz, trees: list[MappingTree], ham: HamiltonianSpec,
                   graph: HardwareGraph | None, tol: float) -> dict:
    suites: dict = {}
    vac = {}
    for i, t in enumerate(trees):
        vac[str(i)] = max(vacuum_residuals(t))
    suites["vacuum_annihilation"] = {"max_residual": vac, "pass": all(v <= 1e-12 for v in vac.values())}

    energies = [ansatz_energy(t, ansatz, ham) for t in trees]
    spread = max(energies) - min(energies)
    suites["energy_invariance"] = {"energies": energies, "spread": spread, "pass": spread <= tol}

    circuit: dict = {}
    ok = True
    for i, t in enumerate(trees):
        g = graph if graph is not None else complete(t.width)
        if g.n > 8:
            circuit[str(i)] = {"skipped": "more than 8 qubits"}
            continue
        mode = _compile_mode(t, g, None)
        mapped = map_ansatz(t, ansatz, g.n)
        body = compile_ansatz(mapped, t, g, mode, [0] * t.n_modes)
        exact = np.eye(1 << g.n, dtype=complex)
        for theta, gen in mapped:
            exact = scipy.linalg.expm(theta * pauli_sum_matrix(gen, g.n)) @ exact
        u_dist = unitary_distance(circuit_unitary(body), exact)
        full = compile_ansatz(mapped, t, g, mode, ansatz.reference_occupations)
        got = apply_circuit(DenseState.zero(g.n), peephole_cancel(full))
        ref = evolve(prepare_fock_state_on(t, ansatz.reference_occupations, g.n), mapped)
        s_dist = state_distance(got.amplitudes, ref.amplitudes)
        passed = u_dist <= tol and s_dist <= tol
        ok &= passed
        circuit[str(i)] = {"unitary_distance": u_dist, "state_distance": s_dist, "pass": passed}
    suites["circuit_unitary"] = {"mappings": circuit, "pass": ok}
    return suites


def prepare_fock_state_on(tree: MappingTree, occupations: Sequence[int], width: int) -> DenseState:
    state = prepare_fock_state(tree, occupations)
    if width == tree.width:
        return state
    pad = np.zeros(1 << (width - tree.width), dtype=complex)
    pad[0] = 1.0
    return DenseState(width, np.kron(state.amplitudes, pad))


def cmd_verify(args) -> int:
    ansatz = _fermionic(args.ansatz)
    trees = [load_mapping(p) for p in args.mapping]
    if len(trees) == 1:
        trees.append(braid_variant(trees[0]))
    for t in trees:
        if t.n_modes != ansatz.n_modes:
            raise CliError("mapping and ansatz disagree on n_modes")
        if t.width > 14:
            raise CliError("verification limited to 14 qubits")
    ham = load_hamiltonian(args.hamiltonian) if args.hamiltonian else random_hamiltonian(ansatz.n_modes, args.seed)
    graph = load_graph(args.graph) if args.graph else None
    suites = _verify_suites(ansatz, trees, ham, graph, args.tol)
    passed = all(s["pass"] for s in suites.values())
    report = _finish({
        "manifest": _manifest("verify", {"ansatz": args.ansatz, "mapping": ",".join(args.mapping),
                                         "hamiltonian": args.hamiltonian, "graph": args.graph},
                              {"tol": args.tol}, args.seed),
        "suites": suites,
        "pass": passed,
    })
    _emit(report, args.report)
    return 0 if passed else 1


def cmd_enumerate(args) -> int:
    graph = load_graph(args.graph)
    if args.task == "count":
        body = count_mappings(args.n_modes, graph).to_dict()
    else:
        body = reachability(args.n_modes, graph, args.start).to_dict()
    report = _finish({
        "manifest": _manifest("enumerate", {"graph": args.graph}, {"task": args.task, "n_modes": args.n_modes}, None),
        **body,
    })
    _emit(report, args.report)
    return 0


def cmd_hardware(args) -> int:
    graph = load_graph(args.graph)
    if args.out:
        save_graph(args.out, graph)
    sys.stdout.write(dumps(graph.to_dict()))
    return 0


# ------------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="treespile", description="Ternary-tree mapping compiler")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("treespile", help="anneal a mapping for an ansatz and device")
    t.add_argument("--ansatz", required=True)
    t.add_argument("--graph", required=True, help="complete:Q | line:Q | heavy_hex:Q | grid:RxC | file:path")
    t.add_argument("--config", help="JSON file with AnnealConfig fields; flags override it")
    t.add_argument("--mode", choices=("free", "cp", "ncp", "ms"))
    t.add_argument("--cost", choices=("pauli", "compiled"))
    t.add_argument("--seed", type=int)
    t.add_argument("--iterations", type=int)
    t.add_argument("--restarts", type=int)
    t.add_argument("--initial-temp", type=float)
    t.add_argument("--cooling", type=float)
    t.add_argument("--braiding", dest="braiding", action="store_true", default=None)
    t.add_argument("--no-braiding", dest="braiding", action="store_false")
    t.add_argument("--out-dir", default="treespile_out")
    t.set_defaults(func=cmd_treespile)

    c = sub.add_parser("compile", help="compile an ansatz under a mapping to QASM")
    c.add_argument("--ansatz", required=True)
    c.add_argument("--mapping", required=True)
    c.add_argument("--graph", required=True)
    c.add_argument("--mode", choices=("cp", "general"))
    c.add_argument("--no-cancel", action="store_true")
    c.add_argument("--qasm")
    c.add_argument("--report")
    c.set_defaults(func=cmd_compile)

    k = sub.add_parser("cost", help="evaluate a cost model")
    k.add_argument("--ansatz", required=True)
    k.add_argument("--mapping", required=True)
    k.add_argument("--graph", required=True)
    k.add_argument("--kind", choices=("pauli_fc", "pauli_lc", "compiled"), default="pauli_lc")
    k.add_argument("--report")
    k.add_argument("--csv")
    k.set_defaults(func=cmd_cost)

    v = sub.add_parser("verify", help="run the dense-oracle checks")
    v.add_argument("--ansatz", required=True)
    v.add_argument("--mapping", required=True, nargs="+")
    v.add_argument("--hamiltonian")
    v.add_argument("--graph")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--report")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("enumerate", help="count mappings or test move-graph reachability")
    e.add_argument("--n-modes", type=int, required=True)
    e.add_argument("--graph", required=True)
    e.add_argument("--task", choices=("count", "reachability"), default="count")
    e.add_argument("--start", choices=("bonsai", "jw"), default="bonsai")
    e.add_argument("--report")
    e.set_defaults(func=cmd_enumerate)

    h = sub.add_parser("hardware", help="print a preset graph as JSON")
    h.add_argument("--graph", required=True)
    h.add_argument("--out")
    h.set_defaults(func=cmd_hardware)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, KeyError, OSError, RuntimeError, ArithmeticError) as exc:
        diag = {"error": type(exc).__name__, "message": str(exc).strip().splitlines()[0] if str(exc) else "",
                "command": args.command}
        sys.stderr.write(json.dumps(diag, sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
