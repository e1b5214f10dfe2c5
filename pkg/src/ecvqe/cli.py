"""Command-line front end: ``run``, ``ed``, ``kak``, ``dump-hamiltonian``, ``configs``.

Exit codes: 0 success, 2 invalid configuration or arguments, 3 diverged run.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import driver, ed, io, synthesis
from .models import ModelSpec

EXIT_CONFIG = 2
EXIT_DIVERGED = 3


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", required=True, choices=["ising", "potts", "schwinger"])
    p.add_argument("--L", type=int, required=True, help="number of qubits (two per Potts spin)")
    p.add_argument("--g", type=float, help="transverse field (Ising, Potts) or coupling (Schwinger)")
    p.add_argument("--h", type=float, help="longitudinal field (Ising, Potts)")
    p.add_argument("--m", type=float, help="fermion mass (Schwinger)")
    p.add_argument("--singlet-penalty", type=float, help="Potts singlet penalty (default 10)")


def _model_from_args(args) -> ModelSpec:
    names = {"ising": ("g", "h"), "potts": ("g", "h"), "schwinger": ("m", "g")}[args.model]
    couplings = {}
    for n in names:
        if getattr(args, n) is None:
            raise ValueError(f"--{n} is required for the {args.model} model")
        couplings[n] = getattr(args, n)
    if args.model == "potts" and args.singlet_penalty is not None:
        couplings["singlet_penalty"] = args.singlet_penalty
    return ModelSpec(args.model, args.L, couplings)


def _emit(payload: dict | str, out: str | None) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _cmd_run(args) -> int:
    try:
        docs = [io.load_config(c) for c in args.configs]
    except io.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    def one(doc):
        try:
            rec = io.run(doc, args.outdir, with_reference=not args.no_reference)
        except driver.DivergenceError as exc:
            print(f"{doc['name']}: diverged: {exc}", file=sys.stderr)
            return EXIT_DIVERGED
        s = rec.summary
        err = "n/a" if s["rel_error"] is None else f"{s['rel_error']:.3e}"
        print(f"{rec.name}: energy {s['energy']:.8f} reference {s['reference']} rel_error {err} -> {rec.summary_path}")
        return 0

    if args.jobs > 1 and len(docs) > 1:
        with ThreadPoolExecutor(args.jobs) as pool:
            codes = list(pool.map(one, docs))
    else:
        codes = [one(d) for d in docs]
    return max(codes)


def _cmd_ed(args) -> int:
    model = _model_from_args(args)
    H = model.hamiltonian()
    method = args.method
    if method == "auto":
        method = "dense" if model.L <= ed.DENSE_MAX_QUBITS else "iterative"
    rep = ed.dense_spectrum(H, args.k) if method == "dense" else ed.iterative_extremal(H, args.k)
    payload = {"model": {"kind": model.kind, "L": model.L, "couplings": model.couplings}}
    if args.sectors:
        rep = ed.classify_sectors(rep, ed.model_symmetries(model))
        sector = {"T": 0} if model.translation() is not None else {}
        if model.kind == "potts":
            sector["C"] = 1
        if sector:
            payload["sector"] = sector
            payload["sector_index_map"] = rep.sector_indices(**sector)
    payload.update(rep.to_dict(include_vectors=args.vectors))
    _emit(payload, args.out)
    return 0


def _read_matrix(args) -> np.ndarray:
    named = {"identity": np.eye(4), "cnot": synthesis.CNOT_01, "swap": np.eye(4)[[0, 2, 1, 3]]}
    if args.gate:
        return np.asarray(named[args.gate], dtype=complex)
    text = Path(args.matrix).read_text() if args.matrix != "-" else sys.stdin.read()
    doc = json.loads(text)
    if isinstance(doc, dict):
        return np.asarray(doc["re"], dtype=float) + 1j * np.asarray(doc.get("im", np.zeros((4, 4))), dtype=float)
    return np.asarray(doc, dtype=complex)


def _cmd_kak(args) -> int:
    u = _read_matrix(args)
    k = synthesis.kak_decompose(u)
    factors = {}
    for name in ("A1", "A2", "B1", "B2"):
        e = synthesis.euler_decompose(getattr(k, name))
        factors[name] = {"a": e.a, "b": e.b, "c": e.c, "phase": e.phase}
    payload = {
        "interaction_coefficients": list(k.interaction_coefficients),
        "phase": k.phase,
        "factors_zyz": factors,
        "reconstruction_error": float(np.abs(k.matrix() - u).max()),
    }
    if args.netlist:
        payload["netlist"] = [
            {"qubits": list(g.qubits), "matrix_re": g.matrix.real.tolist(), "matrix_im": g.matrix.imag.tolist()}
            for g in synthesis.entangler_netlist(k.alpha, k.beta, k.gamma)
        ]
    _emit(payload, args.out)
    return 0


def _cmd_dump(args) -> int:
    model = _model_from_args(args)
    _emit(model.hamiltonian().to_json(), args.out)
    return 0


def _cmd_configs(args) -> int:
    for name in io.bundled_configs():
        print(name)
    if args.schema:
        print(json.dumps(io.CONFIG_SCHEMA, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecvqe", description="Euler-Cartan VQE with quantum natural gradient")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one or more JSON configurations")
    p.add_argument("configs", nargs="+", help="config files or names of bundled configs")
    p.add_argument("--outdir", default=".")
    p.add_argument("--jobs", type=int, default=1, help="independent configs run in parallel threads")
    p.add_argument("--no-reference", action="store_true", help="skip the exact-diagonalisation reference")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("ed", help="exact low-lying spectrum as JSON")
    _add_model_flags(p)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--method", choices=["auto", "dense", "iterative"], default="auto")
    p.add_argument("--sectors", action="store_true", help="label states by symmetry sector")
    p.add_argument("--vectors", action="store_true", help="include eigenvectors")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_ed)

    p = sub.add_parser("kak", help="KAK decomposition of a two-qubit unitary")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gate", choices=["identity", "cnot", "swap"])
    src.add_argument("--matrix", help='JSON file ("-" for stdin): {"re": 4x4, "im": 4x4}')
    p.add_argument("--netlist", action="store_true", help="also emit the 3-CNOT entangler circuit")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_kak)

    p = sub.add_parser("dump-hamiltonian", help="model Hamiltonian as Pauli-sum JSON")
    _add_model_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_dump)

    p = sub.add_parser("configs", help="list bundled configurations")
    p.add_argument("--schema", action="store_true", help="also print the config JSON schema")
    p.set_defaults(func=_cmd_configs)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
