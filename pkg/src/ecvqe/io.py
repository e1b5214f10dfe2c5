"""Run configuration files, run orchestration and result persistence.

A run configuration is a JSON document validated against :data:`CONFIG_SCHEMA`.
Only ``model`` and ``optimizer.lr`` are mandatory::

    {
      "name": "ising_L8_ground",
      "model": {"kind": "ising", "L": 8, "couplings": {"g": 1.0, "h": 0.156}},
      "circuit": {"layout": "compressed10", "tying": "trans_r2"},
      "optimizer": {"lr": 0.04, "tol_iter": 5e-4, "tol_layer": 5e-4, "n_min": 1, "n_max": 2},
      "penalties": {"translation_sign": 1, "mu": 1.0},
      "target": {"n_states": 1},
      "seed": 0
    }

``model.L`` always counts qubits (a Potts chain of ``L'`` spins has ``L = 2 L'``).
:func:`run` writes three files next to each other:

``<name>.trace.jsonl``
    One JSON object per QNG iteration with keys ``state, iter, N, cost, energy,
    grad_norm, wall_ms, elapsed_ms``.  ``wall_ms`` restarts at every depth;
    ``elapsed_ms`` is monotonic over the whole run.  Rows are flushed as they
    are produced, so a diverged run keeps its partial trace.
``<name>.summary.json``
    Config echo, per-state results with exact references and relative errors,
    symmetry labels, Potts domain-wall counts, package version and seed.
``<name>.plot.csv``
    Comma-separated, ``.`` decimal point, columns :data:`PLOT_COLUMNS`.  The
    ``series`` column is ``iteration`` (energy vs iteration), ``depth``
    (converged energy vs N) or ``state`` (error vs state index).
"""

from __future__ import annotations

import csv
import json
import os
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__, driver, ed
from .models import ModelSpec, domain_wall_count

SEED_ENV = "EC_VQE_SEED"
PLOT_COLUMNS = ("series", "state", "N", "iter", "energy", "cost", "reference", "rel_error")

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}

CONFIG_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ecvqe run configuration",
    "type": "object",
    "required": ["model", "optimizer"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string", "pattern": "^[A-Za-z0-9_.-]+$"},
        "model": {
            "type": "object",
            "required": ["kind", "L", "couplings"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["ising", "potts", "schwinger"]},
                "L": {"type": "integer", "minimum": 2, "maximum": 24},
                "couplings": {"type": "object", "additionalProperties": _NUM},
            },
        },
        "circuit": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "layout": {"enum": ["compressed10", "full_kak15"]},
                "tying": {"enum": ["general", "trans_r1", "trans_r2"]},
                "final_1q_layer": {"type": "boolean"},
            },
        },
        "optimizer": {
            "type": "object",
            "required": ["lr"],
            "additionalProperties": False,
            "properties": {
                "lr": _POS,
                "tol_iter": _POS,
                "tol_layer": _POS,
                "relative_tol": {"type": "boolean"},
                "theta0": _NUM,
                "max_iters": {"type": "integer", "minimum": 0},
                "n_min": {"type": "integer", "minimum": 1},
                "n_max": {"type": "integer", "minimum": 1},
                "eps": _POS,
                "backtrack": {"type": "integer", "minimum": 0},
            },
        },
        "penalties": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "orth_weight": _POS,
                "translation_sign": {"enum": [1, -1]},
                "mu": _POS,
                "charge_mu": _POS,
            },
        },
        "target": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_states": {"type": "integer", "minimum": 1},
                "initial_bits": {"type": "array", "items": {"enum": [0, 1]}},
            },
        },
        "seed": {"type": "integer", "minimum": 0},
    },
}


class ConfigError(ValueError):
    """The configuration does not match the schema or is inconsistent."""


def validate_config(doc: dict) -> None:
    """Raise :class:`ConfigError` unless ``doc`` is a valid run configuration."""
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None
    try:
        to_run_config(doc)
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from None


def bundled_configs() -> list[str]:
    """Names of the configuration files shipped with the package."""
    return sorted(p.name for p in resources.files("ecvqe.configs").iterdir() if p.name.endswith(".json"))


def load_config(path: str | os.PathLike) -> dict:
    """Read and validate a configuration file.

    ``path`` may also be the bare name of a bundled configuration, with or
    without the ``.json`` suffix.
    """
    p = Path(path)
    if not p.exists():
        name = p.name if p.suffix == ".json" else p.name + ".json"
        if name not in bundled_configs():
            raise ConfigError(f"no such configuration: {path}")
        text = resources.files("ecvqe.configs").joinpath(name).read_text()
        default_name = name[:-5]
    else:
        text = p.read_text()
        default_name = p.stem
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    validate_config(doc)
    doc.setdefault("name", default_name)
    return doc


def to_run_config(doc: dict, seed: int | None = None) -> driver.RunConfig:
    """Translate a validated configuration document into a :class:`RunConfig`."""
    m = doc["model"]
    model = ModelSpec(m["kind"], m["L"], m["couplings"])
    target = doc.get("target", {})
    bits = target.get("initial_bits")
    if bits is not None and len(bits) != model.L:
        raise ValueError("target/initial_bits must have one entry per qubit")
    kwargs = {**doc.get("circuit", {}), **doc["optimizer"], **doc.get("penalties", {})}
    return driver.RunConfig(
        model=model,
        n_states=target.get("n_states", 1),
        initial_bits=None if bits is None else tuple(bits),
        seed=doc.get("seed", 0) if seed is None else seed,
        **kwargs,
    )


def effective_seed(doc: dict) -> int:
    """Seed from the environment override if set, else from the config."""
    env = os.environ.get(SEED_ENV)
    return int(env) if env not in (None, "") else int(doc.get("seed", 0))


def target_sector(config: driver.RunConfig) -> dict:
    """Sector labels (see :class:`ed.SpectrumReport`) selected by the penalties."""
    sector = {}
    T = config.model.translation()
    if config.translation_sign is not None and T is not None:
        sector["T"] = 0 if config.translation_sign == 1 else T.period() // 2
    if config.charge_mu is not None:
        sector["C"] = 1
    return sector


def reference_energies(config: driver.RunConfig, n: int) -> np.ndarray:
    """Lowest ``n`` exact energies inside the run's target sector."""
    model = config.model
    H = model.hamiltonian()
    sector = target_sector(config)
    if model.L <= ed.DENSE_MAX_QUBITS:
        rep = ed.dense_spectrum(H)
        if sector:
            rep = ed.classify_sectors(rep, ed.model_symmetries(model))
            return rep.sector_energies(**sector)[:n]
        return rep.eigenvalues[:n]
    syms = ed.model_symmetries(model)
    pairs = [(syms[k], v) for k, v in sector.items()]
    return ed.iterative_extremal(H, n, pairs).eigenvalues[:n]


def state_labels(model: ModelSpec, state: np.ndarray) -> dict:
    """Measured symmetry expectations and, for Potts, the domain-wall count."""
    out = {}
    for name, op in ed.model_symmetries(model).items():
        v = op.expectation(state)
        out[name] = [float(v.real), float(v.imag)] if name == "T" else float(v.real)
    if model.kind == "potts":
        out["domain_walls"] = domain_wall_count(state, model.L_spins)
    return out


@dataclass
class RunRecord:
    """Paths and summary of a finished (or diverged) run."""

    name: str
    trace_path: Path
    summary_path: Path
    plot_path: Path
    summary: dict


def _rel(e: float, ref: float | None) -> float | None:
    if ref is None:
        return None
    return abs(e - ref) / abs(ref) if ref != 0 else abs(e - ref)


def run(doc: dict, outdir: str | os.PathLike = ".", *, with_reference: bool = True) -> RunRecord:
    """Execute one validated configuration and write its three output files.

    Raises:
        driver.DivergenceError: After the partial trace and a summary marked
            ``"diverged"`` have been written.
    """
    seed = effective_seed(doc)
    config = to_run_config(doc, seed)
    name = doc.get("name", "run")
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / f"{name}.{suffix}" for suffix in ("trace.jsonl", "summary.json", "plot.csv")]
    t0 = time.monotonic()
    plot_rows: list[dict] = []
    summary: dict = {"name": name, "version": __version__, "seed": seed, "config": doc}

    with open(paths[0], "w") as trace_file:

        def record(k: int, row: dict) -> None:
            row = {"state": k, **row, "elapsed_ms": 1e3 * (time.monotonic() - t0)}
            trace_file.write(json.dumps(row) + "\n")
            trace_file.flush()
            plot_rows.append(
                {"series": "iteration", "state": k, "N": row["N"], "iter": row["iter"], "energy": row["energy"], "cost": row["cost"]}
            )

        try:
            results = driver.solve_spectrum(config, callback=record)
        except driver.DivergenceError as exc:
            summary.update(status="diverged", error=str(exc))
            paths[1].write_text(json.dumps(summary, indent=2))
            _write_plot(paths[2], plot_rows)
            raise

    refs = reference_energies(config, len(results)) if with_reference else []
    states = []
    for k, res in enumerate(results):
        ref = float(refs[k]) if k < len(refs) else None
        states.append(
            {
                "state": k,
                "energy": res.energy,
                "cost": res.cost,
                "reference": ref,
                "rel_error": _rel(res.energy, ref),
                "N": res.N,
                "iterations": len(res.trace),
                "termination": res.termination,
                "per_depth": res.per_depth,
                "labels": state_labels(config.model, res.state),
                "params": res.params.tolist(),
            }
        )
        for d in res.per_depth:
            plot_rows.append({"series": "depth", "state": k, "N": d["N"], "energy": d["energy"], "cost": d["cost"], "reference": ref, "rel_error": _rel(d["energy"], ref)})
        plot_rows.append({"series": "state", "state": k, "N": res.N, "energy": res.energy, "cost": res.cost, "reference": ref, "rel_error": _rel(res.energy, ref)})
    overlaps = [[abs(np.vdot(a.state, b.state)) ** 2 for b in results] for a in results]
    summary.update(
        status="ok",
        target_sector=target_sector(config),
        energy=states[0]["energy"],
        reference=states[0]["reference"],
        rel_error=states[0]["rel_error"],
        max_rel_error=max((s["rel_error"] for s in states if s["rel_error"] is not None), default=None),
        states=states,
        overlaps=overlaps,
        wall_s=time.monotonic() - t0,
    )
    paths[1].write_text(json.dumps(summary, indent=2))
    _write_plot(paths[2], plot_rows)
    return RunRecord(name, *paths, summary)


def _write_plot(path: Path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=PLOT_COLUMNS, restval="", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else repr(r[k]) if isinstance(r.get(k), float) else r.get(k)) for k in PLOT_COLUMNS})


def read_plot(path: str | os.PathLike) -> list[dict]:
    """Parse a plot CSV back into dicts with numeric fields converted."""
    rows = []
    with open(path, newline="") as fh:
        for r in csv.DictReader(fh):
            rows.append({k: (v if k == "series" else (None if v == "" else float(v))) for k, v in r.items()})
    return rows
