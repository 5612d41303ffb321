"""Batch driver: run experiments from FCIDUMP inputs and emit traces,
summaries, selection tables, bondlength-scan matrices, and speedup reports.

Exit codes: 0 success, 2 configuration error, 3 convergence failure,
4 I/O error. VQESWEEP_THREADS bounds scan concurrency.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from .integrals import (
    FcidumpError,
    expand_spin_orbitals,
    hf_energy,
    hf_state_occupation,
    parse_fcidump,
    to_pauli_hamiltonian,
)
from .oracle import OracleConvergenceError, ground_energy
from .pools import build_ovp_ceo_pool, build_pool
from .preselect import preselect_generator
from .selection import (
    build_ansatz_adaptive,
    build_ansatz_energy_sorting,
    build_ansatz_fixed,
    build_ansatz_ovp_paired,
)
from .simulator import prepare_basis_state

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4

METHODS = ("energy_sorting", "adaptive", "fixed", "ovp_ceo_plus", "ovp_ceo_paired")
POOLS = ("uccsd", "uccsdt", "qe", "ovp_ceo")
CHEMICAL_ACCURACY = 1e-3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    fcidump_path: str
    method: str = "energy_sorting"
    pool: str = "uccsd"
    eps_a: float = 1e-13
    eps_conv: float = 1e-8
    max_sweeps: int = 100
    max_ops: int = 200
    seed: int = 7
    out_dir: str = "."

    def validate(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.pool not in POOLS:
            raise ConfigError(f"unknown pool {self.pool!r}")
        ovp_method = self.method in ("ovp_ceo_plus", "ovp_ceo_paired")
        if ovp_method != (self.pool == "ovp_ceo"):
            raise ConfigError(
                f"method {self.method!r} is incompatible with pool {self.pool!r}"
            )
        if self.eps_conv <= 0 and self.max_sweeps > 0:
            raise ConfigError("eps_conv must be positive")
        return self


def _format_float(x: float) -> str:
    if x != x:
        return "NaN"
    if x in (float("inf"), float("-inf")):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return f"{x:.17g}"


def dump_json(obj, indent=0) -> str:
    """JSON with sorted keys and floats fixed to 17 significant digits."""
    pad = " " * indent
    if isinstance(obj, dict):
        items = [
            f'{pad} "{k}": {dump_json(obj[k], indent + 1).lstrip()}'
            for k in sorted(obj)
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + " " + dump_json(v, indent + 1).lstrip() for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    return json.dumps(obj)


def _load_problem(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read FCIDUMP {path!r}: {exc}") from exc
    mi = parse_fcidump(text)
    soh = expand_spin_orbitals(mi)
    occ = hf_state_occupation(soh.n_so, mi.n_elec, mi.ms2)
    return mi, soh, occ, to_pauli_hamiltonian(soh)


def _dispatch(config, pool, h, reference, soh, oracle_energy):
    common = dict(eps_conv=config.eps_conv, max_sweeps=config.max_sweeps,
                  oracle_energy=oracle_energy)
    if config.method == "energy_sorting":
        stages = ("doubles", "singles", "triples") if config.pool == "uccsdt" else (
            "doubles", "singles")
        return build_ansatz_energy_sorting(
            pool, h, reference, soh=soh, eps_a=config.eps_a, stages=stages, **common
        )
    if config.method == "adaptive":
        return build_ansatz_adaptive(
            pool, h, reference, eps_a=config.eps_a, max_ops=config.max_ops, **common
        )
    if config.method == "fixed":
        return build_ansatz_fixed(pool, h, reference, **common)
    if config.method == "ovp_ceo_plus":
        plus_pool = build_ovp_ceo_pool(pool.n_qubits, pool.reference_occ, "plus_only")
        return build_ansatz_energy_sorting(
            plus_pool, h, reference, soh=soh, eps_a=config.eps_a, **common
        )
    if config.method == "ovp_ceo_paired":
        return build_ansatz_ovp_paired(
            pool, h, reference, soh=soh, eps_a=config.eps_a, **common
        )
    raise ConfigError(f"unknown method {config.method!r}")


def run(config: RunConfig) -> dict:
    """Execute one experiment; writes trace.jsonl, summary.json, selection.csv."""
    config.validate()
    mi, soh, occ, h = _load_problem(config.fcidump_path)
    pool = build_pool(config.pool, soh.n_so, occ)
    oracle = ground_energy(h, sector=(mi.n_elec, mi.ms2), seed=config.seed)
    reference = prepare_basis_state(soh.n_so, occ)
    result = _dispatch(config, pool, h, reference, soh, oracle.e0)

    counts = reference.counter.snapshot()
    by_kind: dict[str, int] = {}
    cnot_total = depth_total = 0
    for elem in result.ansatz:
        by_kind[elem.generator.kind] = by_kind.get(elem.generator.kind, 0) + 1
        cnot_total += elem.generator.cnot_count
        depth_total += elem.generator.depth
    evals_to_accuracy = result.trace.first_eval_below(CHEMICAL_ACCURACY)
    # landscapes share each stage's reference energy; the unamortized figure
    # re-prices every quantum-stage landscape at five evaluations
    quantum_landscapes = sum(
        1 for r in result.records if r.stage != "classical_doubles"
    )

    summary = {
        "fcidump": os.path.basename(config.fcidump_path),
        "method": config.method,
        "pool": config.pool,
        "n_qubits": soh.n_so,
        "n_electrons": mi.n_elec,
        "pool_size": len(pool),
        "eps_a": config.eps_a,
        "eps_conv": config.eps_conv,
        "max_sweeps": config.max_sweeps,
        "seed": config.seed,
        "hf_energy": hf_energy(soh, occ),
        "fci_energy": oracle.e0,
        "fci_residual": oracle.residual_norm,
        "final_energy": result.energy,
        "energy_error": result.energy - oracle.e0,
        "ansatz_size": len(result.ansatz),
        "ansatz_by_kind": by_kind,
        "cnot_total": cnot_total,
        "depth_total": depth_total,
        "evaluations": {
            **counts,
            "total": sum(counts.values()),
            "selection_unamortized": counts.get("selection", 0) + quantum_landscapes,
        },
        "evals_to_chemical_accuracy": evals_to_accuracy,
        "converged": result.converged,
        "sweeps": result.sweeps,
        "screening_rounds": result.screening_rounds,
        "ansatz": [
            {
                "kind": e.generator.kind,
                "orbitals": list(e.generator.orbitals),
                "theta": e.theta,
            }
            for e in result.ansatz
        ],
    }

    os.makedirs(config.out_dir, exist_ok=True)
    with open(os.path.join(config.out_dir, "summary.json"), "w") as fh:
        fh.write(dump_json(summary) + "\n")
    with open(os.path.join(config.out_dir, "trace.jsonl"), "w") as fh:
        for rec in result.trace.records:
            fh.write(dump_json(rec.to_dict()).replace("\n", " ") + "\n")
    with open(os.path.join(config.out_dir, "selection.csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["stage", "index", "kind", "orbitals", "delta_e", "theta", "selected"])
        for rec in result.records:
            writer.writerow([
                rec.stage, rec.index, rec.kind,
                "-".join(str(k) for k in rec.orbitals),
                f"{rec.delta_e:.17g}", f"{rec.theta:.17g}", int(rec.selected),
            ])
    summary["_result"] = result
    return summary


def classical_selection_csv(fcidump_path, out_path, eps_a=1e-13):
    """Classical pre-selection table for all doubles (zero quantum cost)."""
    mi, soh, occ, _ = _load_problem(fcidump_path)
    pool = build_pool("uccsd", soh.n_so, occ)
    rows = []
    for gen in pool.doubles():
        res = preselect_generator(soh, occ, gen)
        rows.append((*gen.orbitals, res.a, res.b, res.delta_e_max, res.theta_max,
                     res.parity_sign, int(res.delta_e_max > eps_a)))
    rows.sort(key=lambda r: -r[6])
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["p", "q", "r", "s", "a", "b", "delta_e_max", "theta_max",
                         "parity_sign", "selected"])
        for row in rows:
            writer.writerow([
                *row[:4],
                *(f"{v:.17g}" for v in row[4:8]),
                row[8], row[9],
            ])
    return len(rows)


def scan(base_config: RunConfig, labeled_paths, out_dir):
    """Per-bondlength runs and the operator-selection matrix."""
    if len(labeled_paths) < 2:
        raise ConfigError("scan needs at least two labeled inputs")
    os.makedirs(out_dir, exist_ok=True)
    workers = max(1, int(os.environ.get("VQESWEEP_THREADS", "1")))

    def one(label_path):
        label, path = label_path
        cfg = RunConfig(**{**_config_dict(base_config),
                           "fcidump_path": path,
                           "out_dir": os.path.join(out_dir, label)})
        return label, run(cfg)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool_exec:
            results = list(pool_exec.map(one, labeled_paths))
    else:
        results = [one(lp) for lp in labeled_paths]

    mi, soh, occ, _ = _load_problem(labeled_paths[0][1])
    op_pool = build_pool(base_config.pool, soh.n_so, occ)
    keys = [(g.kind, g.orbitals) for g in op_pool]
    shape = (results[0][1]["n_qubits"], results[0][1]["pool_size"])
    columns = {}
    for label, summary in results:
        if (summary["n_qubits"], summary["pool_size"]) != shape:
            raise ConfigError(f"pool shape mismatch for input {label!r}")
        selected = {
            (e.generator.kind, e.generator.orbitals)
            for e in summary["_result"].ansatz
        }
        columns[label] = [int(k in selected) for k in keys]

    labels = [label for label, _ in results]
    matrix_path = os.path.join(out_dir, "selection_matrix.csv")
    with open(matrix_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["kind", "orbitals", *labels])
        for i, (kind, orbitals) in enumerate(keys):
            writer.writerow([kind, "-".join(str(k) for k in orbitals),
                             *(columns[l][i] for l in labels)])
    with open(os.path.join(out_dir, "selection_similarity.csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label_a", "label_b", "jaccard", "identical"])
        for i, la in enumerate(labels):
            for lb in labels[i + 1:]:
                a = set(k for k, v in zip(keys, columns[la]) if v)
                b = set(k for k, v in zip(keys, columns[lb]) if v)
                union = len(a | b)
                jac = 1.0 if union == 0 else len(a & b) / union
                writer.writerow([la, lb, f"{jac:.17g}", int(a == b)])
    return matrix_path, {label: columns[label] for label in labels}


def speedup_report(summary_paths, out_path):
    """(pool size, evaluations-to-chemical-accuracy) per method + slopes."""
    if not summary_paths:
        raise ConfigError("no summary files given")
    rows = []
    for path in summary_paths:
        with open(path) as fh:
            s = json.load(fh)
        if s.get("evals_to_chemical_accuracy") is None:
            raise ConfigError(f"{path}: run never reached chemical accuracy")
        rows.append((s["method"], s["pool_size"], s["evals_to_chemical_accuracy"]))
    methods = sorted({r[0] for r in rows})
    slopes = {}
    for method in methods:
        pts = [(m, e) for meth, m, e in rows if meth == method]
        if len(pts) < 3:
            raise ConfigError(f"method {method!r} has {len(pts)} points; need >= 3")
        x = np.log10([max(p[0], 1) for p in pts])
        y = np.log10([max(p[1], 1) for p in pts])
        if np.ptp(x) < 1e-12:
            slopes[method] = float("nan")
        else:
            slopes[method] = float(np.polyfit(x, y, 1)[0])
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "pool_size", "evals_to_chemical_accuracy"])
        for method, m, e in sorted(rows):
            writer.writerow([method, m, e])
        writer.writerow([])
        writer.writerow(["method", "loglog_slope", ""])
        for method in methods:
            val = slopes[method]
            writer.writerow([method, "undefined" if val != val else f"{val:.17g}", ""])
    return slopes


def _config_dict(config):
    return {f.name: getattr(config, f.name) for f in fields(RunConfig)}


def _read_config_file(path):
    values = {}
    try:
        with open(path) as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"bad config line: {raw!r}")
                key, value = (t.strip() for t in line.split("=", 1))
                values[key] = value
    except OSError as exc:
        raise FileNotFoundError(f"cannot read config {path!r}: {exc}") from exc
    return values


_FIELD_TYPES = {
    "eps_a": float, "eps_conv": float, "max_sweeps": int,
    "max_ops": int, "seed": int, "method": str, "pool": str,
}


def _build_config(args) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        for key, raw in _read_config_file(args.config).items():
            if key not in _FIELD_TYPES:
                raise ConfigError(f"unknown config key {key!r}")
            values[key] = _FIELD_TYPES[key](raw)
    for key, typ in _FIELD_TYPES.items():
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = typ(flag)
    return RunConfig(
        fcidump_path=getattr(args, "fcidump", ""),
        out_dir=getattr(args, "out", "."),
        **values,
    )


def _add_run_flags(p):
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--pool", choices=POOLS)
    p.add_argument("--eps-a", dest="eps_a", type=float)
    p.add_argument("--eps-conv", dest="eps_conv", type=float)
    p.add_argument("--max-sweeps", dest="max_sweeps", type=int)
    p.add_argument("--max-ops", dest="max_ops", type=int)
    p.add_argument("--seed", type=int)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="vqesweep", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one experiment")
    p_run.add_argument("--fcidump", required=True)
    p_run.add_argument("--out", required=True)
    _add_run_flags(p_run)

    p_sel = sub.add_parser("select", help="classical pre-selection of doubles")
    p_sel.add_argument("--fcidump", required=True)
    p_sel.add_argument("--out", required=True)
    p_sel.add_argument("--eps-a", dest="eps_a", type=float, default=1e-13)

    p_scan = sub.add_parser("scan", help="bondlength scan selection matrix")
    p_scan.add_argument("--input", action="append", required=True,
                        metavar="LABEL=PATH")
    p_scan.add_argument("--out", required=True)
    _add_run_flags(p_scan)

    p_fci = sub.add_parser("fci", help="exact ground energy of the input")
    p_fci.add_argument("--fcidump", required=True)
    p_fci.add_argument("--no-sector", action="store_true")
    p_fci.add_argument("--seed", type=int, default=7)

    p_pool = sub.add_parser("pool", help="dump the operator pool as JSON")
    p_pool.add_argument("--fcidump", required=True)
    p_pool.add_argument("--pool", choices=POOLS, default="uccsd")
    p_pool.add_argument("--out")

    p_spd = sub.add_parser("speedup-report", help="pool-size scaling table")
    p_spd.add_argument("--out", required=True)
    p_spd.add_argument("summaries", nargs="+")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            config = _build_config(args)
            summary = run(config)
            return EXIT_OK if summary["converged"] else EXIT_CONVERGENCE
        if args.command == "select":
            classical_selection_csv(args.fcidump, args.out, args.eps_a)
            return EXIT_OK
        if args.command == "scan":
            labeled = []
            for item in args.input:
                if "=" not in item:
                    raise ConfigError(f"--input needs LABEL=PATH, got {item!r}")
                labeled.append(tuple(item.split("=", 1)))
            config = _build_config(args)
            scan(config, labeled, args.out)
            return EXIT_OK
        if args.command == "fci":
            mi, soh, occ, h = _load_problem(args.fcidump)
            sector = None if args.no_sector else (mi.n_elec, mi.ms2)
            res = ground_energy(h, sector=sector, seed=args.seed)
            print(dump_json({
                "e0": res.e0,
                "residual_norm": res.residual_norm,
                "iterations": res.iterations,
                "hf_energy": hf_energy(soh, occ),
                "n_qubits": soh.n_so,
                "sector": list(sector) if sector else None,
            }))
            return EXIT_OK
        if args.command == "pool":
            mi, soh, occ, _ = _load_problem(args.fcidump)
            payload = build_pool(args.pool, soh.n_so, occ).to_json()
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(payload + "\n")
            else:
                print(payload)
            return EXIT_OK
        if args.command == "speedup-report":
            speedup_report(args.summaries, args.out)
            return EXIT_OK
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, FcidumpError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OracleConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
