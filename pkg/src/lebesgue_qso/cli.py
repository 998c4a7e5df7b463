"""Command-line front end.

    lebesgue-qso iterate-atoms --p 0.8 --initial "atoms 0.2:0.5,0.7:0.5" --steps 30
    lebesgue-qso density --p 0.8 --initial pow:2 --steps 10 --grid 501
    lebesgue-qso push-interval --p 0.8 --initial uniform --a 0.2 --b 0.6
    lebesgue-qso bounds --p 0.8 --steps 10
    lebesgue-qso converge --p 0.6 --initial uniform --tol 1e-3
    lebesgue-qso particles --p 0.3 --initial uniform --steps 10 --particles 100000
    lebesgue-qso verify

Output goes to ``--output`` if given, else to ``$LEBESGUE_QSO_OUTPUT_DIR/<verb>.<format>``
if that variable is set, else to stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .atomic import iterate
from .bounds import certificate, min_valid_n, verify_bounds
from .cdf import CdfMeasure, DensityOrbit, pushforward_interval
from .convergence import run_to_convergence
from .kernel import KernelParams
from .measure import AtomicMeasure
from .particles import evolve, kolmogorov_distance, sample_initial

VERBS = ("iterate-atoms", "density", "push-interval", "bounds", "converge", "particles", "verify")
OUTPUT_DIR_ENV = "LEBESGUE_QSO_OUTPUT_DIR"
ATOM_SUM_TOL = 1e-9


class ConfigError(ValueError):
    """Invalid command line; the message names the offending flag."""


@dataclass
class RunConfig:
    command: str
    p: Optional[float] = None
    initial: str = "uniform"
    steps: int = 20
    grid: int = 1001
    tol: float = 1e-6
    seed: int = 0
    output: Optional[str] = None
    format: str = "csv"
    a: Optional[float] = None
    b: Optional[float] = None
    max_steps: int = 200
    particles: int = 10_000
    threads: int = 1
    trace: Optional[str] = None

    @property
    def kernel(self) -> KernelParams:
        return KernelParams(self.p)


def parse_initial(text: str) -> Union[AtomicMeasure, CdfMeasure]:
    """Parse ``uniform | pow:<k> | atoms a1:w1,a2:w2,... | grid:<path>``."""
    text = text.strip()
    if text == "uniform":
        return CdfMeasure.uniform()
    if text.startswith("pow:"):
        try:
            k = float(text[4:])
        except ValueError:
            raise ConfigError(f"--initial: bad power exponent in {text!r}") from None
        if not k >= 1:
            raise ConfigError("--initial: power exponent must be >= 1")
        return CdfMeasure.power(k)
    if text.startswith("atoms"):
        body = text[5:].strip()
        try:
            pairs = [tuple(float(v) for v in item.split(":")) for item in body.split(",") if item.strip()]
        except ValueError:
            raise ConfigError(f"--initial: malformed atom list {body!r}") from None
        if not pairs or any(len(pr) != 2 for pr in pairs):
            raise ConfigError(f"--initial: malformed atom list {body!r}; expected a:w,a:w,...")
        atoms = [a for a, _ in pairs]
        weights = [w for _, w in pairs]
        if any(b <= a for a, b in zip(atoms, atoms[1:])):
            raise ConfigError("--initial: atoms must be listed in strictly increasing order")
        if any(not (0.0 <= a < 1.0) for a in atoms):
            raise ConfigError("--initial: atoms must lie in [0,1)")
        if any(w < 0 for w in weights):
            raise ConfigError("--initial: atom weights must be nonnegative")
        total = sum(weights)
        if abs(total - 1.0) > ATOM_SUM_TOL:
            raise ConfigError(f"--initial: atom weights sum to {total!r}, not 1")
        return AtomicMeasure(atoms, [w / total for w in weights])
    if text.startswith("grid:"):
        return read_grid(text[5:])
    raise ConfigError(f"--initial: unknown measure {text!r}")


def read_grid(path: str) -> CdfMeasure:
    """Two-column CSV ``x,g`` (extra columns ignored, optional header)."""
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r]
    except OSError as exc:
        raise ConfigError(f"--initial: cannot read grid file {path}: {exc.strerror}") from None
    try:
        float(rows[0][0])
    except (ValueError, IndexError):
        rows = rows[1:]
    try:
        xs = [float(r[0]) for r in rows]
        gs = [float(r[1]) for r in rows]
        return CdfMeasure.from_grid(xs, gs, name=f"grid:{path}")
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"--initial: bad grid file {path}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lebesgue-qso", description="Lebesgue quadratic stochastic operator")
    ap.add_argument("command", help="one of: " + ", ".join(VERBS))
    ap.add_argument("--p", type=float)
    ap.add_argument("--initial", default="uniform")
    ap.add_argument("--steps", type=int, default=20)
    ap.add_argument("--grid", type=int, default=1001)
    ap.add_argument("--tol", type=float, default=1e-6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--output")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--a", type=float)
    ap.add_argument("--b", type=float)
    ap.add_argument("--max-steps", type=int, default=200)
    ap.add_argument("--particles", type=int, default=10_000)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--trace", help="converge: also write the distance trace as CSV here")
    return ap


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def parse_config(argv: Sequence[str]) -> RunConfig:
    ap = build_parser()
    ap.__class__ = _Parser
    ns = ap.parse_args(list(argv))
    if ns.command not in VERBS:
        raise ConfigError(f"unknown verb {ns.command!r}; expected one of {', '.join(VERBS)}")
    if ns.command != "verify":
        if ns.p is None:
            raise ConfigError("--p is required")
        if not (math.isfinite(ns.p) and 0.0 <= ns.p <= 1.0):
            raise ConfigError("--p: p must lie in [0,1]")
    if ns.steps < 0:
        raise ConfigError("--steps must be >= 0")
    if ns.grid < 2:
        raise ConfigError("--grid must be >= 2")
    if not ns.tol > 0:
        raise ConfigError("--tol must be > 0")
    if ns.max_steps < 0:
        raise ConfigError("--max-steps must be >= 0")
    if ns.particles < 1:
        raise ConfigError("--particles must be >= 1")
    if ns.threads < 1:
        raise ConfigError("--threads must be >= 1")
    parse_initial(ns.initial)
    return RunConfig(
        command=ns.command, p=ns.p, initial=ns.initial, steps=ns.steps, grid=ns.grid,
        tol=ns.tol, seed=ns.seed, output=ns.output, format=ns.format, a=ns.a, b=ns.b,
        max_steps=ns.max_steps, particles=ns.particles, threads=ns.threads, trace=ns.trace,
    )


# ---------------------------------------------------------------- output

def _num(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return format(float(v), ".17g")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    return obj


@dataclass
class Table:
    header: list
    rows: list


def render(report: Union[dict, Table], fmt: str) -> str:
    if fmt == "json":
        if isinstance(report, Table):
            report = {"columns": report.header, "rows": report.rows}
        return json.dumps(_jsonable(report), indent=2, ensure_ascii=False) + "\n"
    if isinstance(report, dict):
        report = Table(["key", "value"], [[k, v] for k, v in _flatten(report)])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(report.header)
    for row in report.rows:
        w.writerow([_num(v) if isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool)
                    else v for v in row])
    return buf.getvalue()


def _flatten(d: dict, prefix: str = ""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, (list, tuple)):
            yield key, json.dumps(_jsonable(v))
        else:
            yield key, "" if v is None else v


def resolve_path(path: Optional[str], verb: str, fmt: str) -> Optional[Path]:
    if path:
        return Path(path)
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env) / f"{verb}.{fmt}"
    return None


def write_outputs(report: Union[dict, Table], fmt: str, path: Optional[Union[str, Path]], stdout=None) -> int:
    """Write ``report`` as CSV or JSON to ``path`` (stdout when ``None``)."""
    text = render(report, fmt)
    if path is None:
        (stdout or sys.stdout).write(text)
        return 0
    path = Path(path)
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from None
    return 0


# ---------------------------------------------------------------- verbs

def _continuous(cfg: RunConfig, lam) -> CdfMeasure:
    if not isinstance(lam, CdfMeasure):
        raise ConfigError(f"--initial: {cfg.command} needs a continuous measure (uniform, pow:k, grid:path)")
    return lam


def run_iterate_atoms(cfg: RunConfig, lam):
    if not isinstance(lam, AtomicMeasure):
        raise ConfigError("--initial: iterate-atoms needs 'atoms a:w,...'")
    traj = iterate(cfg.kernel, lam, cfg.steps)
    table = traj.weight_table()
    if cfg.format == "json":
        return {
            "p": cfg.p,
            "atoms": lam.atoms.tolist(),
            "weights_per_step": table.tolist(),
            "dropped_atoms": [{"step": s, "atom": a} for s, a in traj.dropped],
        }
    header = ["step"] + [f"w@{_num(a)}" for a in lam.atoms]
    return Table(header, [[s, *row] for s, row in enumerate(table.tolist())])


def run_density(cfg: RunConfig, lam):
    lam = _continuous(cfg, lam)
    if cfg.steps < 1:
        raise ConfigError("--steps: density needs steps >= 1")
    orbit = DensityOrbit(cfg.kernel, lam, cfg.steps)
    x = np.linspace(0.0, 1.0, cfg.grid)
    cols = [x, orbit.cdf_at(x), orbit.density_at(x), orbit.log_density_at(x)]
    return Table(["x", "g_n", "f_n", "log_f_n"], [list(r) for r in zip(*(c.tolist() for c in cols))])


def run_push_interval(cfg: RunConfig, lam):
    lam = _continuous(cfg, lam)
    if cfg.a is None or cfg.b is None:
        raise ConfigError("--a and --b are required for push-interval")
    if not (0.0 <= cfg.a <= cfg.b <= 1.0):
        raise ConfigError("--a/--b: need 0 <= a <= b <= 1")
    value = pushforward_interval(cfg.kernel, lam, cfg.a, cfg.b)
    if cfg.format == "json":
        return {"p": cfg.p, "initial": cfg.initial, "a": cfg.a, "b": cfg.b, "value": value}
    return Table(["a", "b", "value"], [[cfg.a, cfg.b, value]])


def run_bounds(cfg: RunConfig, lam, stderr):
    lam = _continuous(cfg, lam)
    k = cfg.kernel
    if k.is_identity:
        raise ConfigError("--p: bounds need p != 1/2")
    if cfg.steps < 2:
        raise ConfigError("--steps: bounds need n >= 2")
    cert = certificate(k, cfg.steps)
    report = {"min_valid_n": min_valid_n(k), "certificate": cert.to_dict(), "verification": None}
    if not cert.valid:
        stderr.write(f"warning: certificate at n={cfg.steps} is not valid; "
                     f"smallest valid n is {report['min_valid_n']}\n")
    else:
        rep = verify_bounds(k, lam, cfg.steps, cfg.grid)
        report["verification"] = {"grid": rep.grid, "domain_x": list(rep.domain_x),
                                  "violations": rep.violations, "passed": rep.passed()}
    return report


def run_converge(cfg: RunConfig, lam):
    rep = run_to_convergence(cfg.kernel, lam, cfg.tol, cfg.max_steps)
    trace = Table(["step", "value"], [list(r) for r in rep.distances])
    if cfg.trace:
        write_outputs(trace, "csv", cfg.trace)
    return rep.to_dict() if cfg.format == "json" else trace


def run_particles(cfg: RunConfig, lam, stderr):
    k = cfg.kernel
    ens = evolve(k, sample_initial(lam, cfg.particles, cfg.seed), cfg.steps, cfg.threads)
    summary = {"p": cfg.p, "initial": cfg.initial, **ens.summary()}
    if isinstance(lam, AtomicMeasure):
        exact = iterate(k, lam, cfg.steps).weight_table()[-1]
        emp = ens.weights_on(lam.atoms)
        summary["atoms"] = lam.atoms.tolist()
        summary["empirical_weights"] = emp.tolist()
        summary["exact_weights"] = exact.tolist()
        summary["max_weight_error"] = float(np.abs(emp - exact).max())
        line = f"max |empirical - exact| atom weight = {summary['max_weight_error']:.6g}"
    else:
        # the particles follow the kernel; cdf_at follows G, its mirror image
        summary["ks_to_analytic_cdf"] = kolmogorov_distance(ens, DensityOrbit(k, lam, cfg.steps + 1).cdf_at)
        summary["ks_to_kernel_cdf"] = kolmogorov_distance(
            ens, DensityOrbit(k.swapped(), lam, cfg.steps + 1).cdf_at)
        line = (f"Kolmogorov distance to analytic CDF g^({cfg.steps + 1}) = {summary['ks_to_analytic_cdf']:.6g}; "
                f"to kernel-oriented CDF = {summary['ks_to_kernel_cdf']:.6g}")
    if cfg.format == "json":
        return summary
    stderr.write(line + "\n")
    return Table(["x"], [[v] for v in ens.points.tolist()])


def run_verify(cfg: RunConfig, stdout):
    from .verification import run_all

    results = run_all()
    failed = [r for r in results if not r.ok]
    if cfg.format == "json":
        report = {"passed": not failed,
                  "checks": [{"module": r.module, "name": r.name, "ok": r.ok, "detail": r.detail}
                             for r in results]}
        write_outputs(report, "json", resolve_path(cfg.output, "verify", "json"), stdout)
    else:
        text = "".join(r.line() + "\n" for r in results)
        text += f"{len(results) - len(failed)}/{len(results)} checks passed\n"
        path = resolve_path(cfg.output, "verify", "txt")
        if path is None:
            stdout.write(text)
        else:
            Path(path).write_text(text)
    return 1 if failed else 0


def execute(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Run one verb; returns the process exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if cfg.command == "verify":
        return run_verify(cfg, stdout)
    lam = parse_initial(cfg.initial)
    if cfg.command == "iterate-atoms":
        report = run_iterate_atoms(cfg, lam)
    elif cfg.command == "density":
        report = run_density(cfg, lam)
    elif cfg.command == "push-interval":
        report = run_push_interval(cfg, lam)
    elif cfg.command == "bounds":
        report = run_bounds(cfg, lam, stderr)
    elif cfg.command == "converge":
        report = run_converge(cfg, lam)
    else:
        report = run_particles(cfg, lam, stderr)
    write_outputs(report, cfg.format, resolve_path(cfg.output, cfg.command, cfg.format), stdout)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        return execute(cfg)
    except ConfigError as exc:
        sys.stderr.write(f"lebesgue-qso: error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"lebesgue-qso: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
