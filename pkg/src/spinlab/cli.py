"""Command-line driver: run declarative experiments and write CSV/JSON data.

    spinlab run --config experiment.json [--threads N] [--sector positive]
    spinlab zones --gx 5 --gy -3 --h 1
    spinlab fit --input scaling.csv --intercept 0.5 --scan 0.48:0.52:0.001

Exit status is 0 on success, 2 for a bad config or arguments, 3 for a
numeric or domain error and 4 for an I/O error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import __version__
from .analysis import (
    SECTORS,
    c0_profile,
    dicke_average,
    dos_histogram,
    ee_distribution,
    fixed_intercept_fit,
    intercept_grid,
    intercept_scan,
    lmg_average,
    superposition_average,
)
from .classical import classify_zone, fixed_points
from .errors import BoundaryError, ConfigError, SpinlabError
from .lmg import LmgParams

EXPERIMENTS = ("dicke-average", "superposition-average", "lmg-spectrum", "scaling-fit",
               "c0-profile", "distribution", "zones")
DEFAULT_SCAN = (0.48, 0.52, 0.001)
DEFAULT_INTERCEPT = 0.5

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


@dataclass
class ExperimentConfig:
    experiment: str
    params: list = field(default_factory=list)
    sizes: list = field(default_factory=list)
    fractions: list = field(default_factory=lambda: [0.5])
    sector: Optional[str] = None
    intercept_scan: Optional[list] = None
    bins: int = 101
    output_dir: str = "."
    threads: int = 1

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        if "experiment" not in raw:
            raise ConfigError("config needs an 'experiment' field")
        try:
            cfg = cls(**raw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}")
        if self.sector is not None and self.sector not in SECTORS:
            raise ConfigError(f"sector must be one of {SECTORS}, got {self.sector!r}")
        try:
            self.params = [tuple(float(v) for v in triple) for triple in self.params]
            self.sizes = [_as_int(n, "sizes") for n in self.sizes]
            self.fractions = [float(p) for p in self.fractions]
            self.bins = _as_int(self.bins, "bins")
            self.threads = _as_int(self.threads, "threads")
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"malformed numeric field: {exc}") from exc
        if any(len(t) != 3 or not all(math.isfinite(v) for v in t) for t in self.params):
            raise ConfigError("each params entry must be a finite (gamma_x, gamma_y, h) triple")
        if self.threads < 1 or self.bins < 1:
            raise ConfigError("threads and bins must be positive")
        for n in self.sizes:
            if n < 2 or n % 2:
                raise ConfigError(f"every N must be even and at least 2, got {n}")
            for p in self.fractions:
                if not 0 < p <= 0.5:
                    raise ConfigError(f"fraction {p} outside (0, 1/2]")
                if abs(p * n - round(p * n)) > 1e-9:
                    raise ConfigError(f"p*N is not an integer for p={p}, N={n}")
        if self.intercept_scan is not None:
            scan = [float(v) for v in self.intercept_scan]
            if len(scan) != 3 or not scan[0] < scan[1] or scan[2] <= 0:
                raise ConfigError("intercept_scan must be (min, max, step) with min < max, step > 0")
            self.intercept_scan = scan
        needs_params = self.experiment in ("lmg-spectrum", "distribution", "zones")
        if needs_params and not self.params:
            raise ConfigError(f"{self.experiment} needs at least one params triple")
        if self.experiment != "zones" and not self.sizes:
            raise ConfigError(f"{self.experiment} needs at least one size")
        if self.experiment == "distribution" and (len(self.params) != 1 or len(self.sizes) != 1):
            raise ConfigError("distribution takes exactly one params triple and one size")

    def echo(self) -> dict:
        out = asdict(self)
        out["params"] = [list(t) for t in self.params]
        return out


def _as_int(value, name: str) -> int:
    if isinstance(value, bool) or float(value) != int(value):
        raise ValueError(f"{name} entries must be integers, got {value!r}")
    return int(value)


# serialization

def fmt(value) -> str:
    """Shortest round-trip text for a number (at most 17 significant digits)."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise SpinlabError(f"refusing to write non-finite value {value!r}")
        return repr(value)
    return str(value)


def csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _finite_json(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        raise SpinlabError(f"refusing to write non-finite value {obj!r}")
    if isinstance(obj, dict):
        return {k: _finite_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite_json(v) for v in obj]
    if isinstance(obj, np.generic):
        return _finite_json(obj.item())
    return obj


def json_text(obj) -> str:
    return json.dumps(_finite_json(obj), indent=2, allow_nan=False) + "\n"


# experiment pieces

def fit_report(x, y, a: float, scan: tuple[float, float, float]) -> dict:
    fit = fixed_intercept_fit(x, y, a)
    grid, scores = intercept_scan(x, y, intercept_grid(*scan))
    return {
        "a": fit.intercept_a,
        "b": fit.slope_b,
        "r2": fit.r_squared,
        "one_minus_r2": fit.one_minus_r2,
        "best_a": float(grid[np.argmin(scores)]),
        "scan": [[float(g), float(s)] for g, s in zip(grid, scores)],
    }


def fits_from_rows(rows: list[dict], a: float, scan) -> list[dict]:
    """Group scaling rows by (basis, p) and fit each group with two or more sizes."""
    groups: dict[tuple[str, float], list[dict]] = {}
    for row in rows:
        groups.setdefault((row["basis"], float(row["p"])), []).append(row)
    out = []
    for (basis, p), members in groups.items():
        if len(members) < 2:
            continue
        members = sorted(members, key=lambda r: int(r["N"]))
        x = [1.0 / float(r["s_max"]) for r in members]
        y = [float(r["normalized"]) for r in members]
        out.append({"basis": basis, "p": p, "sizes": [int(r["N"]) for r in members],
                    **fit_report(x, y, a, scan)})
    return out


def zone_entry(triple) -> dict:
    params = LmgParams(*triple)
    entry: dict[str, Any] = {"params": list(params.as_tuple())}
    try:
        report = classify_zone(params)
    except BoundaryError as exc:
        entry.update(zone="boundary", sub_case="none", reason=str(exc))
        try:
            fps = fixed_points(params)
        except BoundaryError:
            fps = []
        entry["fixed_points"] = [_fp_entry(fp) for fp in fps]
        entry["esqpt_energies"] = []
        return entry
    entry.update(zone=report.zone, sub_case=report.sub_case or "none",
                 fixed_points=[_fp_entry(fp) for fp in report.fixed_points],
                 esqpt_energies=list(report.esqpt_energies))
    return entry


def _fp_entry(fp) -> dict:
    coords = None if fp.point is None else [fp.point.x, fp.point.y, fp.point.z]
    h0 = fp.h0 if math.isfinite(fp.h0) else None
    return {"label": fp.label, "coords": coords, "h0": h0, "exists": fp.exists, "stable": fp.stable}


class Runner:
    """Executes one config and collects emitted files and task timings."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.out_dir = Path(cfg.output_dir)
        self.files: dict[str, str] = {}
        self.timings: list[dict] = []

    def _timed(self, name: str, fn, *args):
        t0 = time.perf_counter()
        try:
            result = fn(*args)
        except SpinlabError as exc:
            raise SpinlabError(f"task {name} failed: {exc}") from exc
        self.timings.append({"task": name, "seconds": time.perf_counter() - t0})
        return result

    def _map(self, tasks: list[tuple[str, Any, tuple]]) -> list:
        """Run independent tasks over the worker pool; results keep task order."""
        if self.cfg.threads <= 1 or len(tasks) <= 1:
            return [self._timed(name, fn, *args) for name, fn, args in tasks]
        with ThreadPoolExecutor(max_workers=self.cfg.threads) as pool:
            futures = [pool.submit(self._timed, name, fn, *args) for name, fn, args in tasks]
            return [f.result() for f in futures]

    def emit(self, name: str, text: str) -> None:
        self.files[name] = text

    def sector(self, default: str) -> str:
        return self.cfg.sector or default

    # experiments

    def scaling(self) -> None:
        cfg = self.cfg
        inner = cfg.threads if len(cfg.sizes) * max(len(cfg.params), 1) * len(cfg.fractions) == 1 else 1
        tasks = []
        kind = cfg.experiment
        if kind == "scaling-fit":
            kind = "lmg-spectrum" if cfg.params else "dicke-average"
        for p in cfg.fractions:
            if kind == "dicke-average":
                for n in cfg.sizes:
                    tasks.append((f"dicke N={n} p={p}", dicke_average, (n, p, self.sector("both"))))
            elif kind == "superposition-average":
                for n in cfg.sizes:
                    tasks.append((f"superposition N={n} p={p}", superposition_average, (n, p, inner)))
            else:
                for triple in cfg.params:
                    params = LmgParams(*triple)
                    for n in cfg.sizes:
                        tasks.append((f"lmg {triple} N={n} p={p}", lmg_average,
                                      (params, n, p, self.sector("positive"), inner)))
        samples = self._map(tasks)
        rows = [{"basis": s.basis_label, "N": s.n_qubits, "p": s.fraction, "s_max": s.s_max,
                 "avg_ee": s.avg_ee, "normalized": s.normalized} for s in samples]
        header = ["basis", "N", "p", "s_max", "avg_ee", "normalized"]
        self.emit("scaling.csv", csv_text(header, [[r[h] for h in header] for r in rows]))
        fits = fits_from_rows(rows, DEFAULT_INTERCEPT, cfg.intercept_scan or DEFAULT_SCAN)
        if fits:
            self.emit("fit.json", json_text({"fits": fits}))

    def c0(self) -> None:
        cfg = self.cfg
        tasks, keys = [], []
        if cfg.params:
            for triple in cfg.params:
                for n in cfg.sizes:
                    label = "lmg({:g},{:g},{:g};{})".format(*triple, self.sector("positive"))
                    keys.append((label, n))
                    tasks.append((f"c0 {triple} N={n}", c0_profile,
                                  (LmgParams(*triple), n, cfg.fractions, self.sector("positive"))))
        else:
            for n in cfg.sizes:
                keys.append(("dicke", n))
                tasks.append((f"c0 dicke N={n}", c0_profile, (None, n, cfg.fractions, self.sector("both"))))
        rows = []
        for (label, n), table in zip(keys, self._map(tasks)):
            for r in table:
                rows.append([label, n, r.fraction, r.avg_ee, r.s_max, r.c0])
        self.emit("c0.csv", csv_text(["basis", "N", "p", "avg_ee", "s_max", "c0"], rows))

    def distribution(self) -> None:
        cfg = self.cfg
        params = LmgParams(*cfg.params[0])
        n = cfg.sizes[0]
        p = cfg.fractions[0]
        prof = self._timed(f"distribution {cfg.params[0]} N={n} p={p}", ee_distribution,
                           params, n, p, self.sector("positive"), cfg.threads)
        rows = [[i, e, s, ee] for i, (e, s, ee) in
                enumerate(zip(prof.energies, prof.scaled_energies, prof.entropies))]
        self.emit("profile.csv", csv_text(["index", "energy", "scaled_energy", "entropy"], rows))
        hist = dos_histogram(prof.scaled_energies, cfg.bins)
        rows = [[lo, hi, c] for lo, hi, c in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.counts)]
        self.emit("dos.csv", csv_text(["bin_lo", "bin_hi", "count"], rows))

    def zones(self) -> None:
        tasks = [(f"zones {t}", zone_entry, (t,)) for t in self.cfg.params]
        self.emit("zones.json", json_text({"zones": self._map(tasks)}))

    def run(self) -> dict:
        kind = self.cfg.experiment
        if kind in ("dicke-average", "superposition-average", "lmg-spectrum", "scaling-fit"):
            self.scaling()
        elif kind == "c0-profile":
            self.c0()
        elif kind == "distribution":
            self.distribution()
        else:
            self.zones()
        return self.write()

    def write(self) -> dict:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        checksums = {}
        for name, text in self.files.items():
            data = text.encode()
            (self.out_dir / name).write_bytes(data)
            checksums[name] = hashlib.sha256(data).hexdigest()
        manifest = {
            "config": self.cfg.echo(),
            "version": __version__,
            "tasks": self.timings,
            "files": checksums,
        }
        (self.out_dir / "manifest.json").write_text(json_text(manifest))
        return manifest


def run(cfg: ExperimentConfig) -> dict:
    """Execute a config, write its outputs and return the manifest."""
    return Runner(cfg).run()


def load_config(path: str) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return ExperimentConfig.from_dict(raw)


def read_scaling_csv(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    need = {"basis", "N", "p", "s_max", "normalized"}
    if not rows or not need <= set(rows[0]):
        raise ConfigError(f"{path} must be a scaling table with columns {sorted(need)}")
    return rows


def parse_scan(text: str) -> tuple[float, float, float]:
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise ConfigError(f"scan must look like min:max:step, got {text!r}") from exc
    if not lo < hi or step <= 0:
        raise ConfigError("scan needs min < max and a positive step")
    return lo, hi, step


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="worker threads")
    common.add_argument("--sector", choices=SECTORS, default=None, help="parity sector")

    parser = _Parser(prog="spinlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_run = sub.add_parser("run", parents=[common], help="run an experiment config")
    p_run.add_argument("--config", required=True)

    p_zones = sub.add_parser("zones", parents=[common], help="classical zone of (gx, gy, h)")
    p_zones.add_argument("--gx", type=float, required=True)
    p_zones.add_argument("--gy", type=float, required=True)
    p_zones.add_argument("--h", type=float, required=True)
    p_zones.add_argument("--output", help="write zones.json here instead of stdout")

    p_fit = sub.add_parser("fit", parents=[common], help="fixed-intercept fit of a scaling table")
    p_fit.add_argument("--input", required=True)
    p_fit.add_argument("--intercept", type=float, default=DEFAULT_INTERCEPT)
    p_fit.add_argument("--scan", default="{}:{}:{}".format(*DEFAULT_SCAN))
    p_fit.add_argument("--output", help="write fit.json here instead of stdout")
    return parser


def _dispatch(args) -> None:
    if args.command == "run":
        cfg = load_config(args.config)
        if args.threads is not None:
            cfg.threads = args.threads
        if args.sector is not None:
            cfg.sector = args.sector
        cfg.validate()
        manifest = run(cfg)
        for name in manifest["files"]:
            print(Path(cfg.output_dir) / name)
        return
    if args.command == "zones":
        text = json_text({"zones": [zone_entry((args.gx, args.gy, args.h))]})
    else:
        rows = read_scaling_csv(args.input)
        fits = fits_from_rows(rows, args.intercept, parse_scan(args.scan))
        if not fits:
            raise ConfigError("no (basis, p) group in the table has two or more sizes")
        text = json_text({"fits": fits})
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    try:
        _dispatch(build_parser().parse_args(argv))
    except ConfigError as exc:
        print(f"spinlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"spinlab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SpinlabError, ArithmeticError, ValueError) as exc:
        print(f"spinlab: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
