"""Command-line front end.

    qpartition pdensity     [--config C] [--output O] [--format csv|json]
    qpartition energy       ...
    qpartition verify       ...   (always JSON)
    qpartition bath-compare ...

Exit codes: 0 success, 1 check failure, 2 config error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Any, Sequence

import numpy as np

from .bath import exact_kinetic, oracle_modes
from .config import OutputSpec, RunConfig, load_config
from .errors import ConfigError, DivergenceError, NumericalError, PartitionError
from .partition import ThermalContext, kinetic_per_mode, mean_kinetic_energy, partition_density
from .verify import default_systems, run_suite

log = logging.getLogger("qpartition")

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


def fmt(x: Any) -> str:
    """Fixed 17-significant-digit rendering used in every CSV cell."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.17g}"
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else fmt(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def render(rows: list[dict], columns: Sequence[str], fmt_name: str, provenance: dict | None) -> str:
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(r[c]) for c in columns])
        return buf.getvalue()
    doc: Any = rows if provenance is None else {"provenance": provenance, "rows": rows}
    return json.dumps(_jsonable(doc), indent=2) + "\n"


def emit(text: str, output: OutputSpec):
    if output.path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(output.path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {output.path}: {exc}") from None


def _map(fn, items, jobs):
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def _provenance(cfg: RunConfig, **extra):
    d = {"system": cfg.system.to_dict(), "thermal": cfg.thermal.to_dict()}
    d.update(extra)
    return d


def cmd_pdensity(cfg: RunConfig, jobs: int = 1) -> tuple[str, int]:
    """Density table ``omega, P, Ek_mode``; ``Ek_mode`` uses the first temperature."""
    th = cfg.thermal
    ctx = ThermalContext(th.temperatures[0], th.hbar, th.kB)
    pd = partition_density(cfg.system, cfg.grid)
    rows = []
    for w, p in zip(pd.grid, pd.values):
        ek = float("nan") if (w == 0 and ctx.temperature == 0) else float(kinetic_per_mode(ctx, w))
        rows.append({"omega": float(w), "P": float(p), "Ek_mode": ek})
    mass = pd.total_mass()
    log.info("normalization estimate (trapezoid + tail): %.12g", mass)
    prov = _provenance(cfg, grid=cfg.grid.to_dict(), mode_temperature=ctx.temperature,
                       normalization_estimate=mass)
    return render(rows, ["omega", "P", "Ek_mode"], cfg.output.format, prov), EXIT_OK


def cmd_energy(cfg: RunConfig, jobs: int = 1) -> tuple[str, int]:
    """Energy sweep ``T, Ek, p2, quad_err, status`` in input order."""
    th = cfg.thermal

    def one(T):
        ctx = ThermalContext(T, th.hbar, th.kB)
        try:
            r = mean_kinetic_energy(cfg.system, ctx, cfg.quad)
        except DivergenceError as exc:
            log.error("T=%s: %s", fmt(T), exc)
            return {"T": T, "Ek": math.inf, "p2": math.inf, "quad_err": math.nan,
                    "status": "divergent"}
        return {"T": T, "Ek": r.energy, "p2": r.p2, "quad_err": r.error, "status": "ok"}

    rows = _map(one, th.temperatures, jobs)
    code = EXIT_NUMERICAL if any(r["status"] != "ok" for r in rows) else EXIT_OK
    prov = _provenance(cfg, quad=cfg.quad.to_dict())
    return render(rows, ["T", "Ek", "p2", "quad_err", "status"], cfg.output.format, prov), code


def cmd_verify(cfg: RunConfig, jobs: int = 1, mass_prefactor: bool = True) -> tuple[str, int]:
    """Full verification matrix (configured system first) as a JSON report array."""
    systems = [cfg.system] + [s for s in default_systems() if s != cfg.system]
    reports = run_suite(systems, mass_prefactor=mass_prefactor, hbar=cfg.thermal.hbar,
                        kB=cfg.thermal.kB, jobs=jobs)
    failed = [r for r in reports if not r.passed]
    for r in failed:
        log.error("FAILED %s: expected %s, computed %s", r.check_name, fmt(r.expected),
                  fmt(r.computed))
    log.info("%d checks, %d failed", len(reports), len(failed))
    text = json.dumps(_jsonable([r.to_dict() for r in reports]), indent=2) + "\n"
    return text, EXIT_CHECK if failed else EXIT_OK


def cmd_bath_compare(cfg: RunConfig, jobs: int = 1) -> tuple[str, int]:
    """Oracle vs continuum energy for every ``(N, T)``."""
    b, th = cfg.bath, cfg.thermal
    ctxs = [ThermalContext(T, th.hbar, th.kB) for T in th.temperatures]
    continuum = [mean_kinetic_energy(cfg.system, c, cfg.quad).energy for c in ctxs]

    def one(N):
        parts = oracle_modes(cfg.system, N, b.omega_max, b.epsilon, placement=b.placement)
        out = []
        for ctx, cont in zip(ctxs, continuum):
            orac = sum(c * exact_kinetic(m, ctx) for c, m in parts)
            out.append({"N": N, "omega_max": b.omega_max,
                        "epsilon": b.epsilon if cfg.system.is_free else None,
                        "T": ctx.temperature, "Ek_oracle": orac, "Ek_continuum": cont,
                        "rel_err": abs(orac - cont) / abs(orac)})
        return out

    rows = [r for block in _map(one, b.N, jobs) for r in block]
    bad = [r for r in rows if not r["rel_err"] < b.rel_tol]
    for r in bad:
        log.error("N=%d T=%s: rel_err %.3g exceeds %.3g", r["N"], fmt(r["T"]), r["rel_err"], b.rel_tol)
    if cfg.output.format == "csv":
        cols = ["N", "omega_max", "epsilon", "T", "Ek_oracle", "Ek_continuum", "rel_err"]
        rows_out = [{**r, "epsilon": "" if r["epsilon"] is None else r["epsilon"]} for r in rows]
        text = render(rows_out, cols, "csv", None)
    else:
        text = json.dumps(_jsonable(rows), indent=2) + "\n"
    return text, EXIT_CHECK if bad else EXIT_OK


COMMANDS = {
    "pdensity": cmd_pdensity,
    "energy": cmd_energy,
    "verify": cmd_verify,
    "bath-compare": cmd_bath_compare,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qpartition",
                                description="Quantum kinetic-energy partition toolkit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON run configuration (defaults built in)")
        sp.add_argument("--output", help="output path, '-' for stdout")
        sp.add_argument("--format", choices=["csv", "json"])
        sp.add_argument("--jobs", type=int, default=1, help="concurrent sweep points")
        if name == "verify":
            sp.add_argument("--drop-mass-prefactor", action="store_true",
                            help="omit 1/M in the sum rule (negative control; must fail)")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr, force=True)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        out = cfg.output
        if args.output is not None or args.format is not None:
            out = OutputSpec(args.output if args.output is not None else out.path,
                             args.format if args.format is not None else out.format)
            cfg = replace(cfg, output=out)
        out.check_writable()
        kwargs = {"jobs": max(1, args.jobs)}
        if args.command == "verify":
            kwargs["mass_prefactor"] = not args.drop_mass_prefactor
        text, code = COMMANDS[args.command](cfg, **kwargs)
        emit(text, out)
        return code
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except (NumericalError, PartitionError) as exc:
        log.error("numerical error: %s", exc)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
