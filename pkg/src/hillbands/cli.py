"""Command-line entry points: band sweeps, verification suites, report export.

Config is a single JSON file; frequency rationals are "p/q" strings so
exactness survives parsing. Reports embed the config, the schedule and a
content hash of the inputs; identical config + seed reproduces byte-identical
report.json. Exit codes: 0 ok, 1 check failure, 2 config error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from pathlib import Path

from . import band as band_mod
from .errors import ConfigError, HillbandsError
from .lattice import FrequencyVector, QuotientLattice, check_diophantine
from .potential import fold, from_config
from .scales import build_schedule
from .verify import run_suite

OUTPUT_DIR_ENV = "HILLBANDS_OUTDIR"


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")


def content_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _json_default(obj):
    """Numpy scalars and exact rationals that sneak into audit payloads."""
    import numpy as np
    from fractions import Fraction

    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def build_context(config: dict) -> band_mod.BandContext:
    try:
        lat_cfg = config["lattice"]
        omega = FrequencyVector.parse(lat_cfg["omega"])
        if int(lat_cfg.get("nu", omega.nu)) != omega.nu:
            raise ConfigError("lattice.nu does not match omega length")
        lat = QuotientLattice(omega)
        coeffs = from_config(config["potential"], nu=omega.nu)
        folded = fold(coeffs, lat)
        sched_cfg = config.get("schedule", {})
        dio = config.get("diophantine", {})
        schedule = build_schedule(
            config.get("mode", "practical"),
            s_max=int(sched_cfg.get("s_max", 2)),
            R1=float(sched_cfg.get("R1", 12.0)),
            beta=sched_cfg.get("beta"),
            a0=float(dio.get("a0", 0.5)),
            b0=float(dio.get("b0", 2.0)),
            kappa0=coeffs.kappa0, alpha0=coeffs.alpha0, nu=omega.nu,
            eps0=sched_cfg.get("eps0"),
            sigma_scale=float(sched_cfg.get("sigma_scale", 1.0)),
            truncate=bool(sched_cfg.get("truncate", True)),
        )
        return band_mod.BandContext(
            lat=lat, folded=folded, schedule=schedule,
            eps=float(config["coupling"]),
            truncation_R=float(config.get("truncation_R", 12.0)),
            s_cap=int(sched_cfg.get("s_cap", 1)),
            use_domains=bool(config.get("use_domains", False)),
        )
    except KeyError as exc:
        raise ConfigError(f"missing config key: {exc}")
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config value: {exc}")


def k_grid_from(config: dict) -> list[float]:
    kg = config.get("k_grid", {})
    if "list" in kg:
        return [float(x) for x in kg["list"]]
    lo, hi = float(kg.get("min", 0.05)), float(kg.get("max", 0.45))
    step = float(kg.get("step", 0.01))
    count = int(round((hi - lo) / step)) + 1
    return [lo + i * step for i in range(count)]


def output_dir(config: dict, override: str | None) -> Path:
    env = os.environ.get(OUTPUT_DIR_ENV)
    path = Path(override or env or config.get("output_dir", "out"))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _band_csv(points, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "E", "scale", "class"])
        for p in points:
            writer.writerow([repr(p.k), "" if p.E is None else repr(p.E),
                             p.scale, p.klass])


def _gaps_csv(gaps, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["m", "k_m", "E_minus", "E_plus", "width", "bound"])
        for g in gaps:
            writer.writerow([";".join(str(v) for v in g.m.rep), repr(g.k_m),
                             repr(g.E_minus), repr(g.E_plus), repr(g.width),
                             repr(g.bound)])


def run_band(config: dict, out_override: str | None = None,
             threads: int = 1) -> Path:
    """Full sweep: band.csv, gaps.csv, report.json under the output dir."""
    ctx = build_context(config)
    outdir = output_dir(config, out_override)
    k_grid = k_grid_from(config)
    points = band_mod.band_curve(ctx, k_grid, threads=threads)

    gaps = []
    for mvec in config.get("gaps", []):
        m = ctx.lat.canonicalize([int(v) for v in mvec])
        try:
            gaps.append(band_mod.gap_edges(ctx, m))
        except HillbandsError as exc:
            print(f"gap at m={mvec} failed: {exc}", file=sys.stderr)

    audits = []
    audit_names = config.get("audits", ["symmetry", "monotonicity",
                                        "increments"])
    if "symmetry" in audit_names:
        neg = band_mod.band_curve(ctx, [-p.k for p in points], threads=threads)
        audits.append(band_mod.symmetry_audit(points, neg))
        audits.append(band_mod.conjugate_reflection_audit(ctx, points, neg))
    if "monotonicity" in audit_names:
        audits.append(band_mod.monotonicity_audit(ctx, points))
    if "increments" in audit_names:
        audits.append(band_mod.increment_audit(points))
    if "decay" in audit_names:
        for p in points:
            if p.phi is not None:
                rec = band_mod.decay_audit(ctx, p, mode="practical")
                p.decay_fit = rec.details.get("fitted_rate")
                audits.append(rec)
    if "gap_spectrum" in audit_names:
        for g in gaps:
            audits.append(band_mod.gap_spectrum_audit(ctx, g))
    if "gap_edge_limits" in audit_names:
        theta = 0.25 * ctx.schedule.delta[max(1, ctx.s_cap)] ** 0.75
        for g in gaps:
            audits.append(band_mod.gap_edge_limit_crosscheck(ctx, g, theta))

    floquet_data = None
    if "floquet" in audit_names:
        from .oracle import floquet_scan, period

        T = period(ctx.lat.omega)
        fg = config.get("floquet_grid", {})
        lo = float(fg.get("min", 0.5))
        hi = float(fg.get("max", 30.0))
        count = int(fg.get("count", 120))
        grid = [lo + i * (hi - lo) / (count - 1) for i in range(count)]
        floquet_data = floquet_scan(grid, ctx.eps, ctx.folded, T)

    try:
        e0_point = band_mod._ball_fallback(ctx, 0.0)
        E0 = e0_point.E
    except HillbandsError:
        E0 = None

    dio = config.get("diophantine")
    dio_report = None
    if dio:
        rep = check_diophantine(ctx.lat, float(dio["a0"]), float(dio["b0"]),
                                float(dio["Rbar0"]))
        dio_report = {
            "satisfied": rep.satisfied,
            "box_condition_ok": rep.box_condition_ok,
            "worst_margin": None if rep.worst_pair is None
            else rep.worst_pair[1],
            "checked": rep.checked_count,
        }

    k_n0_ref = abs(gaps[0].k_m) if gaps else 0.5
    report = band_mod.BandReport(
        points=points, gaps=gaps, E0=E0, audits=audits,
        kzero_variants=band_mod.k_zero_variants(
            k=max((p.k for p in points), default=1.0),
            k1=min((p.k for p in points), default=0.0),
            k_n0=k_n0_ref, eps0=ctx.schedule.eps0),
    )
    coeffs = from_config(config["potential"], nu=ctx.lat.nu)
    payload = {
        "config": config,
        "content_hash": content_hash(config),
        "schedule": ctx.schedule.to_dict(),
        "diophantine": dio_report,
        "potential_truncation_tail": coeffs.truncation_tail_bound(ctx.lat.nu),
        "report": report.to_dict(),
    }
    if floquet_data is not None:
        payload["floquet_bands"] = [list(b) for b in floquet_data.bands]
        with open(outdir / "floquet.csv", "w", newline="",
                  encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["E", "Delta"])
            for E, d in zip(floquet_data.E_grid, floquet_data.discriminant):
                writer.writerow([repr(E), repr(d)])
    _band_csv(points, outdir / "band.csv")
    _gaps_csv(gaps, outdir / "gaps.csv")
    with open(outdir / "report.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1, default=_json_default)
        fh.write("\n")
    with open(outdir / "run.log", "w", encoding="utf-8") as fh:
        for p in points:
            fh.write(f"k={p.k!r} class={p.klass} scale={p.scale} "
                     f"E={p.E!r} {p.error}\n")
    return outdir


def export_report(report_path: str, fmt: str,
                  out_override: str | None = None) -> Path:
    with open(report_path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    outdir = Path(out_override or Path(report_path).parent)
    outdir.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        target = outdir / "report.export.json"
        with open(target, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1,
                      default=_json_default)
            fh.write("\n")
        return target
    if fmt == "csv":
        samples = payload["report"]["samples"]
        target = outdir / "band.export.csv"
        with open(target, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "E", "scale", "class"])
            for s in samples:
                writer.writerow([repr(s["k"]),
                                 "" if s["E"] is None else repr(s["E"]),
                                 s["scale"], s["class"]])
        gaps = payload["report"]["gaps"]
        gap_target = outdir / "gaps.export.csv"
        with open(gap_target, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["m", "k_m", "E_minus", "E_plus", "width", "bound"])
            for g in gaps:
                writer.writerow([";".join(str(v) for v in g["m"]),
                                 repr(g["k_m"]), repr(g["E_minus"]),
                                 repr(g["E_plus"]), repr(g["width"]),
                                 repr(g["bound"])])
        return target
    raise ConfigError(f"unknown export format {fmt!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hillbands",
        description="Band-gap toolkit for operators dual to Hill's equation",
    )
    parser.add_argument("--threads", type=int,
                        default=max(1, os.cpu_count() or 1),
                        help="parallelism for per-k work")
    sub = parser.add_subparsers(dest="command", required=True)

    p_band = sub.add_parser("band", help="run a band sweep from a config file")
    p_band.add_argument("config")
    p_band.add_argument("--output-dir", default=None)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("config", nargs="?", default=None,
                          help="optional config (suites use built-in toys)")
    p_verify.add_argument("--suite", default="all",
                          choices=["weights", "schur", "dichotomy", "cff",
                                   "domains", "band", "floquet", "all"])

    p_export = sub.add_parser("export", help="re-emit a report")
    p_export.add_argument("report")
    p_export.add_argument("--format", default="json", choices=["csv", "json"])
    p_export.add_argument("--output-dir", default=None)

    args = parser.parse_args(argv)
    try:
        if args.command == "band":
            config = load_config(args.config)
            outdir = run_band(config, args.output_dir, threads=args.threads)
            print(f"wrote {outdir / 'band.csv'}, {outdir / 'gaps.csv'}, "
                  f"{outdir / 'report.json'}")
            return 0
        if args.command == "verify":
            config = load_config(args.config) if args.config else None
            results = run_suite(args.suite, config)
            for r in results:
                print(r.line())
            failed = [r for r in results if not r.passed]
            print(f"{len(results) - len(failed)}/{len(results)} checks passed")
            return 1 if failed else 0
        if args.command == "export":
            target = export_report(args.report, args.format, args.output_dir)
            print(f"wrote {target}")
            return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except HillbandsError as exc:
        print(f"check failure: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
