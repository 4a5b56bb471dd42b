"""Command-line front end.

Subcommands: phi-table, curve, area, threshold, trajectory, verify, and
plot-script.  Randomized commands always run under an explicit or
defaulted-and-echoed seed, and every report embeds the full effective
configuration so a run can be reproduced from its output alone.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import awgn, charts, decoders
from .awgn import LN4
from .config import ConfigError, PRESETS, parse_code_spec, resolve_preset
from .io import (
    FORMAT_VERSION,
    MMSE_SNR_HEADER,
    TRANSFER_HEADER,
    SchemaError,
    curve_to_json_dict,
    read_json,
    write_json,
    write_mmse_snr_csv,
    _atomic_write,
    _csv_text,
)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_CONFIG = 2


def _report(command: str, config: dict, results: dict, checks: list[dict],
            warnings: list[str], t0: float) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "command": command,
        "config": config,
        "elapsed_s": round(time.time() - t0, 3),
        "results": results,
        "checks": checks,
        "warnings": warnings,
        "pass": all(c["pass"] for c in checks) if checks else True,
    }


def _emit(report: dict, out: str | None) -> None:
    if out:
        write_json(out, report)
    for c in report["checks"]:
        status = "PASS" if c["pass"] else "FAIL"
        print(f"[{status}] {c['name']}: value={c['value']:.6g} tolerance={c['tolerance']:.6g}")
    if not report["checks"]:
        for k, v in report["results"].items():
            print(f"{k} = {v}")


def _resolve(args) -> object:
    if getattr(args, "config", None):
        tree = read_json(args.config)
        return parse_code_spec(tree, path=str(args.config))
    name = getattr(args, "code", None) or getattr(args, "profile", None)
    if name is None:
        raise ConfigError("code", "need --code/--profile preset or --config file")
    return resolve_preset(name)


def _snr_grid(args) -> np.ndarray:
    if args.unit == "db":
        lo, hi = awgn.db_to_linear(args.grid_min), awgn.db_to_linear(args.grid_max)
    else:
        lo, hi = args.grid_min, args.grid_max
    if lo < 0 or hi <= lo:
        raise ConfigError("grid", f"invalid snr range [{lo}, {hi}]")
    if lo == 0.0:
        return np.linspace(0.0, hi, args.grid_points)
    return np.geomspace(lo, hi, args.grid_points)


def _build_apriori_curve(spec, grid: np.ndarray, samples: int, seed: int) -> charts.MmseSnrCurve:
    """A-priori-axis MMSE curve (the one whose area is rate * ln4) for a spec."""
    if isinstance(spec, decoders.ConvCodeSpec):
        return decoders.conv_mmse_curve(spec, grid, bits_per_point=samples, seed=seed)
    if isinstance(spec, tuple) and spec[0] == "repetition":
        return charts.repetition_curve(spec[1], grid)
    if isinstance(spec, tuple) and spec[0] == "spc":
        n = spec[1]
        pts = [decoders.check_node_transfer(n, g, max(samples, 10**4), seed=seed + i)
               if g > 0 else decoders.TransferPoint(0.0, 1.0, 1.0, 0.0)
               for i, g in enumerate(grid)]
        mmse = np.minimum.accumulate(np.array([p.mmse_out for p in pts]))
        return charts.MmseSnrCurve(gamma=np.asarray(grid), mmse=mmse,
                                   stderr=np.array([p.stderr for p in pts]),
                                   label=f"spc-{n}")
    raise ConfigError("code", f"cannot build a curve for spec {spec!r}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_phi_table(args) -> int:
    t0 = time.time()
    grid = _snr_grid(args)
    mmse = np.atleast_1d(awgn.phi(grid, args.prior))
    curve = charts.MmseSnrCurve(gamma=grid, mmse=mmse, label="phi")
    write_mmse_snr_csv(args.out, curve)
    rep = _report("phi-table", vars(args) | {"seed": None}, {"rows": len(grid), "out": args.out},
                  [], [], t0)
    if args.report:
        write_json(args.report, rep)
    print(f"wrote {args.out} ({len(grid)} rows)")
    return EXIT_OK


def cmd_curve(args) -> int:
    t0 = time.time()
    spec = _resolve(args)
    grid = _snr_grid(args)
    curve = _build_apriori_curve(spec, grid, args.samples, args.seed)
    write_mmse_snr_csv(args.out, curve)
    if args.json:
        res = charts.area(curve)
        write_json(args.json, curve_to_json_dict(
            curve, seed=args.seed, grid={"min": args.grid_min, "max": args.grid_max,
                                         "points": args.grid_points, "unit": args.unit},
            integration_error=res.error_estimate))
    rep = _report("curve", _echo(args), {"out": args.out, "label": curve.label}, [], [], t0)
    if args.report:
        write_json(args.report, rep)
    print(f"wrote {args.out} ({curve.gamma.size} points, label {curve.label})")
    return EXIT_OK


def cmd_area(args) -> int:
    t0 = time.time()
    spec = _resolve(args)
    grid = _snr_grid(args)
    if args.axis == "extrinsic" and isinstance(spec, tuple) and spec[0] == "repetition":
        curve = charts.repetition_curve(spec[1], grid, extrinsic_axis=True)
    else:
        curve = _build_apriori_curve(spec, grid, args.samples, args.seed)
    res = charts.area(curve)
    rate, clamped = charts.rate_from_area(res.nats, args.role, args.axis)
    warnings = ["rate clamped into [0, 1]"] if clamped else []
    results = {
        "area_nats": res.nats,
        "area_over_ln4": res.nats / LN4,
        "tail_nats": res.tail,
        "integration_error_estimate": res.error_estimate,
        "rate_estimate": rate,
    }
    rep = _report("area", _echo(args), results, [], warnings, t0)
    _emit(rep, args.out)
    print(json.dumps(results, indent=2))
    return EXIT_OK


def cmd_threshold(args) -> int:
    t0 = time.time()
    spec = _resolve(args)
    if not isinstance(spec, decoders.DegreeProfile):
        raise ConfigError("profile", "threshold needs a degree-profile spec")
    th = charts.threshold(spec, args.lo_db, args.hi_db, args.tol_db,
                          max_iter=args.max_iter)
    results = {"threshold_ebn0_db": th, "design_rate": spec.design_rate}
    rep = _report("threshold", _echo(args), results, [], [], t0)
    _emit(rep, args.out)
    print(f"threshold = {th:.3f} dB (Eb/N0), design rate {spec.design_rate:.4f}")
    return EXIT_OK


def cmd_trajectory(args) -> int:
    t0 = time.time()
    spec = _resolve(args)
    if not isinstance(spec, decoders.DegreeProfile):
        raise ConfigError("profile", "trajectory needs a degree-profile spec")
    gamma = charts.ebn0_db_to_gamma(args.ebn0_db, spec.design_rate)
    tr = charts.trajectory(spec, gamma, args.max_iter, args.tol)
    results = {
        "converged": tr.converged,
        "iterations_used": tr.iterations_used,
        "stalled_at_mmse": tr.stalled_at,
        "channel_gamma": gamma,
    }
    rep = _report("trajectory", _echo(args), results, [], [], t0)
    if args.out:
        rep["steps"] = tr.steps
        write_json(args.out, rep)
    if args.steps_csv:
        _atomic_write(args.steps_csv,
                      _csv_text(["iteration", "mmse_check", "mmse_bit"], tr.steps))
    print(f"converged={tr.converged} after {tr.iterations_used} iterations")
    return EXIT_OK


def _echo(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    return cfg


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def verification_checks(seed: int = 0, fast: bool = False) -> list[dict]:
    """The full invariant suite: I-MMSE, areas, oracle equivalence, measures."""
    checks = []

    def add(name, value, tol):
        checks.append({"name": name, "value": float(value), "tolerance": float(tol),
                       "pass": bool(value <= tol)})

    grid = charts.default_snr_grid()
    add("immse-identity-max-deviation",
        awgn.verify_immse(np.linspace(0.1, 10.0, 60 if fast else 200)), 1e-4)
    total = charts.area(charts.MmseSnrCurve(gamma=grid, mmse=np.atleast_1d(awgn.phi(grid)))).nats
    add("total-area-ln4", abs(total - LN4), 1e-3)
    for N in (2, 3, 4, 8):
        a = charts.area(charts.repetition_curve(N, grid, extrinsic_axis=True)).nats
        add(f"repetition-{N}-extrinsic-area", abs(a - (1 - 1 / N) * LN4), 1e-3)
    for snr in (0.5, 1.0, 2.0):
        c = decoders.uncoded_inner_curve(decoders.InnerChannelSpec("awgn", snr=snr), grid)
        add(f"uncoded-awgn-{snr}-area",
            abs(charts.area(c).nats - LN4 * (1 - awgn.mutual_info_binary(snr))), 1e-3)
    for eps in (0.3, 0.5):
        c = decoders.uncoded_inner_curve(decoders.InnerChannelSpec("erasure", epsilon=eps), grid)
        add(f"uncoded-erasure-{eps}-area", abs(charts.area(c).nats - eps * LN4), 1e-3)

    code = decoders.ConvCodeSpec((0o5, 0o7))
    rng = awgn.rng_stream(seed, 77)
    worst = 0.0
    for _ in range(5 if fast else 20):
        k = int(rng.integers(2, 13))
        cb = decoders.codebook(code, k)
        llr = rng.normal(0.0, 2.0, cb.shape[1])
        worst = max(worst, decoders.max_llr_deviation(
            decoders.brute_force_app(cb, llr), decoders.bcjr_extrinsic(code, llr)))
    add("bcjr-vs-exhaustive-app", worst, 1e-9)

    n = 10**5 if fast else 10**6
    for m in (0.5, 2.0, 8.0):
        e = awgn.sample_consistent_llr(m, n, seed + int(10 * m))
        rep = awgn.consistency_check(e)
        se = 3.0 * np.std(e.x * np.tanh(e.llr / 2) - np.tanh(e.llr / 2) ** 2) / math.sqrt(n)
        add(f"consistency-m{m}", abs(rep.m2_m4_gap), max(se, 1e-12))
        m4_blind = awgn.extract_measure(e.without_labels(), awgn.MeasureKind.ONE_MINUS_MSE)
        m4 = awgn.extract_measure(e, awgn.MeasureKind.ONE_MINUS_MSE)
        add(f"m4-receiver-side-m{m}", abs(m4 - m4_blind), 0.0)
    return checks


def cmd_verify(args) -> int:
    t0 = time.time()
    checks = verification_checks(seed=args.seed, fast=args.fast)
    rep = _report("verify", _echo(args), {}, checks, [], t0)
    _emit(rep, args.out)
    return EXIT_OK if rep["pass"] else EXIT_VERIFY_FAIL


# ---------------------------------------------------------------------------
# plot-script emission
# ---------------------------------------------------------------------------

_PLOT_AXES = {
    "transfer": (TRANSFER_HEADER, "a-priori MMSE", "extrinsic MMSE"),
    "mmse_snr": (MMSE_SNR_HEADER, "SNR (linear)", "MMSE"),
    "chart_pair": (MMSE_SNR_HEADER, "bit-to-check SNR (linear)", "MMSE"),
    "trajectory": (["iteration", "mmse_check", "mmse_bit"], "iteration", "MMSE"),
}

_PLOT_TEMPLATE = '''\
#!/usr/bin/env python3
"""Auto-generated plot script; renders {svg} from {csvs}. No new numbers."""
import csv

import matplotlib
matplotlib.use("svg")
import matplotlib.pyplot as plt

fig, ax = plt.subplots(figsize=(6, 4.5))
for path in {csvs!r}:
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    cols = {{name: [float(r[i]) for r in rows[1:]] for i, name in enumerate(rows[0])}}
    ax.plot(cols[{xcol!r}], cols[{ycol!r}], marker=".", label=path)
ax.set_xlabel({xlabel!r})
ax.set_ylabel({ylabel!r})
ax.grid(True, alpha=0.3)
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig({svg!r})
print("wrote", {svg!r})
'''


def emit_plot_script(csv_paths: list[str], kind: str, out: str) -> None:
    if kind not in _PLOT_AXES:
        raise ConfigError("kind", f"unknown plot kind {kind!r}")
    header, xlabel, ylabel = _PLOT_AXES[kind]
    import csv as _csv

    for p in csv_paths:
        with open(p, newline="") as f:
            rows = list(_csv.reader(f))
        if not rows or rows[0] != header:
            missing = header[0] if not rows or not rows[0] else \
                next((c for c in header if c not in rows[0]), header[0])
            raise SchemaError(f"{p}: expected columns {','.join(header)} "
                              f"(missing column {missing!r})")
        if len(rows) < 2:
            raise SchemaError(f"{p}: no data rows")
    svg = str(Path(out).with_suffix(".svg"))
    _atomic_write(out, _PLOT_TEMPLATE.format(csvs=list(csv_paths), xcol=header[0],
                                             ycol=header[1], xlabel=xlabel,
                                             ylabel=ylabel, svg=svg))


def cmd_plot_script(args) -> int:
    emit_plot_script(args.csv, args.kind, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="msechart",
                                description="MSE/EXIT transfer charts and I-MMSE "
                                            "area identities for iterative decoding")
    sub = p.add_subparsers(dest="command", required=True)

    def grid_flags(sp, lo=0.0, hi=100.0, n=200):
        sp.add_argument("--grid-min", type=float, default=lo)
        sp.add_argument("--grid-max", type=float, default=hi)
        sp.add_argument("--grid-points", type=int, default=n)
        sp.add_argument("--unit", choices=("linear", "db"), default="linear")

    sp = sub.add_parser("phi-table", help="tabulate phi(gamma) to CSV")
    grid_flags(sp)
    sp.add_argument("--prior", type=float, default=0.5)
    sp.add_argument("--out", required=True)
    sp.add_argument("--report", default=None)
    sp.set_defaults(func=cmd_phi_table)

    sp = sub.add_parser("curve", help="MMSE-vs-SNR curve of a code preset")
    sp.add_argument("--code", default=None, help=f"preset: {', '.join(sorted(PRESETS))}")
    sp.add_argument("--config", default=None, help="JSON code spec file")
    grid_flags(sp, hi=6.0, n=20)
    sp.add_argument("--samples", type=int, default=10**6)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.add_argument("--json", default=None, help="also write the curve + metadata as JSON")
    sp.add_argument("--report", default=None)
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("area", help="area under a code's MMSE curve")
    sp.add_argument("--code", default=None)
    sp.add_argument("--config", default=None)
    sp.add_argument("--role", choices=("inner", "outer"), default="outer")
    sp.add_argument("--axis", choices=("apriori", "extrinsic"), default="apriori")
    grid_flags(sp, hi=6.0, n=20)
    sp.add_argument("--samples", type=int, default=10**6)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None, help="JSON report path")
    sp.set_defaults(func=cmd_area)

    sp = sub.add_parser("threshold", help="decoding threshold of an LDPC profile")
    sp.add_argument("--profile", default=None)
    sp.add_argument("--config", default=None)
    sp.add_argument("--lo-db", type=float, default=-1.0)
    sp.add_argument("--hi-db", type=float, default=4.0)
    sp.add_argument("--tol-db", type=float, default=0.01)
    sp.add_argument("--max-iter", type=int, default=500)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("trajectory", help="chart recursion path at one Eb/N0")
    sp.add_argument("--profile", default=None)
    sp.add_argument("--config", default=None)
    sp.add_argument("--ebn0-db", type=float, required=True)
    sp.add_argument("--max-iter", type=int, default=500)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--out", default=None)
    sp.add_argument("--steps-csv", default=None)
    sp.set_defaults(func=cmd_trajectory)

    sp = sub.add_parser("verify", help="run the full invariant suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--fast", action="store_true")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("plot-script", help="emit a plotting script for a CSV")
    sp.add_argument("--csv", action="append", required=True)
    sp.add_argument("--kind", choices=tuple(_PLOT_AXES), required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_plot_script)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (ConfigError, SchemaError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except awgn.DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
