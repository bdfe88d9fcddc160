"""Command-line front-end: sweeps, comparisons, reports, plot-ready data.

Float CSV fields use repr() (the shortest round-trip decimal), so a given
config produces byte-identical files.  Every JSON artifact embeds the
resolved config under "config".  Exit codes: 0 success, 2 bad config or
usage, 3 numerical failure (partial artifacts are kept where possible).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, fields, replace
from pathlib import Path

import numpy as np

from .bcs import estimate_tstar, params_from_config
from .capacity import capacity, default_grid, sweep
from .expansion import expansion_coefficients, series_capacity, theorem_check
from .spectrum import SpectrumError, build_spectrum, dump_spectrum
from .statistics import SolverError, adaptive_spectrum, \
    reference_temperatures, solve_state
from .units_and_config import ConfigError, RunConfig, config_from_items, \
    read_config_file

_CONFIG_KEYS = [f.name for f in fields(RunConfig) if f.name != "trap"] \
    + ["trap", "d", "gamma", "omega"]


# --- artifact formatting -----------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    return obj


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(_clean(payload), indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _config_echo(config: RunConfig) -> dict:
    return _clean(asdict(config))


def _inflection_payload(inflection):
    return None if inflection is None else _clean(asdict(inflection))


# --- config assembly ---------------------------------------------------------

def _gather_config(args, forced: dict | None = None) -> RunConfig:
    items: dict = {}
    if args.config:
        items.update(read_config_file(args.config))
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            items[key] = value
    if forced:
        items.update(forced)
    return config_from_items(items)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# --- subcommand handlers -----------------------------------------------------

def _norm_column(table) -> str:
    return "T_over_" + table.normalizer[0].replace("_", "")


def _run_noninteracting_sweep(args, statistics: str) -> int:
    config = _gather_config(args, {"statistics": statistics})
    out = _out_dir(args)
    table = sweep(config)
    name = f"sweep-{statistics}"
    _write_csv(out / f"{name}.csv",
               ["T", _norm_column(table), "mu", "E", "C_bits"],
               zip(table.T, table.T_norm, table.mu, table.E, table.C_bits))
    payload = {
        "command": name,
        "config": _config_echo(config),
        "normalizer": {"name": table.normalizer[0], "value": table.normalizer[1]},
        "n_rows": len(table),
        "C_bits_min": float(table.C_bits.min()) if len(table) else None,
        "C_bits_max": float(table.C_bits.max()) if len(table) else None,
        "inflection": _inflection_payload(table.inflection),
    }
    _write_json(out / f"{name}.json", payload)
    print(f"{name}: {len(table)} rows, trap={config.trap.kind}, N={config.N:g}, "
          f"{table.normalizer[0]}={table.normalizer[1]:.6g}")
    if len(table):
        print(f"  C range [{table.C_bits.min():.6g}, {table.C_bits.max():.6g}] bits")
    if table.inflection is not None:
        inf_ = table.inflection
        print(f"  inflection T* = {inf_.T_star:.6g} "
              f"({table.normalizer[0]} units: {inf_.T_star / table.normalizer[1]:.6g}), "
              f"confidence {inf_.confidence:.3f}")
    else:
        print("  no inflection detected")
    print(f"  wrote {out / (name + '.csv')}, {out / (name + '.json')}")
    return 0


def _cmd_sweep_bose(args) -> int:
    return _run_noninteracting_sweep(args, "bose")


def _cmd_sweep_fermi(args) -> int:
    return _run_noninteracting_sweep(args, "fermi")


def _cmd_sweep_bcs(args) -> int:
    config = _gather_config(args, {"statistics": "bcs"})
    out = _out_dir(args)
    table = sweep(config)
    _write_csv(out / "sweep-bcs.csv",
               ["T", "T_over_Tf", "mu", "Delta", "E", "C_bits", "converged"],
               zip(table.T, table.T_norm, table.mu, table.delta, table.E,
                   table.C_bits, table.converged))
    try:
        tstar = estimate_tstar(params_from_config(config))
    except SolverError:
        tstar = None
    unconverged = int(np.sum(~table.converged)) if len(table) else 0
    payload = {
        "command": "sweep-bcs",
        "config": _config_echo(config),
        "normalizer": {"name": "T_f", "value": table.normalizer[1]},
        "n_rows": len(table),
        "delta_max": float(table.delta.max()) if len(table) else None,
        "below_resolution": table.below_resolution,
        "unconverged_rows": unconverged,
        "tstar_estimate": tstar,
        "residuals": list(table.residuals),
        "inflection": _inflection_payload(table.inflection),
    }
    _write_json(out / "sweep-bcs.json", payload)
    print(f"sweep-bcs: {len(table)} rows, N={config.N:g}, d_eps={config.d_eps:g}, "
          f"V0={config.V0:g}, T_f={table.normalizer[1]:.6g}")
    if len(table):
        print(f"  Delta(T_min) = {table.delta[0]:.6g}, max gap residual "
              f"{max(r['gap_residual'] for r in table.residuals):.3g}, max count "
              f"residual {max(r['count_residual'] for r in table.residuals):.3g}")
    if table.below_resolution:
        print("  gap is below numerical resolution on the whole grid "
              "(zero-temperature gap estimate is positive)")
    if tstar is not None:
        print(f"  gap-onset estimate T* = {tstar:.6g}")
    if table.inflection is not None:
        print(f"  inflection T* = {table.inflection.T_star:.6g}, "
              f"confidence {table.inflection.confidence:.3f}")
    else:
        print("  no inflection detected")
    print(f"  unconverged rows: {unconverged}")
    print(f"  wrote {out / 'sweep-bcs.csv'}, {out / 'sweep-bcs.json'}")
    return 3 if unconverged else 0


def _cmd_compare(args) -> int:
    config = _gather_config(args)
    out = _out_dir(args)
    t_c, t_f = reference_temperatures(config.trap, config.N, config.g)
    tau = np.exp(np.linspace(math.log(config.T_min_factor),
                             math.log(config.T_max_factor), config.n_T))
    cfg_bose = replace(config, statistics="bose", g=1,
                       T_grid=tuple(tau * t_c))
    cfg_fermi = replace(config, statistics="fermi", T_grid=tuple(tau * t_f))
    bose = sweep(cfg_bose)
    fermi = sweep(cfg_fermi)
    # fermionic capacities at the bosonic raw temperatures: matched-T margin
    fermi_at_bose_t = sweep(replace(cfg_fermi, T_grid=tuple(tau * t_c)))
    margin = fermi_at_bose_t.C_bits - bose.C_bits

    _write_csv(out / "compare.csv",
               ["tau", "T_bose", "C_bose_bits", "T_fermi", "C_fermi_bits",
                "C_fd_minus_C_be_at_T_bose"],
               zip(tau, bose.T, bose.C_bits, fermi.T, fermi.C_bits, margin))
    payload = {
        "command": "compare",
        "config": _config_echo(config),
        "T_c": t_c,
        "T_f": t_f,
        "theorem_margin_bits_min": float(margin.min()),
        "theorem_margin_argmin_T": float(bose.T[int(np.argmin(margin))]),
        "fermi_above_bose_everywhere": bool(np.all(margin > 0.0)),
        "bose_inflection": _inflection_payload(bose.inflection),
        "fermi_inflection": _inflection_payload(fermi.inflection),
    }
    _write_json(out / "compare.json", payload)
    print(f"compare: trap={config.trap.kind}, N={config.N:g}, "
          f"T_c={t_c:.6g}, T_f={t_f:.6g}")
    print(f"  matched-T margin C_fd - C_be: min {margin.min():.6g} bits "
          f"at T = {bose.T[int(np.argmin(margin))]:.6g} "
          f"(fermi above bose everywhere: {bool(np.all(margin > 0.0))})")
    print(f"  wrote {out / 'compare.csv'}, {out / 'compare.json'}")
    return 0


def _cmd_expansion_report(args) -> int:
    config = _gather_config(args)
    out = _out_dir(args)
    t_c, _ = reference_temperatures(config.trap, config.N, config.g)
    t_val = float(args.T) if args.T is not None else 3.0 * t_c
    beta = 1.0 / t_val
    report = expansion_coefficients(config.trap, beta, N=config.N)
    series = {s: series_capacity(report, config.N, s) for s in ("bose", "fermi")}

    direct = {}
    for stats in ("bose", "fermi"):
        g = 1 if stats == "bose" else config.g
        sp = adaptive_spectrum(config.trap, beta, config.N, stats, g)
        direct[stats] = capacity(solve_state(sp, beta, config.N, stats, g,
                                             config.tol_N))
    rel = {s: abs(series[s] - direct[s]) / direct[s] for s in direct}

    payload = {
        "command": "expansion-report",
        "config": _config_echo(config),
        "T": t_val,
        "beta": beta,
        "x": report.x,
        "S": list(report.S),
        "D": list(report.D),
        "closed_form": _clean(asdict(report.closed_form)),
        "series_consistent": _clean(asdict(report.series_consistent)),
        "alpha2_bose_dos_form": report.alpha2_bose_dos_form,
        "C_series_bits": series,
        "C_direct_bits": direct,
        "relative_error": rel,
    }
    _write_json(out / "expansion-report.json", payload)
    print(f"expansion-report: trap={config.trap.kind}, N={config.N:g}, "
          f"T={t_val:.6g}, x=N/S_1={report.x:.4g}")
    print(f"  alpha1={report.closed_form.alpha1:.6g}, "
          f"alpha2_bose={report.closed_form.alpha2_bose:.6g}, "
          f"beta1={report.closed_form.beta1:.6g}")
    for stats in ("bose", "fermi"):
        print(f"  {stats}: series {series[stats]:.6f} bits, direct "
              f"{direct[stats]:.6f} bits, rel err {rel[stats]:.3g}")
    print(f"  wrote {out / 'expansion-report.json'}")
    return 0


def _cmd_theorem_check(args) -> int:
    config = _gather_config(args)
    out = _out_dir(args)
    t_c, t_f = reference_temperatures(config.trap, config.N, config.g)
    if config.T_grid is not None:
        t_grid = np.asarray(config.T_grid, dtype=float)
    else:
        t_grid = np.exp(np.linspace(math.log(t_c),
                                    math.log(config.T_max_factor * t_f), 12))
    rows = theorem_check(config.trap, 1.0 / t_grid, config.N, config.g)
    _write_csv(out / "theorem-check.csv",
               ["beta", "T", "x", "alpha2_bose", "alpha2_fermi", "sign_ok",
                "series_margin_bits", "direct_margin_bits", "verdict"],
               [(r.beta, 1.0 / r.beta, r.x, r.alpha2_bose, r.alpha2_fermi,
                 r.sign_ok, r.series_margin_bits, r.direct_margin_bits,
                 r.verdict) for r in rows])
    verdicts = sorted({r.verdict for r in rows})
    payload = {
        "command": "theorem-check",
        "config": _config_echo(config),
        "n_rows": len(rows),
        "verdicts": verdicts,
        "all_sign_ok": bool(all(r.sign_ok for r in rows)),
        "series_margin_bits_min": min(r.series_margin_bits for r in rows),
        "rows": [_clean(asdict(r)) for r in rows],
    }
    _write_json(out / "theorem-check.json", payload)
    print(f"theorem-check: trap={config.trap.kind}, N={config.N:g}, "
          f"{len(rows)} rows")
    print(f"  verdicts: {', '.join(verdicts)}; "
          f"min series margin {min(r.series_margin_bits for r in rows):.6g} bits")
    print(f"  wrote {out / 'theorem-check.csv'}, {out / 'theorem-check.json'}")
    return 0


def _cmd_spectrum_dump(args) -> int:
    config = _gather_config(args)
    out = _out_dir(args)
    cutoff = float(args.cutoff) if args.cutoff is not None else config.cutoff_init
    spectrum = build_spectrum(config.trap, cutoff)
    rows = dump_spectrum(spectrum)
    _write_csv(out / "spectrum-dump.csv", ["index", "energy", "degeneracy"], rows)
    payload = {
        "command": "spectrum-dump",
        "config": _config_echo(config),
        "cutoff_energy": spectrum.cutoff_energy,
        "n_levels": int(spectrum.energies.size),
        "n_states": spectrum.n_states,
    }
    _write_json(out / "spectrum-dump.json", payload)
    print(f"spectrum-dump: trap={config.trap.kind}, cutoff {spectrum.cutoff_energy:g}, "
          f"{spectrum.energies.size} levels, {spectrum.n_states:g} states")
    head = ", ".join(f"({e:g} x{int(w)})" for e, w
                     in zip(spectrum.energies[:6], spectrum.degeneracies[:6]))
    print(f"  lowest levels: {head}")
    print(f"  wrote {out / 'spectrum-dump.csv'}, {out / 'spectrum-dump.json'}")
    return 0


# --- parser ------------------------------------------------------------------

_KEY_HELP = {
    "trap": "trap kind: box3d_pbc, box3d_hard, harmonic_iso, power_law",
    "d": "dimension for power_law traps",
    "gamma": "power_law exponent (use 'inf' for a box)",
    "omega": "harmonic level spacing in reduced units",
    "statistics": "bose, fermi or bcs (fixed by the sweep-* commands)",
    "N": "average particle number",
    "g": "fermionic spin degeneracy (bosons require g=1)",
    "T_grid": "comma-separated temperatures (overrides the default grid)",
    "T_min_factor": "default grid lower edge in units of T_c/T_f",
    "T_max_factor": "default grid upper edge in units of T_c/T_f",
    "n_T": "number of default grid points",
    "tail_tol": "spectrum cutoff tail tolerance",
    "cutoff_init": "initial spectrum cutoff energy",
    "cutoff_factor": "cutoff growth factor",
    "tol_N": "particle-count solve tolerance, relative to N",
    "d_eps": "BCS shell half-width",
    "V0": "BCS attraction strength",
    "spin_factor": "BCS count/entropy factor per mode (1 literal, 2 per spin)",
}


def _parent_parser() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", metavar="FILE",
                        help="key=value config file (flags override it)")
    parent.add_argument("--out", metavar="DIR", default=".",
                        help="output directory (created if absent)")
    for key in _CONFIG_KEYS:
        parent.add_argument(f"--{key.replace('_', '-')}", dest=key,
                            metavar="V", help=_KEY_HELP[key])
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trapgas",
        description="Capacity of noiseless channels carrying trapped quantum "
                    "gases: sweeps, high-temperature expansion, BCS gap.")
    sub = parser.add_subparsers(dest="command", required=True)
    parent = _parent_parser()

    sp = sub.add_parser("sweep-bose", parents=[parent],
                        help="boson capacity vs T (CSV+JSON, inflection)")
    sp.set_defaults(handler=_cmd_sweep_bose)
    sp = sub.add_parser("sweep-fermi", parents=[parent],
                        help="fermion capacity vs T (CSV+JSON, inflection)")
    sp.set_defaults(handler=_cmd_sweep_fermi)
    sp = sub.add_parser("sweep-bcs", parents=[parent],
                        help="BCS capacity and gap vs T (CSV+JSON, residuals)")
    sp.set_defaults(handler=_cmd_sweep_bcs)
    sp = sub.add_parser("compare", parents=[parent],
                        help="bose vs fermi curves on a shared tau grid")
    sp.set_defaults(handler=_cmd_compare)
    sp = sub.add_parser("expansion-report", parents=[parent],
                        help="high-temperature expansion report at one T")
    sp.add_argument("--T", metavar="V", help="expansion temperature "
                    "(default 3 T_c)")
    sp.set_defaults(handler=_cmd_expansion_report)
    sp = sub.add_parser("theorem-check", parents=[parent],
                        help="fermion-vs-boson verdict table over a T grid")
    sp.set_defaults(handler=_cmd_theorem_check)
    sp = sub.add_parser("spectrum-dump", parents=[parent],
                        help="level list (index, energy, degeneracy)")
    sp.add_argument("--cutoff", metavar="V", help="cutoff energy "
                    "(default: cutoff_init)")
    sp.set_defaults(handler=_cmd_spectrum_dump)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        for violation in exc.violations:
            print(f"config error: {violation}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, SpectrumError, OSError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
