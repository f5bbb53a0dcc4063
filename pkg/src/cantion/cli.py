"""Command-line entry point: trajectory CSVs, parameter sweeps, validation.

Subcommands
-----------
``cantion simulate``  integrate one configuration (or a numbered preset) and
write the trajectory CSV plus a short summary.
``cantion sweep``     repeat a base configuration over a list of kappa or nu
values and write one summary row per value.
``cantion validate``  run the cross-module invariant suite.

Exit codes: 0 success, 1 validation failure, 2 bad configuration,
3 runtime breakdown (ansatz blow-up or truncation leakage).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import integrate
from .errors import CantionError, SimulationBreakdown
from .fock import build_initial_fock, evolve_fock, fock_occupations
from .model import ModelKind, SystemParams, initial_ansatz
from .presets import DEFAULT_DT_OUT, DEFAULT_T_MAX, PRESETS
from .validation import first_peak, run_validation

__all__ = ["RunConfig", "run_simulation", "run_sweep", "main"]

_CSV_HEADER = "t,na_rwa,nb_rwa,na_full,nb_full,norm_full"


@dataclass(frozen=True)
class RunConfig:
    """One simulation request as assembled from flags / config file / preset."""

    params: SystemParams
    n_a0: float = 6.0
    t_max: float = DEFAULT_T_MAX
    dt_out: float = DEFAULT_DT_OUT
    model: str = "both"  # rwa | full | both
    fock_check: bool = False
    n_max: int = 200
    output_path: str = "trajectory.csv"

    def __post_init__(self):
        if self.t_max <= 0:
            raise ValueError("t_max must be positive")
        if self.dt_out <= 0 or self.dt_out > self.t_max:
            raise ValueError("dt_out must satisfy 0 < dt_out <= t_max")
        if self.model not in ("rwa", "full", "both"):
            raise ValueError(f"model must be rwa, full or both, got {self.model!r}")
        if self.n_a0 < 0:
            raise ValueError("na0 must be non-negative")
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _time_grid(cfg: RunConfig) -> np.ndarray:
    n = int(np.floor(cfg.t_max / cfg.dt_out + 1e-9))
    return np.arange(n + 1) * cfg.dt_out


def run_simulation(cfg: RunConfig) -> dict:
    """Integrate per config, write the CSV, and return the summary dict.

    CSV contract: header ``t,na_rwa,nb_rwa,na_full,nb_full,norm_full``, one
    row per grid point, 9 significant digits, LF line endings, columns of an
    unselected model left empty.
    """
    grid = _time_grid(cfg)
    start = initial_ansatz(cfg.n_a0)
    trajectories = {}
    if cfg.model in ("rwa", "both"):
        trajectories["rwa"] = integrate(start, cfg.params, ModelKind.RWA, grid)
    if cfg.model in ("full", "both"):
        trajectories["full"] = integrate(start, cfg.params, ModelKind.FULL, grid)

    rows = [_CSV_HEADER]
    for i, t in enumerate(grid):
        r = trajectories.get("rwa")
        f = trajectories.get("full")
        cells = [
            _fmt(t),
            _fmt(r.n_a[i]) if r else "",
            _fmt(r.n_b[i]) if r else "",
            _fmt(f.n_a[i]) if f else "",
            _fmt(f.n_b[i]) if f else "",
            _fmt(f.norm[i]) if f else "",
        ]
        rows.append(",".join(cells))
    with open(cfg.output_path, "w", newline="\n") as fh:
        fh.write("\n".join(rows) + "\n")

    lead = trajectories.get("full") or trajectories.get("rwa")
    peak = first_peak(grid, lead.n_b)
    i_min = int(np.argmin(lead.n_a))
    summary = {
        "nb_peak_t": peak[0] if peak else None,
        "nb_peak": peak[1] if peak else None,
        "na_min_t": float(grid[i_min]),
        "na_min": float(lead.n_a[i_min]),
        "final_norm": float(lead.norm[-1]),
        "max_model_gap": None,
        "rows": len(grid),
        "output_path": cfg.output_path,
    }
    if len(trajectories) == 2:
        summary["max_model_gap"] = float(
            np.max(np.abs(trajectories["full"].n_a - trajectories["rwa"].n_a))
        )
    if cfg.fock_check:
        kind = ModelKind.FULL if "full" in trajectories else ModelKind.RWA
        stride = max(1, int(np.ceil(0.05 / cfg.dt_out)))
        subgrid = grid[::stride]
        snaps = evolve_fock(
            build_initial_fock(cfg.n_a0, cfg.n_max, tail_tol=1e-4),
            cfg.params,
            kind,
            subgrid,
            dt=1e-4,
        )
        traj = trajectories["full" if kind is ModelKind.FULL else "rwa"]
        gap = 0.0
        for j, (_, snap) in enumerate(snaps):
            rec = fock_occupations(snap)
            i = j * stride
            gap = max(gap, abs(rec.n_a - traj.n_a[i]), abs(rec.n_b - traj.n_b[i]))
        summary["fock_max_gap"] = gap
    return summary


def run_sweep(base: RunConfig, sweep_var: str, values: list[float]) -> list[dict]:
    """One summary row per sweep value; per-row errors recorded, sweep continues."""
    if sweep_var not in ("kappa", "nu"):
        raise ValueError("sweep variable must be kappa or nu")
    if not values:
        raise ValueError("sweep needs at least one value")
    grid_rows = []
    for value in values:
        row = {"value": value, "transfer_time": None, "transfer_fidelity": None,
               "rwa_full_gap": None, "error": ""}
        try:
            params = replace(base.params, **{sweep_var: value})
            cfg = replace(base, params=params, model="both")
            grid = _time_grid(cfg)
            start = initial_ansatz(cfg.n_a0)
            full = integrate(start, params, ModelKind.FULL, grid)
            swap = integrate(start, params, ModelKind.RWA, grid)
            peak = first_peak(grid, full.n_b)
            row["transfer_time"] = peak[0] if peak else None
            row["transfer_fidelity"] = float(np.max(full.n_b)) / cfg.n_a0 if cfg.n_a0 > 0 else 0.0
            row["rwa_full_gap"] = float(np.max(np.abs(full.n_a - swap.n_a)))
        except (CantionError, ValueError) as exc:
            row["error"] = type(exc).__name__
        grid_rows.append(row)

    lines = [f"{sweep_var},transfer_time,transfer_fidelity,rwa_full_gap,error"]
    for row in grid_rows:
        cells = [
            _fmt(row["value"]),
            _fmt(row["transfer_time"]) if row["transfer_time"] is not None else "",
            _fmt(row["transfer_fidelity"]) if row["transfer_fidelity"] is not None else "",
            _fmt(row["rwa_full_gap"]) if row["rwa_full_gap"] is not None else "",
            row["error"],
        ]
        lines.append(",".join(cells))
    with open(base.output_path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return grid_rows


# ----------------------------------------------------------------------------
# argument handling
# ----------------------------------------------------------------------------

_PARAM_KEYS = ("omega", "nu", "kappa", "gamma_a", "gamma_b")
_FLOAT_KEYS = _PARAM_KEYS + ("na0", "t_max", "dt_out")


def _read_config_file(path: str) -> dict:
    """Plain ``key=value`` lines; '#' starts a comment; keys may use '-' or '_'."""
    values: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, _, val = line.partition("=")
            key = key.strip().replace("-", "_")
            val = val.strip()
            if key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key == "n_max":
                values[key] = int(val)
            elif key == "model":
                values[key] = val
            elif key == "out":
                values[key] = val
            elif key == "fock_check":
                values[key] = val.lower() in ("1", "true", "yes", "on")
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    return values


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--figure", type=int, choices=sorted(PRESETS), help="start from a built-in preset")
    p.add_argument("--config", help="key=value config file (flags override it)")
    p.add_argument("--omega", type=float, help="cantilever angular frequency [rad/us]")
    p.add_argument("--nu", type=float, help="ion angular frequency [rad/us]")
    p.add_argument("--kappa", type=float, help="coupling constant [rad/us]")
    p.add_argument("--gamma-a", type=float, dest="gamma_a", help="cantilever decay [rad/us]")
    p.add_argument("--gamma-b", type=float, dest="gamma_b", help="ion decay [rad/us]")
    p.add_argument("--na0", type=float, help="initial mean cantilever occupation")
    p.add_argument("--t-max", type=float, dest="t_max", help="simulated span [us]")
    p.add_argument("--dt-out", type=float, dest="dt_out", help="output grid spacing [us]")
    p.add_argument("--model", choices=["rwa", "full", "both"], help="which model(s) to run")
    p.add_argument("--fock-check", action="store_true", default=None,
                   help="cross-check against the number-basis oracle (slow)")
    p.add_argument("--n-max", type=int, dest="n_max", help="number-basis cutoff for --fock-check")
    p.add_argument("--out", help="output CSV path")


def _build_config(args: argparse.Namespace) -> RunConfig:
    # precedence: explicit flag > config file > preset > built-in default
    merged: dict = {}
    if args.figure is not None:
        preset = PRESETS[args.figure]
        merged.update(
            omega=preset.params.omega, nu=preset.params.nu, kappa=preset.params.kappa,
            gamma_a=preset.params.gamma_a, gamma_b=preset.params.gamma_b, na0=preset.n_a0,
        )
    if args.config:
        merged.update(_read_config_file(args.config))
    for key in _FLOAT_KEYS + ("model", "n_max", "out"):
        val = getattr(args, key if key != "out" else "out", None)
        if val is not None:
            merged[key] = val
    if args.fock_check is not None:
        merged["fock_check"] = args.fock_check
    missing = [k for k in _PARAM_KEYS if k not in merged]
    if missing:
        raise ValueError(f"missing parameters (use --figure or flags): {', '.join(missing)}")
    params = SystemParams(**{k: merged[k] for k in _PARAM_KEYS})
    return RunConfig(
        params=params,
        n_a0=merged.get("na0", 6.0),
        t_max=merged.get("t_max", DEFAULT_T_MAX),
        dt_out=merged.get("dt_out", DEFAULT_DT_OUT),
        model=merged.get("model", "both"),
        fock_check=merged.get("fock_check", False),
        n_max=merged.get("n_max", 200),
        output_path=merged.get("out", "trajectory.csv"),
    )


def _print_summary(summary: dict) -> None:
    if summary["nb_peak"] is not None:
        print(f"first ion-occupation maximum: {_fmt(summary['nb_peak'])} at t = {_fmt(summary['nb_peak_t'])}")
    else:
        print("first ion-occupation maximum: none (no transfer)")
    print(f"first cantilever-occupation minimum: {_fmt(summary['na_min'])} at t = {_fmt(summary['na_min_t'])}")
    if summary["max_model_gap"] is not None:
        print(f"max swap-vs-full occupation gap: {_fmt(summary['max_model_gap'])}")
    if "fock_max_gap" in summary:
        print(f"max deviation from number-basis oracle: {_fmt(summary['fock_max_gap'])}")
    print(f"final norm: {_fmt(summary['final_norm'])}")
    print(f"wrote {summary['rows']} rows to {summary['output_path']}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="cantion", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="integrate one configuration, write CSV")
    _add_run_flags(p_sim)

    p_sweep = sub.add_parser("sweep", help="sweep kappa or nu, write one summary row per value")
    _add_run_flags(p_sweep)
    p_sweep.add_argument("--var", choices=["kappa", "nu"], required=True)
    p_sweep.add_argument("--values", required=True, help="comma-separated list, e.g. 1.8,4.0,5.0")

    p_val = sub.add_parser("validate", help="run the invariant and oracle-equivalence suite")
    p_val.add_argument("--tol-scale", type=float, default=1.0,
                       help="multiply every threshold (e.g. 0.5 tightens)")
    p_val.add_argument("--skip-fock", action="store_true",
                       help="skip the slow number-basis evolutions")

    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            cfg = _build_config(args)
            _print_summary(run_simulation(cfg))
            return 0
        if args.command == "sweep":
            cfg = _build_config(args)
            values = [float(v) for v in args.values.split(",") if v.strip()]
            rows = run_sweep(cfg, args.var, values)
            failures = [r for r in rows if r["error"]]
            print(f"wrote {len(rows)} sweep rows to {cfg.output_path}"
                  + (f" ({len(failures)} rows errored)" if failures else ""))
            return 0
        results = run_validation(tol_scale=args.tol_scale, include_fock=not args.skip_fock)
        return 0 if all(r.passed for r in results) else 1
    except SimulationBreakdown as exc:
        print(f"runtime breakdown: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, CantionError) as exc:
        print(f"bad configuration: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
