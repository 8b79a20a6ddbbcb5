"""Command-line front end: sweeps, figure-data export, verification.

Subcommands::

    unruh-coherence run <config.yaml> [--out DIR] [--threads K]
    unruh-coherence verify <config.yaml> [--out DIR] [--threads K]
    unruh-coherence figure <id> [--out DIR]
    unruh-coherence limits --family {ghz,w} --N <int> --n <int>

Exit codes: 0 all verification checks pass, 1 verification failure,
2 parse/validation error, 3 resource-budget error.

Output files are deterministic: rows are sorted before writing and floats
are formatted to 12 significant digits. The default output directory is
``$UNRUH_COHERENCE_OUT`` (falling back to the working directory).
"""

import argparse
import csv
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .analysis import (check_w_distribution, closed_total, monotonicity_sweep,
                       pair_closed_coherence, subsystem_coherence_map)
from .coherence import (SeriesTolerance, closed_ghz_coherence,
                        closed_w_coherence, freezing_limit, l1_coherence,
                        series_f)
from .config import RunConfig, SweepAxis, load_run_config
from .errors import ConfigurationError, ResourceBudgetError, UnruhCoherenceError
from .rindler import AccelerationParameter
from .states import Family, Observer, ScenarioConfig, scenario_density

#: verification thresholds (also echoed into the summary JSON)
THRESHOLDS = {
    "ghz_globality": 1e-12,
    "w_distribution_closed": 1e-9,
    "w_distribution_brute": 1e-6,
    "monotonicity": 0.0,
}

#: grid used for the monotonicity check when the config has no sweep axes
DEFAULT_MONOTONE_GRID = tuple(0.25 * k for k in range(13))

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4a", "fig4b", "fig4c", "fig4d")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _jsonable(x):
    if isinstance(x, float):
        return float(f"{x:.12g}")
    return x


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _write_json(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = [{key: _jsonable(x) for key, x in zip(header, row)} for row in rows]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _apply_point(cfg: ScenarioConfig, overrides: Dict[str, float]) -> ScenarioConfig:
    observers = tuple(
        replace(o, s=AccelerationParameter(overrides[o.name]))
        if o.name in overrides else o
        for o in cfg.observers)
    return replace(cfg, observers=observers)


def _grid_points(axes: Sequence[SweepAxis]) -> List[Dict[str, float]]:
    if not axes:
        return [{}]
    grids = [axis.grid() for axis in axes]
    return [dict(zip((a.observer for a in axes), combo))
            for combo in itertools.product(*grids)]


def _region_observer_names(cfg: ScenarioConfig) -> Dict[str, str]:
    """region-I mode name -> observer name."""
    return dict(zip(cfg.region_i_names(), (o.name for o in cfg.observers)))


def _closed_subsystem_value(cfg: ScenarioConfig, observer_names: Tuple[str, ...],
                            tol: SeriesTolerance) -> float:
    """Closed-form coherence of a subsystem (sizes 1, 2, or all N)."""
    if len(observer_names) == cfg.N:
        return closed_total(cfg, tol).value
    if cfg.family is Family.GHZ or len(observer_names) == 1:
        return 0.0
    return pair_closed_coherence(cfg, *observer_names, tol=tol).value


def _eval_point(task) -> dict:
    """Evaluate one sweep point; runs in a worker process when threads > 1."""
    (cfg, tol, overrides, include_brute, max_dimension,
     want_subsystems, want_identities) = task
    point_cfg = _apply_point(cfg, overrides)
    closed = closed_total(point_cfg, tol)

    rho = None
    if include_brute or want_identities:
        try:
            rho = scenario_density(point_cfg, max_dimension=max_dimension)
        except ResourceBudgetError:
            rho = None
    brute = l1_coherence(rho) if rho is not None and include_brute else None

    result = {
        "overrides": overrides,
        "closed": (closed.value, closed.error_budget),
        "brute": (brute.value, brute.error_budget) if brute is not None else None,
    }

    if want_subsystems:
        sub_rows = []
        to_observer = _region_observer_names(point_cfg)
        brute_map = {}
        if rho is not None and include_brute and len(rho.modes) > 1:
            brute_map = subsystem_coherence_map(rho, 2)
        region_names = point_cfg.region_i_names()
        subsets = [tuple(sorted(region_names))]
        for size in (1, 2):
            if size < len(region_names):
                subsets.extend(itertools.combinations(sorted(region_names), size))
        for subset in sorted(subsets, key=lambda t: (len(t), t)):
            observers = tuple(to_observer[nm] for nm in subset)
            closed_val = _closed_subsystem_value(point_cfg, observers, tol)
            brute_cv = brute_map.get(subset)
            if len(subset) == len(region_names) and brute is not None:
                brute_cv = brute
            sub_rows.append(("+".join(subset), closed_val,
                             brute_cv.value if brute_cv is not None else None))
        result["subsystems"] = sub_rows

    if want_identities:
        id_rows = []
        if point_cfg.family is Family.GHZ:
            if rho is not None:
                sub = subsystem_coherence_map(rho, min(2, len(rho.modes) - 1))
                residual = max(cv.value for cv in sub.values())
                thr = THRESHOLDS["ghz_globality"]
                id_rows.append(("ghz_globality", residual, thr, residual <= thr))
        else:
            dist = check_w_distribution(point_cfg, tol,
                                        max_dimension=max_dimension, rho=rho)
            thr = THRESHOLDS["w_distribution_closed"]
            id_rows.append(("w_distribution_closed", dist.closed_form, thr,
                            dist.closed_form <= thr))
            if dist.brute_force is not None:
                thr = THRESHOLDS["w_distribution_brute"]
                id_rows.append(("w_distribution_brute", dist.brute_force, thr,
                                dist.brute_force <= thr))
        result["identities"] = id_rows
    return result


def _eval_grid(rc: RunConfig, want_subsystems: bool, want_identities: bool,
               threads: int) -> List[dict]:
    points = _grid_points(rc.axes)
    tasks = [(rc.scenario, rc.series_tol, overrides, rc.include_brute,
              rc.max_dimension, want_subsystems, want_identities)
             for overrides in points]
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_eval_point, tasks))
    return [_eval_point(t) for t in tasks]


def _axis_columns(rc: RunConfig) -> List[str]:
    return [axis.observer for axis in rc.axes]


def _table_rows(rc: RunConfig, kind: str, evals: List[dict],
                tol: SeriesTolerance):
    axis_cols = _axis_columns(rc)

    if kind == "total":
        header = axis_cols + ["C_closed", "C_brute", "err_budget"]
        rows = []
        for ev in evals:
            closed_val, closed_budget = ev["closed"]
            if ev["brute"] is not None:
                brute_val, brute_budget = ev["brute"]
                budget = closed_budget + brute_budget
            else:
                brute_val, budget = None, closed_budget
            rows.append([ev["overrides"][c] for c in axis_cols]
                        + [closed_val, brute_val, budget])
        return header, rows

    if kind == "subsystems":
        header = axis_cols + ["subset", "C_closed", "C_brute"]
        rows = []
        for ev in evals:
            for label, closed_val, brute_val in ev["subsystems"]:
                rows.append([ev["overrides"][c] for c in axis_cols]
                            + [label, closed_val, brute_val])
        return header, rows

    if kind == "identities":
        header = axis_cols + ["check", "residual", "threshold", "pass"]
        rows = []
        for ev in evals:
            for name, residual, thr, ok in ev["identities"]:
                rows.append([ev["overrides"][c] for c in axis_cols]
                            + [name, residual, thr, ok])
        return header, rows

    if kind == "limits":
        header = ["family", "N", "n", "freezing_limit", "closed_at_s6", "abs_diff"]
        rows = []
        cfg = rc.scenario
        for n in range(cfg.N + 1):
            limit = freezing_limit(cfg.family, cfg.N, n)
            params = [AccelerationParameter(6.0)] * n
            if cfg.family is Family.GHZ:
                at6 = closed_ghz_coherence(params, tol).value
            else:
                at6 = closed_w_coherence(cfg.N, params, tol).value
            rows.append([cfg.family.value, cfg.N, n, limit, at6, abs(at6 - limit)])
        return header, rows

    raise ValueError(f"unknown table kind: {kind!r}")


def _verification_checks(rc: RunConfig) -> List[dict]:
    """Globality/distribution at the base point plus closed-form monotonicity."""
    checks = []
    base = _eval_point((rc.scenario, rc.series_tol, {}, False,
                        rc.max_dimension, False, True))
    for name, residual, thr, ok in base["identities"]:
        checks.append({"name": name, "residual": _jsonable(residual),
                       "threshold": thr, "pass": bool(ok)})

    if rc.scenario.n_accelerated > 0:
        grid = rc.axes[0].grid() if rc.axes else DEFAULT_MONOTONE_GRID
        if len(grid) > 1:
            table = monotonicity_sweep(rc.scenario, grid, rc.series_tol)
            deltas = [b - a for a, b in zip(table.values, table.values[1:])]
            checks.append({
                "name": "monotonicity",
                "residual": _jsonable(max(deltas)),
                "threshold": THRESHOLDS["monotonicity"],
                "pass": bool(table.strictly_decreasing),
            })
    return checks


def _out_dir(arg: Optional[str]) -> Path:
    if arg:
        return Path(arg)
    return Path(os.environ.get("UNRUH_COHERENCE_OUT", "."))


def _cmd_run(args, tables: bool = True) -> int:
    rc = load_run_config(args.config)
    out_dir = _out_dir(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    table_paths = []
    if tables and rc.outputs:
        kinds = {spec.table for spec in rc.outputs}
        evals = _eval_grid(rc, "subsystems" in kinds, "identities" in kinds,
                           args.threads)
        for spec in rc.outputs:
            header, rows = _table_rows(rc, spec.table, evals, rc.series_tol)
            path = out_dir / spec.path
            if spec.format == "csv":
                _write_csv(path, header, rows)
            else:
                _write_json(path, header, rows)
            table_paths.append(str(path))

    checks = _verification_checks(rc)
    summary = {
        "config_hash": rc.config_hash,
        "checks": checks,
        "tables": table_paths,
    }
    summary_path = out_dir / "summary.json"
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")

    all_pass = all(c["pass"] for c in checks)
    for c in checks:
        status = "PASS" if c["pass"] else "FAIL"
        print(f"{status} {c['name']}: residual={_fmt(c['residual'])} "
              f"threshold={_fmt(c['threshold'])}")
    print(f"summary: {summary_path}")
    return 0 if all_pass else 1


def _cmd_verify(args) -> int:
    return _cmd_run(args, tables=False)


def _figure_rows(figure_id: str):
    """Grid data behind the named figure, with the parameter choices pinned."""
    grid_3 = [round(0.1 * k, 12) for k in range(31)]
    grid_6 = [round(0.1 * k, 12) for k in range(61)]

    if figure_id in ("fig1", "fig2"):
        family = Family.GHZ if figure_id == "fig1" else Family.W
        header = ["w", "r", "C_closed"]
        rows = []
        for w in grid_3:
            for r in grid_3:
                cfg = _tripartite(family, w, r)
                rows.append([w, r, closed_total(cfg).value])
        return header, rows

    if figure_id == "fig3":
        header = ["panel", "w", "r", "C_total", "C_A_B", "C_A_C", "C_B_C",
                  "identity_residual"]
        rows = []
        for panel, (r, w) in zip("abcd", [(0, 0), (10, 10), (1, 10), (5, 0.5)]):
            cfg = _tripartite(Family.W, w, r)
            total = closed_total(cfg).value
            ab = pair_closed_coherence(cfg, "A", "B").value
            ac = pair_closed_coherence(cfg, "A", "C").value
            bc = pair_closed_coherence(cfg, "B", "C").value
            rows.append([panel, float(w), float(r), total, ab, ac, bc,
                         abs(ab + ac + bc - total)])
        return header, rows

    if figure_id == "fig4a":
        header = ["r", "n", "C_closed"]
        rows = [[r, n, series_f(AccelerationParameter(r)) ** n]
                for n in (1, 2, 3) for r in grid_6]
        return header, rows

    if figure_id in ("fig4b", "fig4c"):
        header = ["r", "N", "C_closed"]
        rows = []
        for N in (3, 5, 10, 40):
            for r in grid_6:
                n = 1 if figure_id == "fig4b" else N - 1
                cfg = _equal_s_scenario(Family.W, N, n, r)
                rows.append([r, N, closed_total(cfg).value])
        return header, rows

    if figure_id == "fig4d":
        header = ["r", "n", "C_closed"]
        rows = []
        for n in (1, 10, 20, 39):
            for r in grid_6:
                cfg = _equal_s_scenario(Family.W, 40, n, r)
                rows.append([r, n, closed_total(cfg).value])
        return header, rows

    raise ConfigurationError(f"unknown figure id: {figure_id!r}")


def _tripartite(family: Family, w: float, r: float) -> ScenarioConfig:
    observers = (Observer("A"),
                 Observer("B", AccelerationParameter(float(w))),
                 Observer("C", AccelerationParameter(float(r))))
    return ScenarioConfig(family, 3, observers)


def _equal_s_scenario(family: Family, N: int, n: int, s: float) -> ScenarioConfig:
    observers = tuple(
        Observer(f"o{i + 1}", AccelerationParameter(float(s)) if i < n else None)
        for i in range(N))
    return ScenarioConfig(family, N, observers)


def _cmd_figure(args) -> int:
    out_dir = _out_dir(args.out)
    header, rows = _figure_rows(args.id)
    path = out_dir / f"{args.id}.csv"
    _write_csv(path, header, rows)
    print(f"wrote {path}")
    return 0


def _cmd_limits(args) -> int:
    family = Family(args.family)
    try:
        value = freezing_limit(family, args.N, args.n)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(_fmt(value))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unruh-coherence",
        description="Coherence of multipartite bosonic GHZ/W states under "
                    "uniform acceleration: sweeps, figure data, verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="evaluate a config: tables + checks")
    p_run.add_argument("config")
    p_run.add_argument("--out", help="output directory (default: $UNRUH_COHERENCE_OUT or .)")
    p_run.add_argument("--threads", type=int, default=1,
                       help="worker processes for sweep evaluation")

    p_verify = sub.add_parser("verify", help="verification checks only, no tables")
    p_verify.add_argument("config")
    p_verify.add_argument("--out", help="output directory for summary.json")
    p_verify.add_argument("--threads", type=int, default=1)

    p_fig = sub.add_parser("figure", help="emit the grid data behind one figure")
    p_fig.add_argument("id", choices=FIGURE_IDS)
    p_fig.add_argument("--out", help="output directory")

    p_lim = sub.add_parser("limits", help="print an infinite-acceleration limit")
    p_lim.add_argument("--family", choices=("ghz", "w"), required=True)
    p_lim.add_argument("--N", type=int, required=True)
    p_lim.add_argument("--n", type=int, required=True)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "verify": _cmd_verify,
               "figure": _cmd_figure, "limits": _cmd_limits}[args.command]
    try:
        return handler(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except UnruhCoherenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
