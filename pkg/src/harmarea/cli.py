"""Command-line verification harness.

Subcommands: area, verify, sweep, search, oracle.  Exit codes:
  0  success (all checked inequalities pass)
  1  a checked inequality or oracle-agreement test failed
  2  input could not be parsed or violates a precondition
  3  quadrature refinement hit its caps without converging
  4  an evaluation budget would be exceeded
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .distortion import (
    default_tolerance,
    image_area,
    report,
    verification_suite,
)
from .errors import (
    BudgetError,
    ConstructionError,
    DomainError,
    HypothesisError,
    NonConvergenceError,
)
from .presets import preset_map, preset_names
from .quadrature import DEFAULT_TOL, mc_image_area
from .regions import Disk, region_measure
from .search import FamilySpec, maximize_area_ratio, maximize_sp_ratio, sweep
from .serialize import (
    ParseError,
    family_from_json,
    fmt,
    map_from_json,
    region_from_json,
    report_to_dict,
    reports_to_csv,
    reports_to_json,
    search_result_to_csv,
    sweep_to_csv,
)


@dataclass(frozen=True)
class RunConfig:
    """Run-wide knobs shared by all subcommands."""

    tol: float = DEFAULT_TOL
    n: int | None = None
    seed: int = 42
    out: Path = Path(".")
    format: str = "csv"
    workers: int = 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmarea",
        description=(
            "Measure area distortion of planar harmonic maps: image areas, "
            "inequality margins, and extremal parameter searches."
        ),
        epilog="Exit codes:" + __doc__.split("Exit codes:")[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "area": "image area of a region under a map, plus the area ratio",
        "verify": "run the full inequality suite for one map",
        "sweep": "tabulate area ratios over a parameter lattice",
        "search": "maximize area ratio (--family) or Schwarz-Pick ratio (--map)",
        "oracle": "cross-check the Jacobian integral against rasterization",
    }
    for name, help_text in specs.items():
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--map", type=Path, help="map definition JSON file")
        cmd.add_argument("--region", type=Path, help="region definition JSON file")
        cmd.add_argument("--family", type=Path, help="family definition JSON file")
        cmd.add_argument(
            "--r", type=float, help="radius shorthand for a disk region (default 0.5)"
        )
        cmd.add_argument("--tol", type=float, default=DEFAULT_TOL)
        cmd.add_argument(
            "--n",
            type=int,
            help=(
                "resolution knob: raster size (area/oracle), lattice points per "
                "axis (sweep), refinement iterations (search)"
            ),
        )
        cmd.add_argument("--seed", type=int, default=42)
        cmd.add_argument("--out", type=Path, default=Path("."))
        cmd.add_argument("--format", choices=("json", "csv", "both"), default="csv")
        cmd.add_argument(
            "--preset",
            choices=preset_names(),
            help="built-in map name (alternative to --map)",
        )
        cmd.add_argument("--workers", type=int, default=1)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    if args.tol < 1e-12:
        raise ParseError("--tol must be at least 1e-12")
    if args.workers < 1:
        raise ParseError("--workers must be >= 1")
    return RunConfig(
        tol=args.tol,
        n=args.n,
        seed=args.seed,
        out=args.out,
        format=args.format,
        workers=args.workers,
    )


def _read_json(path: Path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as exc:
        raise ParseError(f"file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc


def _load_map(args: argparse.Namespace):
    if args.preset and args.map:
        raise ParseError("give either --map or --preset, not both")
    if args.preset:
        return preset_map(args.preset)
    if args.map:
        return map_from_json(_read_json(args.map))
    raise ParseError("a map is required: pass --map FILE or --preset NAME")


def _load_region(args: argparse.Namespace):
    if args.region:
        return region_from_json(_read_json(args.region))
    r = args.r if args.r is not None else 0.5
    try:
        return Disk(r)
    except ConstructionError as exc:
        raise ParseError(str(exc)) from exc


def _load_family(args: argparse.Namespace) -> FamilySpec:
    if not args.family:
        raise ParseError("a family is required: pass --family FILE")
    return family_from_json(_read_json(args.family))


def _emit(config: RunConfig, stem: str, csv_text: str | None, json_text: str | None):
    config.out.mkdir(parents=True, exist_ok=True)
    if csv_text is not None and config.format in ("csv", "both"):
        (config.out / f"{stem}.csv").write_text(csv_text, encoding="utf-8")
    if json_text is not None and config.format in ("json", "both"):
        (config.out / f"{stem}.json").write_text(json_text, encoding="utf-8")


def cmd_area(args: argparse.Namespace, config: RunConfig) -> int:
    f = _load_map(args)
    region = _load_region(args)
    measure = region_measure(region)
    result = image_area(f, region, config.tol, workers=config.workers)
    ratio = result.value / measure
    print(f"m(E) = {fmt(measure)}")
    print(f"m(f(E)) = {fmt(result.value)}")
    print(f"ratio = {fmt(ratio)}")
    print(f"quadrature_error = {fmt(result.error_estimate)}")
    print(f"evals = {result.evals}")
    row = report(
        "area-ratio",
        result.value,
        measure,
        default_tolerance(config.tol, result.error_estimate),
        f"ratio={fmt(ratio)}",
        evals=result.evals,
    )
    payload = {
        "command": "area",
        "m_E": measure,
        "m_f_E": result.value,
        "ratio": ratio,
        "error_estimate": result.error_estimate,
        "evals": result.evals,
        "report": report_to_dict(row),
    }
    _emit(
        config,
        "area",
        reports_to_csv([row]),
        json.dumps(payload, indent=2, sort_keys=True),
    )
    return 0


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    f = _load_map(args)
    rows = verification_suite(f, config.tol, workers=config.workers)
    failed = 0
    for row in rows:
        if not row.checked:
            status = "info"
        elif row.passed:
            status = "pass"
        else:
            status = "FAIL"
            failed += 1
        print(
            f"{row.name}: lhs={fmt(row.lhs)} rhs={fmt(row.rhs)} "
            f"margin={fmt(row.margin)} [{status}]"
        )
    _emit(config, "verify", reports_to_csv(rows), reports_to_json(rows))
    print(f"checked rows failing: {failed}")
    return 1 if failed else 0


def cmd_sweep(args: argparse.Namespace, config: RunConfig) -> int:
    family = _load_family(args)
    region = _load_region(args)
    grid = config.n if config.n is not None else 33
    rows = sweep(family, region, grid)
    best = rows[0]
    names = family.param_names
    best_params = " ".join(
        f"{name}={fmt(value)}" for name, value in zip(names, best.params)
    )
    feasible = "true" if best.feasible else "false"
    print(f"best: {best_params} ratio={fmt(best.ratio)} feasible={feasible}")
    _emit(config, "sweep", sweep_to_csv(rows, names), None)
    return 0


def cmd_search(args: argparse.Namespace, config: RunConfig) -> int:
    region = _load_region(args)
    iterations = config.n if config.n is not None else 200
    if args.family and (args.map or args.preset):
        raise ParseError("search takes --family or a map (--map/--preset), not both")
    if args.family:
        family = _load_family(args)
        result = maximize_area_ratio(
            family, region, iterations, config.seed, tol=config.tol
        )
        names = family.param_names
        objective = "area-ratio"
    else:
        f = _load_map(args)
        result = maximize_sp_ratio(f, region, iterations, config.seed)
        names = ("x", "y")
        objective = "sp-ratio"
    best_params = " ".join(
        f"{name}={fmt(value)}" for name, value in zip(names, result.best_params)
    )
    print(f"objective = {objective}")
    print(f"best: {best_params} value={fmt(result.best_value)}")
    print(f"evaluations = {result.evaluations}")
    if objective == "sp-ratio":
        exceeds = result.best_value > 1.0 + 10.0 * config.tol
        print(f"exceeds_one = {'true' if exceeds else 'false'}")
    _emit(config, "search", search_result_to_csv(result, names), None)
    return 0


def cmd_oracle(args: argparse.Namespace, config: RunConfig) -> int:
    f = _load_map(args)
    region = _load_region(args)
    n = config.n if config.n is not None else 1024
    raster = mc_image_area(f, region, n, config.seed)
    integral = image_area(f, region, config.tol, workers=config.workers)
    gap = abs(raster.value - integral.value)
    rel_gap = gap / abs(integral.value) if integral.value else math.inf
    threshold = max(
        0.02 * abs(integral.value),
        5.0 * (raster.error_estimate + integral.error_estimate),
    )
    print(f"raster_area = {fmt(raster.value)}")
    print(f"jacobian_integral = {fmt(integral.value)}")
    print(f"relative_gap = {fmt(rel_gap)}")
    print(f"threshold = {fmt(threshold)}")
    rows = [
        report(
            "oracle-le",
            raster.value,
            integral.value,
            threshold,
            f"rel_gap={fmt(rel_gap)}",
            evals=raster.evals + integral.evals,
        ),
        report(
            "oracle-ge",
            integral.value,
            raster.value,
            threshold,
            f"rel_gap={fmt(rel_gap)}",
            evals=raster.evals + integral.evals,
        ),
    ]
    _emit(config, "oracle", reports_to_csv(rows), reports_to_json(rows))
    return 0 if gap <= threshold else 1


_COMMANDS = {
    "area": cmd_area,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "search": cmd_search,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config(args)
        return _COMMANDS[args.command](args, config)
    except NonConvergenceError as exc:
        print(f"quadrature did not converge: {exc}", file=sys.stderr)
        return 3
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 4
    # BudgetError subclasses ValueError, so this catch-all must come last
    except (ParseError, ConstructionError, HypothesisError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
