"""Command-line entry point: solve one scenario, run sweeps, fit accuracy curves.

All emitted numbers use 17 significant digits so identical inputs produce
byte-identical outputs (the runtime_ms CSV column is the one wall-clock
dependent field).
"""

import argparse
import csv
import sys

from .accuracy import fit_accuracy_model
from .errors import (InsufficientSamples, InvalidConfig, InvalidSweep, SemnetError,
                     WriteFailed)
from .harness import (PRESET_NAMES, SweepConfig, emit_csv, preset_sweep,
                      resolve_workers, run_point, run_sweep, solve_all_pairs)
from .scenario import ScenarioConfig, generate_scenario

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


def _fmt(x):
    return format(float(x), ".17g")


def _to_json(obj, indent=0):
    # Hand-rolled so floats are always serialized with 17 significant digits.
    pad = " " * indent
    if isinstance(obj, dict):
        items = ",\n".join(
            f'{pad}  "{k}": {_to_json(v, indent + 2).lstrip()}' for k, v in obj.items())
        return f"{pad}{{\n{items}\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return f"{pad}[]"
        items = ",\n".join(_to_json(v, indent + 2) for v in obj)
        return f"{pad}[\n{items}\n{pad}]"
    if isinstance(obj, bool):
        return pad + ("true" if obj else "false")
    if obj is None:
        return pad + "null"
    if isinstance(obj, float):
        return pad + _fmt(obj)
    if isinstance(obj, int):
        return pad + str(obj)
    return pad + '"' + str(obj) + '"'


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise WriteFailed(f"cannot write {path}: {exc}") from exc


def _cmd_solve(args):
    cfg = ScenarioConfig.from_file(args.scenario)
    scenario = generate_scenario(cfg, args.seed)
    total, assignment = run_point(scenario, args.solver)
    solutions = solve_all_pairs(scenario, args.solver)
    pairs_out = []
    for (m, n), sol in sorted(solutions.items()):
        entry = {"device": m, "station": n}
        if sol is None:
            entry["feasible"] = False
        else:
            entry.update({
                "feasible": True,
                "gamma": sol.gamma,
                "xi": sol.xi,
                "k_up": sorted(sol.partition.k_up),
                "k_cu": sorted(sol.partition.k_cu),
                "k_bit": sorted(sol.partition.k_bit),
                "t_total": sol.breakdown.t_total,
            })
        pairs_out.append(entry)
    doc = {
        "solver": args.solver,
        "seed": args.seed,
        "total_rate": total,
        "n_associated": len(assignment.pairs),
        "assignment": [{"device": m, "station": n} for m, n in assignment.pairs],
        "pairs": pairs_out,
    }
    text = _to_json(doc) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_sweep(args):
    if args.preset:
        cfg = preset_sweep(args.preset, trials=args.trials, master_seed=args.seed)
    else:
        scenario_cfg = ScenarioConfig.from_file(args.config)
        if not args.param or not args.values:
            raise InvalidSweep("--config sweeps need --param and --values")
        values = tuple(float(v) for v in args.values.split(","))
        cfg = SweepConfig(scenario=scenario_cfg, param=args.param, values=values,
                          solvers=tuple(args.solvers.split(",")),
                          trials=100 if args.trials is None else args.trials,
                          master_seed=args.seed)
    result = run_sweep(cfg, n_workers=resolve_workers())
    emit_csv(result, args.out)
    return EXIT_OK


def _cmd_fit(args):
    try:
        with open(args.samples, "r", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header[:2]] != ["xi", "eps"]:
                raise InvalidConfig(
                    f"{args.samples}: expected header 'xi,eps', got {header}")
            samples = [(float(row[0]), float(row[1])) for row in reader if row]
    except OSError as exc:
        raise WriteFailed(f"cannot read {args.samples}: {exc}") from exc
    except ValueError as exc:
        raise InvalidConfig(f"{args.samples}: malformed sample row: {exc}") from exc
    fit = fit_accuracy_model(samples)
    text = _to_json({"theta": list(fit.theta), "mse": fit.mse}) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="semnet",
        description="Hybrid semantic/bit network solver and experiment driver")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one generated scenario")
    p_solve.add_argument("--scenario", required=True, help="scenario config JSON")
    p_solve.add_argument("--solver", required=True,
                         choices=("optimum", "efficient", "no_sharing"))
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--out", help="write the JSON report here instead of stdout")

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep, write CSV")
    group = p_sweep.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", help=f"one of: {', '.join(PRESET_NAMES)}")
    group.add_argument("--config", help="scenario config JSON for a custom sweep")
    p_sweep.add_argument("--param", help="swept parameter for --config sweeps")
    p_sweep.add_argument("--values", help="comma-separated values for --config sweeps")
    p_sweep.add_argument("--solvers", default="efficient,no_sharing",
                         help="comma-separated solver tags for --config sweeps")
    p_sweep.add_argument("--trials", type=int, default=None)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--out", required=True, help="output CSV path")

    p_fit = sub.add_parser("fit", help="fit the accuracy curve to xi,eps samples")
    p_fit.add_argument("--samples", required=True, help="two-column CSV (xi,eps)")
    p_fit.add_argument("--out", help="write the JSON result here instead of stdout")

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"solve": _cmd_solve, "sweep": _cmd_sweep, "fit": _cmd_fit}
    try:
        return handlers[args.command](args)
    except (InvalidConfig, InvalidSweep, InsufficientSamples) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except WriteFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SemnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
