"""Command-line front end: emits figure data as CSV/JSON and runs the self-checks.

Exit codes: 0 success, 1 validation failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .effective import QbhParams
from .hubbard import HubbardParams, build_hubbard_hamiltonian, compare_spectra, map_to_effective
from .numerics import eigh
from .phase import (SweepSpec, entanglement_sweep, ground_state_report, grid, spectrum_sweep,
                    sweep)
from .validation import run_validation

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SIGMA_LABEL = {-1: "m1", 0: "0", 1: "p1"}
AMP_COLUMNS = [f"amp_{SIGMA_LABEL[a]}_{SIGMA_LABEL[b]}" for a in (-1, 0, 1) for b in (-1, 0, 1)]


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x) + 0.0:.14e}"
    return str(x)


def write_csv(out, header: list[str], rows) -> None:
    w = csv.writer(out, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])


def write_json(out, obj) -> None:
    json.dump(obj, out, indent=2)
    out.write("\n")


def parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be min:max:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from None
    if steps < 1:
        raise argparse.ArgumentTypeError("grid steps must be >= 1")
    if hi < lo:
        raise argparse.ArgumentTypeError("grid max must be >= min")
    return lo, hi, steps


def parse_lambda(text: str) -> int:
    try:
        v = float(text)
    except ValueError:
        v = math.nan
    if v not in (1.0, -1.0):
        raise argparse.ArgumentTypeError("lambda must be 1 or -1")
    return int(v)


def _theta(args) -> float:
    return math.radians(args.theta_deg) if args.theta_deg is not None else args.theta


def _theta_grid(args, key: str = "theta_grid") -> np.ndarray:
    lo, hi, steps = getattr(args, key)
    if args.deg:
        lo, hi = math.radians(lo), math.radians(hi)
    return grid(lo, hi, steps)


def report_dict(r) -> dict:
    return {
        "lambda": r.lam, "theta": r.theta, "h": r.h, "sz": r.sz, "energy": r.energy,
        "magnetization": r.magnetization, "degenerate": r.degenerate,
        "degenerate_sectors": list(r.degenerate_sectors), "multiplicity": r.multiplicity,
        "amplitudes": list(r.amplitudes), "entropy": r.entropy, "k": r.k,
        "f_s": r.f_s, "f_t": r.f_t, "p0": r.p0, "p_plus": r.p_plus, "p_minus": r.p_minus,
        "ppm": r.ppm, "is_global_ground": r.is_global_ground,
    }


def cmd_ground_state(args, out) -> int:
    p = QbhParams(args.lam, _theta(args), args.h)
    r = ground_state_report(p, sector=args.sector)
    d = report_dict(r)
    if args.format == "json":
        write_json(out, d)
    else:
        d["degenerate_sectors"] = ";".join(str(s) for s in r.degenerate_sectors)
        amps = d.pop("amplitudes")
        header = list(d) + AMP_COLUMNS
        write_csv(out, header, [list(d.values()) + amps])
    return EXIT_OK


def cmd_spectrum(args, out) -> int:
    lo, hi, steps = args.grid
    if args.axis == "theta" and args.deg:
        lo, hi = math.radians(lo), math.radians(hi)
    rows = spectrum_sweep(args.lam, args.axis, args.fixed, grid(lo, hi, steps))
    xname = "theta_rad" if args.axis == "theta" else "h_J1"
    if args.format == "json":
        write_json(out, {
            "lambda": args.lam, "axis": args.axis, "fixed": args.fixed, "units": "|J1|",
            "rows": [{args.axis: r.x, "energies": list(r.energies),
                      "degeneracy": [[e, m] for e, m in r.classes]} for r in rows],
        })
    else:
        header = [xname] + [f"e{i}_J1" for i in range(1, 10)] + ["degeneracy"]
        write_csv(out, header, ([r.x, *r.energies, r.signature] for r in rows))
    return EXIT_OK


def cmd_phase_diagram(args, out) -> int:
    thetas = _theta_grid(args)
    h_lo, h_hi, h_steps = args.h_grid
    spec = SweepSpec(args.lam, float(thetas[0]), float(thetas[-1]), len(thetas),
                     h_lo, h_hi, h_steps)
    points = sweep(spec, verify_fraction=0.01 if args.verify else 0.0, seed=args.seed)
    flat = [pt for row in points for pt in row]
    if args.format == "json":
        write_json(out, {"lambda": args.lam, "points": [
            {"theta": pt.theta, "h": pt.h, "sz": pt.sz, "energy": pt.energy,
             "magnetization": pt.magnetization, "degenerate": pt.degenerate} for pt in flat]})
    else:
        write_csv(out, ["theta", "h", "sz", "energy", "degenerate"],
                  ([pt.theta, pt.h, pt.sz, pt.energy, pt.degenerate] for pt in flat))
    return EXIT_OK


def cmd_entanglement_sweep(args, out) -> int:
    reports = entanglement_sweep(args.lam, _theta_grid(args), h=args.h)
    if args.format == "json":
        write_json(out, {"lambda": args.lam, "h": args.h, "log_base": 2,
                         "rows": [report_dict(r) for r in reports]})
    else:
        write_csv(out, ["theta", "entropy", "k", "p0", "ppm", "f_s", "f_t", "is_global_ground"],
                  ([r.theta, r.entropy, r.k, r.p0, r.ppm, r.f_s, r.f_t, r.is_global_ground]
                   for r in reports))
    return EXIT_OK


def cmd_hubbard(args, out) -> int:
    p = HubbardParams(args.t, args.u0, args.u2, args.field)
    if args.action == "map":
        c = map_to_effective(p)
        d = {"j0": c.j0, "j1": c.j1, "j2": c.j2, "lambda_out": c.lambda_out,
             "theta_out": c.theta_out, "h_out": c.h_out, "valid": c.valid}
    elif args.action == "compare":
        c = compare_spectra(p)
        d = {"max_deviation": c.max_deviation, "offset_used": c.offset_used,
             "hubbard_levels": c.hubbard_levels.tolist(),
             "effective_levels": c.effective_levels.tolist()}
    else:
        d = {"eigenvalues": eigh(build_hubbard_hamiltonian(p)).values.tolist()}
    if args.format == "csv":
        scalars = {k: v for k, v in d.items() if not isinstance(v, list)}
        if scalars:
            write_csv(out, list(scalars), [list(scalars.values())])
        else:
            write_csv(out, ["index", "eigenvalue"], enumerate(d["eigenvalues"]))
    else:
        write_json(out, d)
    return EXIT_OK


def cmd_validate(args, out) -> int:
    result = run_validation(seed=args.seed, samples=args.samples)
    for s in result["suites"]:
        print(f"[{'PASS' if s['passed'] else 'FAIL'}] {s['name']}: {s['detail']}", file=sys.stderr)
    write_json(out, result)
    return EXIT_OK if result["passed"] else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qbhlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("csv", "json"), default="csv"):
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")

    def lam(sp):
        sp.add_argument("--lambda", dest="lam", type=parse_lambda, required=True,
                        help="sign of the bilinear coupling, 1 or -1")

    sp = sub.add_parser("ground-state", help="ground-state report at one parameter point")
    lam(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--theta", type=float, help="biquadratic angle in radians")
    g.add_argument("--theta-deg", type=float, help="biquadratic angle in degrees")
    sp.add_argument("--h", type=float, default=0.0, help="field in units of |J1|")
    sp.add_argument("--sector", type=int, choices=(-2, -1, 0, 1, 2),
                    help="restrict to one S^z sector")
    common(sp, default="json")
    sp.set_defaults(func=cmd_ground_state)

    sp = sub.add_parser("spectrum", help="nine energy curves along theta or h (units of |J1|)")
    lam(sp)
    sp.add_argument("--axis", choices=("theta", "h"), required=True)
    sp.add_argument("--fixed", type=float, default=0.0,
                    help="h when sweeping theta; theta (radians) when sweeping h")
    sp.add_argument("--grid", type=parse_grid, required=True, help="min:max:steps, inclusive")
    sp.add_argument("--deg", action="store_true", help="theta grid given in degrees")
    common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("phase-diagram", help="ground-state S^z sector over a (theta, h) grid")
    lam(sp)
    sp.add_argument("--theta-grid", type=parse_grid, default=(-1.55, 1.55, 201))
    sp.add_argument("--h-grid", type=parse_grid, default=(0.0, 3.0, 201))
    sp.add_argument("--deg", action="store_true", help="theta grid given in degrees")
    sp.add_argument("--verify", action="store_true",
                    help="re-check a random 1%% of points by full diagonalization")
    sp.add_argument("--seed", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_phase_diagram)

    sp = sub.add_parser("entanglement-sweep",
                        help="S^z=0 ground-state entanglement along theta (entropy in bits)")
    lam(sp)
    sp.add_argument("--theta-grid", type=parse_grid, default=(-1.55, 1.55, 311))
    sp.add_argument("--h", type=float, default=0.0, help="field used for is_global_ground")
    sp.add_argument("--deg", action="store_true", help="theta grid given in degrees")
    common(sp)
    sp.set_defaults(func=cmd_entanglement_sweep)

    sp = sub.add_parser("hubbard", help="two-site spin-1 Bose-Hubbard dimer")
    sp.add_argument("action", choices=("map", "compare", "spectrum"))
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--u0", type=float, required=True)
    sp.add_argument("--u2", type=float, required=True)
    sp.add_argument("--field", type=float, default=0.0)
    common(sp, default="json")
    sp.set_defaults(func=cmd_hubbard)

    sp = sub.add_parser("validate", help="run the analytic/numeric self-check suites")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_validate)
    return parser


GRID_FLAGS = ("--grid", "--theta-grid", "--h-grid")


def _join_grid_values(argv: list[str]) -> list[str]:
    # "--grid -1:1:5" would otherwise read "-1:1:5" as an option
    out, i = [], 0
    while i < len(argv):
        if argv[i] in GRID_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_grid_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    buf = io.StringIO(newline="")
    try:
        code = args.func(args, buf)
    except ValueError as exc:
        print(f"qbhlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
        sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
