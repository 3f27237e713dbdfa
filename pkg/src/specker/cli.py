"""Command-line interface: ``specker {evaluate,reproduce,sweep,window,model,scan-si}``.

Exit codes: 0 success, 1 internal error, 2 invalid input, 3 a reproduction
row outside its tolerance.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SpeckerError
from .joint_measurability import MeasurementTriple, eta_upper_from_cosines, specker_window
from .joint_povm import construct_joint
from .lsw import KS_BOUND, lsw_bound, no_si_scan, outcome_probabilities, r3_quantum
from .ont_model import (
    DEFAULT_SEED,
    HiddenAssignment,
    PairwiseDistribution,
    joint_feasibility,
    model_pair_tables,
    model_r3_max,
    quantum_pair_tables,
    sample_pair_outcomes,
    pair_table,
)
from .optimizer import c_max_closed_form, optimal_params_for_triple, optimize_eta
from .qubit import NoisyObservable, QubitState
from .scenario import AXIS_PRESETS, load

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_REPRODUCE = 0, 1, 2, 3
DEFAULT_TOLERANCE = 1e-9


def fmt_machine(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def fmt_human(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, float):
        return format(x, ".6g")
    return str(x)


def write_csv(out, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt_machine(v) for v in row])


def write_text(out, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    cells = [list(header)] + [[fmt_human(v) for v in row] for row in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    for r in cells:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def emit(out, fmt: str, header, rows, payload=None) -> None:
    if fmt == "json":
        obj = payload if payload is not None else [dict(zip(header, row)) for row in rows]
        out.write(json.dumps(obj, indent=2) + "\n")
    elif fmt == "csv":
        write_csv(out, header, rows)
    else:
        write_text(out, header, rows)


# -- evaluate ------------------------------------------------------------------

REPORT_COLUMNS = (
    "eta", "r3_quantum", "bound_ks", "bound_lsw", "violation_s", "violation_c", "lambda_rho",
    "sum_alpha", "a_x", "a_y", "a_z", "state_x", "state_y", "state_z", "optimal_state_x",
    "optimal_state_y", "optimal_state_z", "violated", "open_boundary_supremum", "eta_lower",
    "eta_upper", "in_specker_window",
)


def report_row(report) -> list:
    d = report.diagnostics
    return [
        report.eta, report.r3_quantum, report.bound_ks, report.bound_lsw, report.violation_s,
        report.violation_c, report.lambda_rho, report.sum_alpha, *report.a_total, *report.state.r,
        *report.optimal_state.r, report.violated, report.open_boundary_supremum, d["eta_lower"],
        d["eta_upper"], d["in_specker_window"],
    ]


def cmd_evaluate(args, out) -> int:
    from .scenario import evaluate

    report = evaluate(load(args.scenario))
    if args.format == "text":
        write_text(out, ("quantity", "value"), list(zip(REPORT_COLUMNS, report_row(report))))
        out.write("\n")
        pairs = report.diagnostics["pairs"]
        keys = ("pair", "alpha", "alpha_min", "alpha_max", "lower_slack", "upper_slack")
        write_text(out, keys, [[p[k] for k in keys] for p in pairs])
    else:
        emit(out, args.format, REPORT_COLUMNS, [report_row(report)], payload=report.as_dict())
    return EXIT_OK


# -- reproduce -----------------------------------------------------------------


@dataclass(frozen=True)
class Row:
    quantity: str
    reference: float
    computed: float
    tolerance: float | None  # None: use the command-line tolerance

    def tol(self, default: float) -> float:
        return default if self.tolerance is None else self.tolerance


def reproduce_rows() -> list[Row]:
    trine = MeasurementTriple(AXIS_PRESETS["trine"]())
    ortho = MeasurementTriple(AXIS_PRESETS["orthogonal"]())
    tw, ow = specker_window(trine), specker_window(ortho)
    sq13 = math.sqrt(13.0)

    eta_l = tw.eta_lower
    params = optimal_params_for_triple(trine.axes, eta_l)
    observables = [NoisyObservable(a, eta_l) for a in trine.axes]
    joints = [construct_joint(observables[i], observables[j], p)
              for (i, j), p in zip(((0, 1), (0, 2), (1, 2)), params)]
    psi_y = QubitState((0.0, 1.0, 0.0))
    r3 = r3_quantum(psi_y, joints)
    c_trine = c_max_closed_form(trine.cosines, eta_l)
    constrained = optimize_eta(trine.cosines, True)
    relaxed = optimize_eta(trine.cosines, False)

    return [
        Row("eta_lower trine", 2 / 3, tw.eta_lower, None),
        Row("eta_upper trine", math.sqrt(3) - 1, tw.eta_upper, None),
        Row("eta_lower orthogonal", 1 / math.sqrt(3), ow.eta_lower, None),
        Row("eta_upper orthogonal", 1 / math.sqrt(2), ow.eta_upper, None),
        Row("alpha_ij trine", 7 / 9, params[0].alpha, None),
        Row("|a_ij| trine", sq13 / 9, float(np.linalg.norm(params[0].vec)), None),
        Row("C_max trine (closed form)", sq13 / 3 - 1, c_trine, None),
        Row("C_max trine (5 decimals)", 0.20185, c_trine, 5e-5),
        Row("S_max trine", 0.03364, c_trine / 6, 5e-5),
        Row("constrained optimum eta", 2 / 3, constrained.eta, None),
        Row("R3 quantum trine, state +y", 0.8114, r3, 5e-5),
        Row("R3 - LSW bound = S trine", c_trine / 6, r3 - lsw_bound(eta_l), None),
        Row("LSW bound at eta_l", 7 / 9, lsw_bound(eta_l), None),
        Row("relaxed eta*", 0.4566, relaxed.eta, 1e-3),
        Row("relaxed violation S", 0.0896, relaxed.s_max, 5e-4),
        Row("relaxed R3 quantum", 0.9374, relaxed.r3_quantum, 5e-4),
        Row("relaxed LSW bound", 0.8478, relaxed.lsw_bound, 5e-4),
        Row("KS bound", 2 / 3, KS_BOUND, None),
        Row("model R3 max, eta=1", 2 / 3, model_r3_max(1.0)[0], None),
        Row("model R3 max, eta=2/3", 7 / 9, model_r3_max(2 / 3)[0], None),
        Row("model R3 max, eta=0", 1.0, model_r3_max(0.0)[0], None),
    ]


REPRODUCE_COLUMNS = ("quantity", "reference_value", "computed", "abs_diff", "tolerance", "pass")


def cmd_reproduce(args, out) -> int:
    rows, ok = [], True
    for row in reproduce_rows():
        tol = row.tol(args.tolerance)
        diff = abs(row.computed - row.reference)
        passed = diff <= tol
        ok &= passed
        rows.append([row.quantity, row.reference, row.computed, diff, tol, passed])
    emit(out, args.format, REPRODUCE_COLUMNS, rows)
    return EXIT_OK if ok else EXIT_REPRODUCE


# -- sweep ---------------------------------------------------------------------

SWEEP_COLUMNS = ("eta", "c_max", "s", "r3_quantum", "lsw_bound", "in_specker_window")


def eta_grid(start: float, stop: float, step: float) -> np.ndarray:
    if step <= 0:
        raise SpeckerError("step must be positive")
    if stop < start:
        return np.empty(0)
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def sweep_rows(preset: str, start: float, stop: float, step: float) -> list[list]:
    triple = MeasurementTriple(AXIS_PRESETS[preset]())
    window = specker_window(triple)
    etas = eta_grid(start, stop, step)
    if len(etas) and (etas[0] <= 0 or etas[-1] > eta_upper_from_cosines(triple.cosines) + 1e-12):
        raise SpeckerError(f"eta range must lie within (0, {window.eta_upper:.6g}]")
    rows = []
    for eta in etas:
        eta = float(eta)
        c = c_max_closed_form(triple.cosines, eta)
        bound = lsw_bound(eta)
        rows.append([eta, c, c / 6, bound + c / 6, bound, window.contains(eta)])
    return rows


def cmd_sweep(args, out) -> int:
    rows = sweep_rows(args.preset, args.eta_min, args.eta_max, args.step)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                write_csv(fh, SWEEP_COLUMNS, rows)
        except OSError as exc:
            raise OSError(f"cannot write sweep to {args.output}: {exc.strerror}") from exc
    else:
        emit(out, args.format if args.format != "text" else "csv", SWEEP_COLUMNS, rows)
    return EXIT_OK


# -- window / model / scan-si --------------------------------------------------


def cmd_window(args, out) -> int:
    if args.axes:
        try:
            vecs = json.loads(args.axes)
            triple = MeasurementTriple(tuple(vecs))
        except (json.JSONDecodeError, TypeError) as exc:
            raise SpeckerError(f"--axes must be a JSON list of three 3-vectors: {exc}") from exc
        name = "custom"
    else:
        triple = MeasurementTriple(AXIS_PRESETS[args.preset]())
        name = args.preset
    w = specker_window(triple)
    emit(out, args.format, ("axes", "eta_lower", "eta_upper", "nonempty"),
         [[name, w.eta_lower, w.eta_upper, w.nonempty]])
    return EXIT_OK


def trine_quantum_tables():
    """Pairwise outcome tables of the optimal trine scenario at ``eta_l``, state +y."""
    trine = MeasurementTriple(AXIS_PRESETS["trine"]())
    eta = specker_window(trine).eta_lower
    params = optimal_params_for_triple(trine.axes, eta)
    obs = [NoisyObservable(a, eta) for a in trine.axes]
    joints = [construct_joint(obs[i], obs[j], p) for (i, j), p in zip(((0, 1), (0, 2), (1, 2)), params)]
    state = QubitState((0.0, 1.0, 0.0))
    return quantum_pair_tables([outcome_probabilities(state, g) for g in joints])


def cmd_model(args, out) -> int:
    etas = [args.eta] if args.eta is not None else [k / 10 for k in range(11)]
    rows = []
    for eta in etas:
        value, lam = model_r3_max(eta)
        rows.append([eta, value, 1 - eta / 3, f"{lam.x1}{lam.x2}{lam.x3}"])
    fair = PairwiseDistribution([[0.25, 0.25], [0.25, 0.25]])
    anti = PairwiseDistribution([[0.0, 0.5], [0.5, 0.0]])
    demo_eta = args.eta if args.eta is not None else 2 / 3
    lam = HiddenAssignment(0, 0, 1)
    feas = [
        ["independent fair coins", joint_feasibility(fair, fair, fair)],
        ["perfect anticorrelation", joint_feasibility(anti, anti, anti)],
        [f"model tables, eta={demo_eta:.6g}, lambda=001", joint_feasibility(*model_pair_tables(demo_eta, lam))],
        ["quantum trine optimum", joint_feasibility(*trine_quantum_tables())],
    ]
    if args.samples:
        sampled = sample_pair_outcomes(demo_eta, lam, (0, 1), args.samples, seed=args.seed)
        exact = pair_table(demo_eta, lam, (0, 1)).table
        feas.append([f"sampled pair (12), n={args.samples}, max |dev|", float(np.max(np.abs(sampled - exact)))])
    if args.format == "json":
        payload = {
            "r3_max": [dict(zip(("eta", "r3_max", "closed_form", "assignment"), r)) for r in rows],
            "joint_feasibility": {name: v for name, v in feas},
        }
        emit(out, "json", None, None, payload=payload)
    else:
        emit(out, args.format, ("eta", "r3_max", "closed_form", "assignment"), rows)
        if args.format == "text":
            out.write("\n")
        emit(out, args.format, ("case", "result"), feas)
    return EXIT_OK


def cmd_scan_si(args, out) -> int:
    r = no_si_scan(args.resolution)
    emit(out, args.format, ("resolution", "min_value", "theta12", "theta13", "phi3"),
         [[args.resolution, r.min_value, r.theta12, r.theta13, r.phi3]])
    return EXIT_OK


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--resolution", type=int, default=50)
    common.add_argument("--output", default=None)

    parser = argparse.ArgumentParser(prog="specker", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", parents=[common], help="evaluate a scenario file")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("reproduce", parents=[common], help="recompute the reference numbers")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("sweep", parents=[common], help="C_max against eta, as CSV")
    p.add_argument("--preset", choices=sorted(AXIS_PRESETS), default="trine")
    p.add_argument("--eta-min", type=float, default=0.4)
    p.add_argument("--eta-max", type=float, default=0.73)
    p.add_argument("--step", type=float, default=0.005)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("window", parents=[common], help="print the compatibility window")
    p.add_argument("--preset", choices=sorted(AXIS_PRESETS), default="trine")
    p.add_argument("--axes", help="JSON list of three 3-vectors (overrides --preset)")
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("model", parents=[common], help="noncontextual model bound and feasibility demo")
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--samples", type=int, default=0, help="Monte Carlo samples for the sampling check")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("scan-si", parents=[common], help="grid check against state-independent violation")
    p.set_defaults(func=cmd_scan_si)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    buffer = io.StringIO()
    try:
        code = args.func(args, buffer)
    except (SpeckerError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        sys.stderr.write(f"internal error: {exc!r}\n")
        return EXIT_INTERNAL
    out.write(buffer.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
