"""Scenario files and their evaluation into a :class:`~specker.lsw.ScenarioReport`.

A scenario is a JSON object with these keys (anything else is rejected)::

    {
      "axes": "trine" | "orthogonal" | [[x, y, z], [x, y, z], [x, y, z]],
      "eta": 0.7 | "optimal-constrained" | "optimal-relaxed",
      "joint_params": "optimal" | [{"alpha": 0.78, "a": [0, 0.4, 0]}, ...],   # optional
      "state": "optimal" | [x, y, z]                                          # optional
    }

``joint_params`` lists the pairs in the order (12), (13), (23).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import IncompatiblePair, ScenarioError, SpeckerError
from .joint_measurability import PAIRS, MeasurementTriple, pairwise_compatible, specker_window
from .joint_povm import JointParams, construct_joint, validity_window
from .lsw import (
    KS_BOUND,
    ScenarioReport,
    lsw_bound,
    optimal_state_or_mixed,
    r3_quantum,
    violation_terms,
)
from .optimizer import optimal_params_for_triple, optimize_eta, orthogonal_axes, trine_axes
from .qubit import TOL_ALG, NoisyObservable, QubitState

AXIS_PRESETS = {"trine": trine_axes, "orthogonal": orthogonal_axes}
ETA_MODES = ("optimal-constrained", "optimal-relaxed")
KEYS = ("axes", "eta", "joint_params", "state")
REQUIRED = ("axes", "eta")


@dataclass(frozen=True)
class Scenario:
    axes: Any
    eta: Any
    joint_params: Any = "optimal"
    state: Any = "optimal"

    def triple(self) -> MeasurementTriple:
        if isinstance(self.axes, str):
            return MeasurementTriple(AXIS_PRESETS[self.axes]())
        return MeasurementTriple(tuple(self.axes))

    def to_dict(self) -> dict:
        return {"axes": self.axes, "eta": self.eta, "joint_params": self.joint_params, "state": self.state}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _vector(value, context) -> list[float]:
    if not (isinstance(value, list) and len(value) == 3):
        raise ScenarioError("expected a list of 3 numbers", context)
    out = []
    for k, item in enumerate(value):
        if isinstance(item, bool) or not isinstance(item, (int, float)) or not math.isfinite(item):
            raise ScenarioError(f"component {k} is not a finite number", context)
        out.append(float(item))
    return out


def scenario_from_dict(data: Any) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object", "<root>")
    unknown = sorted(set(data) - set(KEYS))
    if unknown:
        raise ScenarioError(f"unknown key(s) {unknown}", "<root>")
    for key in REQUIRED:
        if key not in data:
            raise ScenarioError("missing required key", key)

    axes = data["axes"]
    if isinstance(axes, str):
        if axes not in AXIS_PRESETS:
            raise ScenarioError(f"unknown preset {axes!r}; expected one of {sorted(AXIS_PRESETS)}", "axes")
    elif isinstance(axes, list) and len(axes) == 3:
        axes = [_vector(v, f"axes[{k}]") for k, v in enumerate(axes)]
    else:
        raise ScenarioError("expected a preset name or a list of 3 vectors", "axes")

    eta = data["eta"]
    if isinstance(eta, str):
        if eta not in ETA_MODES:
            raise ScenarioError(f"unknown mode {eta!r}; expected a number or one of {list(ETA_MODES)}", "eta")
    elif isinstance(eta, bool) or not isinstance(eta, (int, float)):
        raise ScenarioError("expected a number or an optimization mode", "eta")
    else:
        eta = float(eta)

    params = data.get("joint_params", "optimal")
    if params != "optimal":
        if not (isinstance(params, list) and len(params) == 3):
            raise ScenarioError('expected "optimal" or a list of 3 objects', "joint_params")
        parsed = []
        for k, item in enumerate(params):
            ctx = f"joint_params[{k}]"
            if not isinstance(item, dict) or set(item) != {"alpha", "a"}:
                raise ScenarioError('each entry needs exactly the keys "alpha" and "a"', ctx)
            alpha = item["alpha"]
            if isinstance(alpha, bool) or not isinstance(alpha, (int, float)):
                raise ScenarioError("alpha must be a number", f"{ctx}.alpha")
            parsed.append({"alpha": float(alpha), "a": _vector(item["a"], f"{ctx}.a")})
        params = parsed

    state = data.get("state", "optimal")
    if state != "optimal":
        state = _vector(state, "state")

    scenario = Scenario(axes, eta, params, state)
    try:
        scenario.triple()
    except SpeckerError as exc:
        raise ScenarioError(str(exc), "axes") from exc
    return scenario


def loads(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc
    return scenario_from_dict(data)


def load(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def evaluate(scenario: Scenario) -> ScenarioReport:
    """Build the three joint POVMs and compute ``R3`` with its bounds and diagnostics."""
    triple = scenario.triple()
    cosines = triple.cosines
    open_boundary = False
    if isinstance(scenario.eta, str):
        opt = optimize_eta(cosines, scenario.eta == "optimal-constrained")
        eta, open_boundary = opt.eta, opt.open_boundary
    else:
        eta = scenario.eta
        if not 0.0 <= eta <= 1.0:
            raise ScenarioError(f"eta={eta!r} outside [0, 1]", "eta")
    for (i, j), c in zip(PAIRS, cosines):
        if not pairwise_compatible(eta, c):
            raise IncompatiblePair(
                f"pair ({i + 1}{j + 1}) with cos(theta)={c:.6g} is not jointly measurable at eta={eta:.6g}"
            )

    if scenario.joint_params == "optimal":
        params = optimal_params_for_triple(triple.axes, eta)
    else:
        params = [JointParams(p["alpha"], p["a"]) for p in scenario.joint_params]

    observables = [NoisyObservable(axis, eta) for axis in triple.axes]
    pair_diagnostics = []
    joints = []
    for (i, j), p in zip(PAIRS, params):
        lo, hi = validity_window(observables[i], observables[j], p.a)
        pair_diagnostics.append({
            "pair": f"{i + 1}{j + 1}",
            "alpha": p.alpha,
            "a": list(p.a),
            "alpha_min": lo,
            "alpha_max": hi,
            "lower_slack": p.alpha - lo,
            "upper_slack": hi - p.alpha,
        })
        joints.append(construct_joint(observables[i], observables[j], p))

    a_total = np.sum([p.vec for p in params], axis=0)
    best_state, _ = optimal_state_or_mixed(a_total)
    state = best_state if scenario.state == "optimal" else QubitState(scenario.state)

    r3 = r3_quantum(state, joints)
    bound = lsw_bound(eta)
    s = r3 - bound
    terms = violation_terms(params, state, eta)
    if abs(s) > 1e-9 and (s > 0) != terms.violated:
        raise AssertionError("violation condition disagrees with direct R3 evaluation")

    window = specker_window(triple)
    diagnostics = {
        "eta_lower": window.eta_lower,
        "eta_upper": window.eta_upper,
        "in_specker_window": window.contains(eta) or (open_boundary and abs(eta - window.eta_lower) <= TOL_ALG),
        "pairs": pair_diagnostics,
    }
    return ScenarioReport(
        eta=eta,
        r3_quantum=r3,
        bound_ks=KS_BOUND,
        bound_lsw=bound,
        violation_s=s,
        violation_c=6.0 * s,
        lambda_rho=terms.lambda_rho,
        sum_alpha=terms.sum_alpha,
        a_total=tuple(float(t) for t in a_total),
        optimal_state=best_state,
        state=state,
        violated=terms.violated,
        open_boundary_supremum=open_boundary,
        diagnostics=diagnostics,
    )
