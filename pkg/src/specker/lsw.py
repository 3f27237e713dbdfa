"""Average anticorrelation ``R3`` of three pairwise joint measurements.

Quantum prediction, noncontextual bounds, the state-dependent violation
condition, the optimal state, and the grid check that no axis geometry admits
a state-independent violation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ZeroVector
from .joint_povm import JointParams, JointPovm, anticorrelation_effect
from .qubit import TOL_ALG, QubitState, born_probability

KS_BOUND = 2.0 / 3.0


@dataclass(frozen=True)
class ScenarioReport:
    eta: float
    r3_quantum: float
    bound_ks: float
    bound_lsw: float
    violation_s: float
    violation_c: float
    lambda_rho: float
    sum_alpha: float
    a_total: tuple
    optimal_state: QubitState
    state: QubitState
    violated: bool
    open_boundary_supremum: bool = False
    diagnostics: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "eta": self.eta,
            "r3_quantum": self.r3_quantum,
            "bound_ks": self.bound_ks,
            "bound_lsw": self.bound_lsw,
            "violation_s": self.violation_s,
            "violation_c": self.violation_c,
            "lambda_rho": self.lambda_rho,
            "sum_alpha": self.sum_alpha,
            "a_total": list(self.a_total),
            "state": list(self.state.r),
            "optimal_state": list(self.optimal_state.r),
            "violated": self.violated,
            "open_boundary_supremum": self.open_boundary_supremum,
            "diagnostics": self.diagnostics,
        }


def r3_quantum(s: QubitState, joints: Sequence[JointPovm]) -> float:
    return sum(born_probability(s, anticorrelation_effect(g)) for g in joints) / len(joints)


def lsw_bound(eta: float) -> float:
    return 1.0 - eta / 3.0


@dataclass(frozen=True)
class ViolationTerms:
    sum_alpha: float
    a_total: np.ndarray
    lambda_rho: float
    violated: bool


def violation_terms(params: Sequence[JointParams], s: QubitState, eta: float) -> ViolationTerms:
    """Split the violation condition into ``sum(alpha) + lambda_rho < 2 eta``.

    ``lambda_rho = -a_total . r``, which equals ``(1 - 2q) a . n`` for the
    ``(q, theta, phi)`` parameterization of the state.
    """
    sum_alpha = float(sum(p.alpha for p in params))
    a_total = np.sum([p.vec for p in params], axis=0)
    lambda_rho = -float(a_total @ s.vec)
    violated = sum_alpha + lambda_rho < 2.0 * eta - TOL_ALG
    return ViolationTerms(sum_alpha, a_total, lambda_rho, violated)


def optimal_state(a_total) -> QubitState:
    """Pure state along ``a_total``; this gives ``lambda_rho = -|a_total|``.

    Raises :class:`ZeroVector` when ``a_total`` vanishes, since then every
    state gives the same ``R3``.
    """
    a = np.asarray(a_total, dtype=float)
    norm = float(np.linalg.norm(a))
    if norm <= TOL_ALG:
        raise ZeroVector("a_total vanishes; every state is optimal")
    return QubitState(a / norm)


def optimal_state_or_mixed(a_total) -> tuple[QubitState, bool]:
    """Like :func:`optimal_state` but falls back to the maximally mixed state (flag False)."""
    try:
        return optimal_state(a_total), True
    except ZeroVector:
        return QubitState.maximally_mixed(), False


def half_angle_sum(cos12, cos13, cos23):
    """``sum |cos(theta_ij / 2)|`` from the pairwise cosines."""
    def term(c):
        return np.sqrt(np.clip((1.0 + np.asarray(c)) / 2.0, 0.0, None))

    return term(cos12) + term(cos13) + term(cos23)


@dataclass(frozen=True)
class ScanResult:
    min_value: float
    theta12: float
    theta13: float
    phi3: float


def no_si_scan(grid_resolution: int) -> ScanResult:
    """Minimize the half-angle cosine sum over all axis triples on a grid.

    Axes are ``n1 = z``, ``n2`` at polar angle ``theta12`` in the ZX plane and
    ``n3`` at ``(theta13, phi3)``.  Polar angles sit at half-step offsets so
    the degenerate endpoints 0 and pi are never sampled.  A state-independent
    violation would need the sum to drop below 1.
    """
    if grid_resolution < 3:
        raise ValueError("grid_resolution must be at least 3")
    n = int(grid_resolution)
    thetas = (np.arange(n) + 0.5) * np.pi / n
    phis = np.arange(n) * 2.0 * np.pi / n
    t12, t13, p3 = np.meshgrid(thetas, thetas, phis, indexing="ij")
    cos12, cos13 = np.cos(t12), np.cos(t13)
    cos23 = np.sin(t12) * np.sin(t13) * np.cos(p3) + cos12 * cos13
    values = half_angle_sum(cos12, cos13, cos23)
    k = int(np.argmin(values))
    i, j, m = np.unravel_index(k, values.shape)
    result = ScanResult(float(values.flat[k]), float(thetas[i]), float(thetas[j]), float(phis[m]))
    if not result.min_value > 1.0:
        raise AssertionError(f"interior grid minimum {result.min_value!r} is not above 1")
    return result


def outcome_probabilities(s: QubitState, g: JointPovm) -> tuple[float, float, float, float]:
    """``(p_pp, p_pm, p_mp, p_mm)`` for one joint measurement."""
    return tuple(born_probability(s, e) for e in g.effects)
