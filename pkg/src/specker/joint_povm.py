"""Four-outcome joint measurements for a pair of noisy spin observables.

A joint POVM for ``M_i`` and ``M_j`` with the correct marginals is fixed by a
scalar ``alpha`` and a 3-vector ``a``::

    G_pp = ((alpha/2) I + sigma . (eta (n_i + n_j) - a)/2) / 2
    G_pm = ((1 - alpha/2) I + sigma . (eta (n_i - n_j) + a)/2) / 2
    G_mp = ((1 - alpha/2) I + sigma . (eta (n_j - n_i) + a)/2) / 2
    G_mm = ((alpha/2) I + sigma . (-eta (n_i + n_j) - a)/2) / 2
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidJointParams, MismatchedSharpness
from .qubit import (
    TOL_ALG,
    NoisyObservable,
    QubitEffect,
    _as_vec3,
    effect_validity,
    observable_effects,
    sum_effects,
)


@dataclass(frozen=True)
class JointParams:
    alpha: float
    a: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "a", tuple(float(t) for t in _as_vec3(self.a)))

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.a)


@dataclass(frozen=True)
class JointPovm:
    g_pp: QubitEffect
    g_pm: QubitEffect
    g_mp: QubitEffect
    g_mm: QubitEffect

    @property
    def effects(self) -> tuple[QubitEffect, ...]:
        return (self.g_pp, self.g_pm, self.g_mp, self.g_mm)

    def transpose(self) -> "JointPovm":
        """Same measurement with the roles of the two observables swapped."""
        return JointPovm(self.g_pp, self.g_mp, self.g_pm, self.g_mm)


def _shared_eta(mi: NoisyObservable, mj: NoisyObservable) -> float:
    if abs(mi.eta - mj.eta) > TOL_ALG:
        raise MismatchedSharpness(f"sharpness differs between observables: {mi.eta!r} vs {mj.eta!r}")
    return mi.eta


def validity_window(mi: NoisyObservable, mj: NoisyObservable, a) -> tuple[float, float]:
    """Range ``(alpha_min, alpha_max)`` making all four joint effects valid.

    The window is empty when ``alpha_min > alpha_max``.
    """
    eta = _shared_eta(mi, mj)
    a = _as_vec3(a)
    ni, nj = mi.axis.vec, mj.axis.vec
    cos_ij = float(ni @ nj)
    a2 = float(a @ a)
    lower = 2 * eta**2 * (1 + cos_ij) + a2 + 2 * eta * abs(float((ni + nj) @ a))
    upper = 2 * eta**2 * (1 - cos_ij) + a2 + 2 * eta * abs(float((ni - nj) @ a))
    return float(np.sqrt(max(lower, 0.0))), float(2.0 - np.sqrt(max(upper, 0.0)))


def _effects_for(mi: NoisyObservable, mj: NoisyObservable, p: JointParams):
    eta = mi.eta
    ni, nj = mi.axis.vec, mj.axis.vec
    a = p.vec
    half_alpha = p.alpha / 2
    return (
        QubitEffect(half_alpha, 0.5 * (eta * (ni + nj) - a)),
        QubitEffect(1 - half_alpha, 0.5 * (eta * (ni - nj) + a)),
        QubitEffect(1 - half_alpha, 0.5 * (eta * (nj - ni) + a)),
        QubitEffect(half_alpha, 0.5 * (-eta * (ni + nj) - a)),
    )


def construct_joint(mi: NoisyObservable, mj: NoisyObservable, p: JointParams) -> JointPovm:
    """Build the joint POVM, rejecting parameters outside the validity window."""
    _shared_eta(mi, mj)
    lo, hi = validity_window(mi, mj, p.a)
    slacks = {}
    if p.alpha < lo - TOL_ALG:
        slacks["lower"] = lo - p.alpha
    if p.alpha > hi + TOL_ALG:
        slacks["upper"] = p.alpha - hi
    if slacks:
        detail = ", ".join(f"{side} bound violated by {amount:.3e}" for side, amount in slacks.items())
        raise InvalidJointParams(
            f"alpha={p.alpha!r} outside validity window [{lo!r}, {hi!r}] ({detail})", slacks
        )
    g = JointPovm(*_effects_for(mi, mj, p))
    if not check_marginals(g, mi, mj):
        raise AssertionError("joint POVM construction broke the marginal identities")
    return g


def anticorrelation_effect(g: JointPovm) -> QubitEffect:
    return g.g_pm + g.g_mp


def alpha_of(g: JointPovm) -> float:
    return 2.0 * g.g_pp.c


def a_of(g: JointPovm) -> np.ndarray:
    return anticorrelation_effect(g).vec


def check_marginals(g: JointPovm, mi: NoisyObservable, mj: NoisyObservable, tol: float = TOL_ALG) -> bool:
    ei_p, ei_m = observable_effects(mi)
    ej_p, ej_m = observable_effects(mj)
    return all(
        (lhs1 + lhs2).isclose(target, tol)
        for lhs1, lhs2, target in (
            (g.g_pp, g.g_pm, ei_p),
            (g.g_mp, g.g_mm, ei_m),
            (g.g_pp, g.g_mp, ej_p),
            (g.g_pm, g.g_mm, ej_m),
        )
    )


def is_valid_povm(g: JointPovm, tol: float = TOL_ALG) -> bool:
    if not all(effect_validity(e, tol) for e in g.effects):
        return False
    return sum_effects(g.effects).isclose(QubitEffect(2.0, (0.0, 0.0, 0.0)), tol)
