"""Compatibility criteria for noisy spin observables sharing one sharpness.

The triplewise window ``(eta_lower, eta_upper]`` is where three observables are
pairwise jointly measurable yet fail the triplewise necessary condition; this
is the regime of Specker's scenario.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SpeckerError
from .qubit import TOL_ALG, UnitAxis

MAX_OBSERVABLES = 10
PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class MeasurementTriple:
    axes: tuple
    eta: float = 1.0

    def __post_init__(self):
        axes = tuple(a if isinstance(a, UnitAxis) else UnitAxis.from_vector(a) for a in self.axes)
        if len(axes) != 3:
            raise SpeckerError(f"a measurement triple needs 3 axes, got {len(axes)}")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "eta", float(self.eta))

    @property
    def cosines(self) -> tuple[float, float, float]:
        """``(cos theta_12, cos theta_13, cos theta_23)``, clipped to [-1, 1]."""
        return tuple(float(np.clip(self.axes[i].dot(self.axes[j]), -1.0, 1.0)) for i, j in PAIRS)

    def gram(self) -> np.ndarray:
        vecs = np.array([a.vec for a in self.axes])
        return vecs @ vecs.T


@dataclass(frozen=True)
class CompatibilityWindow:
    eta_lower: float
    eta_upper: float

    @property
    def nonempty(self) -> bool:
        return self.eta_lower < self.eta_upper

    def contains(self, eta: float, tol: float = TOL_ALG) -> bool:
        # exclusive at the bottom, inclusive at the top
        return eta > self.eta_lower + tol and eta <= self.eta_upper + tol


def _check_unit_interval(name, value, lo=0.0, hi=1.0):
    if not lo - TOL_ALG <= value <= hi + TOL_ALG:
        raise SpeckerError(f"{name} must lie in [{lo}, {hi}], got {value!r}")


def pairwise_compatible(eta: float, cos_theta: float) -> bool:
    """Exact pairwise joint-measurability test for two unbiased noisy spins."""
    _check_unit_interval("eta", eta)
    _check_unit_interval("cos_theta", cos_theta, -1.0, 1.0)
    return 1.0 + eta**4 * cos_theta**2 - 2.0 * eta**2 >= -TOL_ALG


def pair_eta_max(cos_theta: float) -> float:
    """Largest sharpness at which a pair with this angle is jointly measurable."""
    sin_abs = np.sqrt(max(0.0, 1.0 - cos_theta**2))
    return float(1.0 / np.sqrt(1.0 + sin_abs))


def eta_upper(t: MeasurementTriple) -> float:
    return eta_upper_from_cosines(t.cosines)


def eta_lower(t: MeasurementTriple) -> float:
    return eta_lower_from_cosines(t.cosines)


def eta_upper_from_cosines(cosines) -> float:
    return min(pair_eta_max(c) for c in cosines)


def eta_lower_from_cosines(cosines) -> float:
    """Triplewise necessary-condition threshold, with cosines ordered (12, 13, 23)."""
    c12, c13, c23 = cosines
    best = 0.0
    for x1, x2, x3 in itertools.product((1, -1), repeat=3):
        radicand = 3.0 + 2.0 * (x1 * x2 * c12 + x1 * x3 * c13 + x2 * x3 * c23)
        best = max(best, np.sqrt(max(radicand, 0.0)))
    return float(best / 3.0)


def sign_vector_norms(axes: Sequence[UnitAxis]) -> np.ndarray:
    """``|sum_k X_k n_k|`` for every sign vector ``X`` in {+1, -1}^N."""
    n = len(axes)
    if not 1 <= n <= MAX_OBSERVABLES:
        raise SpeckerError(f"need between 1 and {MAX_OBSERVABLES} axes, got {n}")
    vecs = np.array([a.vec for a in axes])
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    return np.linalg.norm(signs @ vecs, axis=1)


def n_wise_necessary(axes: Sequence[UnitAxis], eta: float) -> bool:
    norms = sign_vector_norms(axes)
    return eta <= norms.max() / len(axes) + TOL_ALG


def n_wise_sufficient(axes: Sequence[UnitAxis], eta: float) -> bool:
    norms = sign_vector_norms(axes)
    return eta <= 2 ** len(axes) / norms.sum() + TOL_ALG


def specker_window(t: MeasurementTriple) -> CompatibilityWindow:
    return CompatibilityWindow(eta_lower(t), eta_upper(t))
