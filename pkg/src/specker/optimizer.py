"""Maximizing the violation ``C = 2 eta - (sum alpha - |a|)``.

For coplanar axes the optimum over joint-POVM parameters has a closed form:
each ``a_ij`` lies along the plane normal with the largest length the
validity window allows, and ``alpha_ij = 1 + eta^2 cos_ij``.  This module
evaluates that closed form, an independent grid search over the joint
parameters, and sweeps over sharpness and coplanar geometry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EmptyWindow, IncompatiblePair
from .joint_measurability import (
    PAIRS,
    MeasurementTriple,
    eta_lower_from_cosines,
    eta_upper_from_cosines,
    pairwise_compatible,
)
from .joint_povm import JointParams
from .lsw import lsw_bound
from .qubit import TOL_ALG, QubitState, UnitAxis

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
ETA_FLOOR = 1e-6
ETA_TOL = 1e-9
COPLANAR_TOL = 1e-9


def _pair_radicand(cos_ij, eta):
    return 1.0 + eta**4 * cos_ij**2 - 2.0 * eta**2


def max_a_norm(cos_ij: float, eta: float) -> float:
    """Largest ``|a_ij|`` compatible with validity when ``a_ij`` is normal to both axes."""
    radicand = _pair_radicand(cos_ij, eta)
    if radicand < -TOL_ALG:
        raise IncompatiblePair(
            f"pair with cos(theta)={cos_ij!r} is not jointly measurable at eta={eta!r}"
            f" (radicand {radicand:.3e})"
        )
    return math.sqrt(max(radicand, 0.0))


def c_max_closed_form(cosines: Sequence[float], eta: float) -> float:
    total = 2.0 * eta
    for c in cosines:
        total += max_a_norm(c, eta) - (1.0 + eta**2 * c)
    return total


def _c_curve(cosines, etas: np.ndarray) -> np.ndarray:
    """Vectorized closed form; ``-inf`` wherever some pair is incompatible."""
    etas = np.asarray(etas, dtype=float)
    out = 2.0 * etas
    feasible = np.ones_like(etas, dtype=bool)
    for c in cosines:
        radicand = _pair_radicand(c, etas)
        feasible &= radicand >= -TOL_ALG
        out = out + np.sqrt(np.clip(radicand, 0.0, None)) - (1.0 + etas**2 * c)
    return np.where(feasible, out, -np.inf)


def optimal_joint_params(cos_ij: float, eta: float, plane_normal: UnitAxis) -> JointParams:
    norm = max_a_norm(cos_ij, eta)
    return JointParams(1.0 + eta**2 * cos_ij, norm * plane_normal.vec)


def _any_perpendicular(v: np.ndarray) -> np.ndarray:
    trial = np.array([1.0, 0.0, 0.0]) if abs(v[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    w = np.cross(v, trial)
    return w / np.linalg.norm(w)


def plane_normal(axes: Sequence[UnitAxis]) -> UnitAxis | None:
    """Unit normal of the plane holding all three axes, or None if they are not coplanar.

    The orientation is ``n1 x n2`` when that is nonzero, which gives ``+y``
    for axes in the ZX plane ordered by increasing polar angle.
    """
    vecs = [a.vec for a in axes]
    for i, j in PAIRS:
        w = np.cross(vecs[i], vecs[j])
        if np.linalg.norm(w) > COPLANAR_TOL:
            w = w / np.linalg.norm(w)
            if all(abs(float(w @ v)) <= COPLANAR_TOL for v in vecs):
                return UnitAxis.from_vector(w)
            return None
    return UnitAxis.from_vector(_any_perpendicular(vecs[0]))


def optimal_params_for_triple(axes: Sequence[UnitAxis], eta: float) -> list[JointParams]:
    """Saturating joint parameters for each pair, ordered (12, 13, 23).

    Coplanar axes share the plane normal.  Otherwise each ``a_ij`` follows
    ``n_i x n_j``, flipped where needed to point along the (12) direction;
    that choice is valid but carries no optimality guarantee.
    """
    normal = plane_normal(axes)
    params = []
    reference = None
    for i, j in PAIRS:
        cos_ij = float(np.clip(axes[i].dot(axes[j]), -1.0, 1.0))
        if normal is not None:
            direction = normal
        else:
            w = np.cross(axes[i].vec, axes[j].vec)
            w = w / np.linalg.norm(w) if np.linalg.norm(w) > COPLANAR_TOL else _any_perpendicular(axes[i].vec)
            if reference is None:
                reference = w
            elif float(w @ reference) < 0:
                w = -w
            direction = UnitAxis.from_vector(w)
        params.append(optimal_joint_params(cos_ij, eta, direction))
    return params


# -- grid oracle --------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    n_magnitude: int = 10_000
    n_directions: int = 1_000
    n_magnitude_3d: int = 200


def _pair_axes(cos_ij: float) -> tuple[np.ndarray, np.ndarray]:
    theta = math.acos(max(-1.0, min(1.0, cos_ij)))
    return np.array([0.0, 0.0, 1.0]), np.array([math.sin(theta), 0.0, math.cos(theta)])


def _pair_effect_blocks(ni, nj, eta, alpha, a):
    """Scalar parts ``c`` (shape (4, K)) and vector parts (shape (4, K, 3)) of the joint effects."""
    half = np.asarray(alpha) / 2.0
    c = np.stack([half, 1.0 - half, 1.0 - half, half])
    v = np.stack([
        0.5 * (eta * (ni + nj) - a),
        0.5 * (eta * (ni - nj) + a),
        0.5 * (eta * (nj - ni) + a),
        0.5 * (-eta * (ni + nj) - a),
    ])
    return c, v


def _smallest_alpha(ni, nj, eta, a):
    """Least ``alpha`` keeping the (+,+) and (-,-) effects positive, from their Bloch vectors."""
    _, v = _pair_effect_blocks(ni, nj, eta, np.zeros(len(a)), a)
    return 2.0 * np.maximum(np.linalg.norm(v[0], axis=-1), np.linalg.norm(v[3], axis=-1))


def _matrix_valid(c, v, tol=TOL_ALG):
    """Eigenvalue check on dense 2x2 matrices; independent of the Bloch validity rule."""
    mats = np.empty(c.shape + (2, 2), dtype=complex)
    mats[..., 0, 0] = 0.5 * (c + v[..., 2])
    mats[..., 1, 1] = 0.5 * (c - v[..., 2])
    mats[..., 0, 1] = 0.5 * (v[..., 0] - 1j * v[..., 1])
    mats[..., 1, 0] = 0.5 * (v[..., 0] + 1j * v[..., 1])
    eig = np.linalg.eigvalsh(mats)
    return np.all((eig >= -tol) & (eig <= 1.0 + tol), axis=(0, -1))


def _bloch_valid(c, v, tol=TOL_ALG):
    norm = np.linalg.norm(v, axis=-1)
    return np.all((norm <= c + tol) & (c <= 2.0 - norm + tol), axis=0)


def _pair_best_perpendicular(cos_ij, eta, n_magnitude):
    ni, nj = _pair_axes(cos_ij)
    normal = np.array([0.0, 1.0, 0.0])
    x = np.linspace(0.0, 1.0, n_magnitude)
    a = x[:, None] * normal
    alpha = _smallest_alpha(ni, nj, eta, a)
    c, v = _pair_effect_blocks(ni, nj, eta, alpha, a)
    ok = _matrix_valid(c, v)
    if not ok.any():
        raise IncompatiblePair(f"no feasible joint parameters for cos(theta)={cos_ij!r} at eta={eta!r}")
    return float(np.max((x - alpha)[ok]))


def c_max_brute(cosines: Sequence[float], eta: float, grid: GridSpec = GridSpec()) -> float:
    """Grid-search maximum of ``C`` with each ``a_ij`` normal to the axes' plane.

    For every candidate length ``|a_ij|`` the smallest admissible ``alpha_ij``
    is read off the joint effects and the full POVM is then checked through
    dense eigenvalues.  With all ``a_ij`` parallel ``|a| = sum |a_ij|``, so the
    three pairs are maximized independently.
    """
    for c in cosines:
        if not pairwise_compatible(eta, c):
            raise IncompatiblePair(f"pair with cos(theta)={c!r} is not jointly measurable at eta={eta!r}")
    return 2.0 * eta + sum(_pair_best_perpendicular(c, eta, grid.n_magnitude) for c in cosines)


def fibonacci_sphere(n: int) -> np.ndarray:
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    r = np.sqrt(1.0 - z**2)
    phi = math.pi * (3.0 - math.sqrt(5.0)) * k
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def sampled_direction_bound(cosines: Sequence[float], eta: float, grid: GridSpec = GridSpec()) -> float:
    """Upper bound on ``C`` over ``a_ij`` drawn from quasi-uniform 3-D directions.

    Uses ``|a| <= sum |a_ij|``, so the per-pair maxima add up to a bound valid
    for every combination of sampled directions.
    """
    dirs = fibonacci_sphere(grid.n_directions)
    x = np.linspace(0.0, 1.0, grid.n_magnitude_3d)
    a = (x[None, :, None] * dirs[:, None, :]).reshape(-1, 3)
    xs = np.tile(x, grid.n_directions)
    total = 2.0 * eta
    for cos_ij in cosines:
        ni, nj = _pair_axes(cos_ij)
        alpha = _smallest_alpha(ni, nj, eta, a)
        c, v = _pair_effect_blocks(ni, nj, eta, alpha, a)
        ok = _bloch_valid(c, v)
        if not ok.any():
            raise IncompatiblePair(f"no feasible sample for cos(theta)={cos_ij!r} at eta={eta!r}")
        total += float(np.max((xs - alpha)[ok]))
    return total


# -- sharpness -----------------------------------------------------------------


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, tol: float = ETA_TOL,
                       max_iter: int = 200) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
    candidates = [(f1, x1), (f2, x2), (f(lo), lo), (f(hi), hi)]
    fx, x = max(candidates)
    return x, fx


@dataclass(frozen=True)
class EtaOptimum:
    eta: float
    c_max: float
    open_boundary: bool

    @property
    def s_max(self) -> float:
        return self.c_max / 6.0

    @property
    def lsw_bound(self) -> float:
        return lsw_bound(self.eta)

    @property
    def r3_quantum(self) -> float:
        return self.lsw_bound + self.s_max


def optimize_eta(cosines: Sequence[float], respect_triplewise_incompatibility: bool = True,
                 n_scan: int = 64) -> EtaOptimum:
    """Best sharpness for fixed axes.

    With ``respect_triplewise_incompatibility`` the search runs over the
    Specker window ``(eta_l, eta_u]``.  Its bottom end is open, so a maximum
    found there is a supremum: it is reported at ``eta_l`` with
    ``open_boundary=True``.  Otherwise the search covers ``(0, eta_u]``.
    """
    cosines = tuple(float(c) for c in cosines)
    hi = eta_upper_from_cosines(cosines)
    if respect_triplewise_incompatibility:
        lo = eta_lower_from_cosines(cosines)
        if not lo < hi:
            raise EmptyWindow(f"Specker window ({lo!r}, {hi!r}] is empty")
    else:
        lo = ETA_FLOOR
    grid = np.linspace(lo, hi, n_scan)
    values = _c_curve(cosines, grid)
    k = int(np.argmax(values))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, n_scan - 1)]

    def f(e):
        return float(_c_curve(cosines, np.array([e]))[0])

    eta, c = golden_section_max(f, a, b)
    open_boundary = bool(respect_triplewise_incompatibility and eta - lo <= 10 * ETA_TOL)
    if open_boundary:
        eta, c = lo, f(lo)
    return EtaOptimum(float(eta), float(c), open_boundary)


# -- geometry ------------------------------------------------------------------


@dataclass(frozen=True)
class OptimalConfig:
    eta: float
    axes: tuple
    params: tuple
    c_max: float
    s_max: float
    optimal_state: QubitState
    theta12: float
    theta13: float
    open_boundary: bool

    @property
    def cosines(self):
        return MeasurementTriple(self.axes).cosines


def coplanar_axes(theta12: float, theta13: float) -> tuple[UnitAxis, UnitAxis, UnitAxis]:
    """``n1 = z``, ``n2`` at ``theta12`` and ``n3`` at ``theta13`` on the other side (ZX plane)."""
    return (
        UnitAxis(0.0, 0.0, 1.0),
        UnitAxis(math.sin(theta12), 0.0, math.cos(theta12)),
        UnitAxis(-math.sin(theta13), 0.0, math.cos(theta13)),
    )


def build_config(axes: Sequence[UnitAxis], opt: EtaOptimum, theta12=float("nan"),
                 theta13=float("nan")) -> OptimalConfig:
    params = tuple(optimal_params_for_triple(axes, opt.eta))
    a_total = np.sum([p.vec for p in params], axis=0)
    norm = np.linalg.norm(a_total)
    state = QubitState(a_total / norm) if norm > TOL_ALG else QubitState.maximally_mixed()
    return OptimalConfig(opt.eta, tuple(axes), params, opt.c_max, opt.s_max, state,
                         theta12, theta13, opt.open_boundary)


def optimize_geometry(resolution: int, eta_mode: str = "constrained") -> OptimalConfig:
    """Sweep coplanar triples on a (theta12, theta13) grid and keep the best cell.

    Grid angles sit at half-step offsets inside (0, pi).  Equal maxima keep
    the lexicographically first cell.
    """
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    if eta_mode not in ("constrained", "relaxed"):
        raise ValueError(f"unknown eta mode {eta_mode!r}")
    constrained = eta_mode == "constrained"
    thetas = (np.arange(resolution) + 0.5) * math.pi / resolution
    best = None
    for t12 in thetas:
        for t13 in thetas:
            cosines = (math.cos(t12), math.cos(t13), math.cos(t12 + t13))
            try:
                opt = optimize_eta(cosines, constrained)
            except EmptyWindow:
                continue
            if best is None or opt.c_max > best[0].c_max:
                best = (opt, t12, t13)
    if best is None:
        raise EmptyWindow("no grid cell has a nonempty Specker window")
    opt, t12, t13 = best
    return build_config(coplanar_axes(t12, t13), opt, float(t12), float(t13))


def trine_axes() -> tuple[UnitAxis, UnitAxis, UnitAxis]:
    return coplanar_axes(2 * math.pi / 3, 2 * math.pi / 3)


def orthogonal_axes() -> tuple[UnitAxis, UnitAxis, UnitAxis]:
    return UnitAxis(1.0, 0.0, 0.0), UnitAxis(0.0, 1.0, 0.0), UnitAxis(0.0, 0.0, 1.0)
