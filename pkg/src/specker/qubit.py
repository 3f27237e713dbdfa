"""Bloch-form algebra for qubit states, effects and binary noisy observables.

Every operator is stored as ``E = (c I + v . sigma) / 2`` with a real scalar
``c`` and a real 3-vector ``v``.  Dense 2x2 matrices are produced only by
:func:`as_matrix`, which exists so the Bloch-form arithmetic can be checked
against plain linear algebra.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidAxis, InvalidSharpness, SpeckerError

TOL_ALG = 1e-12
AXIS_NORM_TOL = 1e-9

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


def _as_vec3(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise SpeckerError(f"expected a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise SpeckerError("vector components must be finite")
    return arr


@dataclass(frozen=True)
class UnitAxis:
    """A direction on the Bloch sphere.

    Inputs whose norm is off by more than ``AXIS_NORM_TOL`` are rejected;
    anything closer is renormalized to unit length.
    """

    x: float
    y: float
    z: float

    def __post_init__(self):
        vec = _as_vec3((self.x, self.y, self.z))
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > AXIS_NORM_TOL:
            raise InvalidAxis(f"axis norm {norm!r} is not 1 (tolerance {AXIS_NORM_TOL})")
        vec = vec / norm
        object.__setattr__(self, "x", float(vec[0]))
        object.__setattr__(self, "y", float(vec[1]))
        object.__setattr__(self, "z", float(vec[2]))

    @classmethod
    def from_vector(cls, v) -> "UnitAxis":
        vec = _as_vec3(v)
        return cls(*vec)

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "UnitAxis":
        return cls(np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta))

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def dot(self, other: "UnitAxis") -> float:
        return float(self.vec @ other.vec)


@dataclass(frozen=True)
class QubitEffect:
    """Operator ``(c I + v . sigma) / 2``; not necessarily a valid effect."""

    c: float
    v: tuple = field(default=(0.0, 0.0, 0.0))

    def __post_init__(self):
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "v", tuple(float(t) for t in _as_vec3(self.v)))

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.v)

    @property
    def eigenvalues(self) -> tuple[float, float]:
        norm = float(np.linalg.norm(self.vec))
        return (self.c - norm) / 2, (self.c + norm) / 2

    def __add__(self, other: "QubitEffect") -> "QubitEffect":
        return QubitEffect(self.c + other.c, self.vec + other.vec)

    def isclose(self, other: "QubitEffect", tol: float = TOL_ALG) -> bool:
        return abs(self.c - other.c) <= tol and bool(np.all(np.abs(self.vec - other.vec) <= tol))


@dataclass(frozen=True)
class QubitState:
    """Density operator ``(I + r . sigma) / 2`` given by its Bloch vector."""

    r: tuple

    def __post_init__(self):
        vec = _as_vec3(self.r)
        if np.linalg.norm(vec) > 1 + TOL_ALG:
            raise SpeckerError(f"Bloch vector norm {np.linalg.norm(vec)!r} exceeds 1")
        object.__setattr__(self, "r", tuple(float(t) for t in vec))

    @classmethod
    def from_params(cls, q: float, theta: float, phi: float) -> "QubitState":
        """Mixture ``q |psi><psi| + (1 - q)(I - |psi><psi|)`` with ``psi`` at (theta, phi)."""
        if not 0.0 <= q <= 1.0:
            raise SpeckerError(f"q must lie in [0, 1], got {q!r}")
        n = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
        return cls((2 * q - 1) * n)

    @classmethod
    def maximally_mixed(cls) -> "QubitState":
        return cls((0.0, 0.0, 0.0))

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.r)

    @property
    def is_pure(self) -> bool:
        return abs(float(np.linalg.norm(self.vec)) - 1.0) <= TOL_ALG

    def density_matrix(self) -> np.ndarray:
        return as_matrix(QubitEffect(1.0, self.r))


@dataclass(frozen=True)
class NoisyObservable:
    """Binary unsharp spin measurement ``E_pm = (I pm eta n . sigma) / 2``."""

    axis: UnitAxis
    eta: float

    def __post_init__(self):
        eta = float(self.eta)
        if not 0.0 <= eta <= 1.0:
            raise InvalidSharpness(f"sharpness must lie in [0, 1], got {eta!r}")
        object.__setattr__(self, "eta", eta)

    def effects(self) -> tuple[QubitEffect, QubitEffect]:
        return observable_effects(self)


@dataclass(frozen=True)
class Povm:
    effects: tuple

    def __post_init__(self):
        object.__setattr__(self, "effects", tuple(self.effects))

    def is_valid(self, tol: float = TOL_ALG) -> bool:
        if not all(effect_validity(e, tol) for e in self.effects):
            return False
        total = sum_effects(self.effects)
        return total.isclose(QubitEffect(2.0, (0.0, 0.0, 0.0)), tol)


def sum_effects(effects: Sequence[QubitEffect]) -> QubitEffect:
    c = sum(e.c for e in effects)
    v = np.sum([e.vec for e in effects], axis=0) if effects else np.zeros(3)
    return QubitEffect(c, v)


def effect_validity(e: QubitEffect, tol: float = TOL_ALG) -> bool:
    """True iff both eigenvalues ``(c -+ |v|)/2`` lie in [0, 1] (up to ``tol``)."""
    norm = float(np.linalg.norm(e.vec))
    return norm <= e.c + tol and e.c <= 2.0 - norm + tol


def observable_effects(m: NoisyObservable) -> tuple[QubitEffect, QubitEffect]:
    if not 0.0 <= m.eta <= 1.0:
        raise InvalidSharpness(f"sharpness must lie in [0, 1], got {m.eta!r}")
    v = m.eta * m.axis.vec
    return QubitEffect(1.0, v), QubitEffect(1.0, -v)


def born_probability(s: QubitState, e: QubitEffect) -> float:
    return 0.5 * (e.c + float(e.vec @ s.vec))


def as_matrix(e: QubitEffect) -> np.ndarray:
    vx, vy, vz = e.v
    return 0.5 * (e.c * IDENTITY + vx * PAULI_X + vy * PAULI_Y + vz * PAULI_Z)
