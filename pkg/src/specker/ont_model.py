"""The noncontextual model for three noisy binary measurements with pairwise contexts.

Outcomes are relabelled ``+1 -> 0`` and ``-1 -> 1`` here only.  A hidden
variable fixes a bit ``X_k`` per measurement; with probability ``eta`` each
measurement reports that bit, otherwise a fair coin decides.  Pairwise
measurements use the coin to output one of the two anticorrelated outcomes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InconsistentMarginals, SpeckerError
from .joint_measurability import PAIRS
from .qubit import TOL_ALG

TOL_FEAS = 1e-9
DEFAULT_SEED = 0xC0FFEE


@dataclass(frozen=True)
class HiddenAssignment:
    x1: int
    x2: int
    x3: int

    def __post_init__(self):
        for bit in (self.x1, self.x2, self.x3):
            if bit not in (0, 1):
                raise SpeckerError(f"hidden assignment bits must be 0 or 1, got {bit!r}")

    def __getitem__(self, k: int) -> int:
        return (self.x1, self.x2, self.x3)[k]

    @classmethod
    def all(cls) -> list["HiddenAssignment"]:
        return [cls(*bits) for bits in itertools.product((0, 1), repeat=3)]


@dataclass(frozen=True)
class PairwiseDistribution:
    """``p[xi][xj]`` for one pair of binary outcomes."""

    p: tuple

    def __post_init__(self):
        arr = np.asarray(self.p, dtype=float).reshape(2, 2)
        if np.any(arr < -TOL_ALG) or abs(arr.sum() - 1.0) > TOL_ALG:
            raise SpeckerError(f"not a probability table: {arr.tolist()}")
        object.__setattr__(self, "p", tuple(map(tuple, arr.tolist())))

    @property
    def table(self) -> np.ndarray:
        return np.array(self.p)

    @property
    def first_marginal(self) -> np.ndarray:
        return self.table.sum(axis=1)

    @property
    def second_marginal(self) -> np.ndarray:
        return self.table.sum(axis=0)

    @property
    def anticorrelation(self) -> float:
        return self.p[0][1] + self.p[1][0]


def _check_eta(eta):
    if not 0.0 <= eta <= 1.0:
        raise SpeckerError(f"eta must lie in [0, 1], got {eta!r}")


def response_single(eta: float, x: int, lam: HiddenAssignment, k: int) -> float:
    _check_eta(eta)
    return eta * (x == lam[k]) + (1.0 - eta) / 2.0


def response_pair(eta: float, xi: int, xj: int, lam: HiddenAssignment, pair: tuple[int, int]) -> float:
    _check_eta(eta)
    i, j = pair
    deterministic = eta * (xi == lam[i] and xj == lam[j])
    return deterministic + (1.0 - eta) / 2.0 * (xi != xj)


def pair_table(eta: float, lam: HiddenAssignment, pair: tuple[int, int]) -> PairwiseDistribution:
    return PairwiseDistribution([[response_pair(eta, a, b, lam, pair) for b in (0, 1)] for a in (0, 1)])


def model_r3(eta: float, lam: HiddenAssignment) -> float:
    # eta * (#anticorrelated pairs) + 3 (1 - eta), divided once to keep rounding minimal
    anticorrelated = sum(lam[i] != lam[j] for i, j in PAIRS)
    return (eta * anticorrelated + 3.0 * (1.0 - eta)) / 3.0


def model_r3_max(eta: float) -> tuple[float, HiddenAssignment]:
    _check_eta(eta)
    best_value, best_lam = -1.0, None
    for lam in HiddenAssignment.all():
        value = model_r3(eta, lam)
        if value > best_value:
            best_value, best_lam = value, lam
    return best_value, best_lam


# -- joint distribution feasibility -------------------------------------------


def _marginal_system(d12, d13, d23):
    """Linear map from ``p(x1, x2, x3)`` (8 entries, x1 slowest) to the 12 pairwise entries."""
    cells = list(itertools.product((0, 1), repeat=3))
    rows, rhs = [], []
    for (i, j), d in zip(PAIRS, (d12, d13, d23)):
        for a, b in itertools.product((0, 1), repeat=2):
            rows.append([1.0 if (x[i], x[j]) == (a, b) else 0.0 for x in cells])
            rhs.append(d.p[a][b])
    return np.array(rows), np.array(rhs)


def _check_shared_marginals(d12, d13, d23):
    shared = (
        ("X1", d12.first_marginal, d13.first_marginal),
        ("X2", d12.second_marginal, d23.first_marginal),
        ("X3", d13.second_marginal, d23.second_marginal),
    )
    for name, m1, m2 in shared:
        if np.max(np.abs(m1 - m2)) > TOL_ALG:
            raise InconsistentMarginals(f"marginals of {name} disagree: {m1.tolist()} vs {m2.tolist()}")


def joint_feasibility(d12: PairwiseDistribution, d13: PairwiseDistribution,
                      d23: PairwiseDistribution) -> bool:
    """Whether some ``p(x1, x2, x3) >= 0`` reproduces all three pairwise tables.

    Decided by enumerating basic solutions: a nonempty polytope
    ``{p >= 0 : A p = b}`` has a vertex whose support columns of ``A`` are
    linearly independent, and there are only 2^8 supports to try.
    """
    _check_shared_marginals(d12, d13, d23)
    return find_joint_distribution(d12, d13, d23) is not None


def find_joint_distribution(d12, d13, d23):
    A, b = _marginal_system(d12, d13, d23)
    n = A.shape[1]
    for size in range(1, n + 1):
        for support in itertools.combinations(range(n), size):
            cols = A[:, support]
            if np.linalg.matrix_rank(cols) < size:
                continue
            sol, *_ = np.linalg.lstsq(cols, b, rcond=None)
            if np.any(sol < -TOL_FEAS):
                continue
            p = np.zeros(n)
            p[list(support)] = sol
            if np.max(np.abs(A @ p - b)) <= TOL_FEAS:
                return np.clip(p, 0.0, None).reshape(2, 2, 2)
    return None


def model_pair_tables(eta: float, lam: HiddenAssignment) -> tuple[PairwiseDistribution, ...]:
    return tuple(pair_table(eta, lam, pair) for pair in PAIRS)


# -- sampling ------------------------------------------------------------------


def sample_pair_outcomes(eta: float, lam: HiddenAssignment, pair: tuple[int, int], n: int,
                         seed: int = DEFAULT_SEED, stream: int = 0) -> np.ndarray:
    """Empirical ``2x2`` frequency table from ``n`` simulated pairwise measurements.

    Each ``(seed, stream)`` drives its own Philox counter stream, so results
    do not depend on how streams are distributed across workers.
    """
    _check_eta(eta)
    rng = np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, stream]))
    i, j = pair
    informative = rng.random(n) < eta
    coin = rng.integers(0, 2, size=n)
    xi = np.where(informative, lam[i], coin)
    xj = np.where(informative, lam[j], 1 - coin)
    counts = np.zeros((2, 2))
    np.add.at(counts, (xi, xj), 1)
    return counts / n


def quantum_pair_tables(probabilities: Sequence[Sequence[float]]) -> tuple[PairwiseDistribution, ...]:
    """Relabel ``(p_pp, p_pm, p_mp, p_mm)`` per pair into 0/1-indexed tables."""
    return tuple(PairwiseDistribution([[pp, pm], [mp, mm]]) for pp, pm, mp, mm in probabilities)
