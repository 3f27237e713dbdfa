import math

import numpy as np
import pytest

from specker.errors import InvalidJointParams, MismatchedSharpness
from specker.joint_measurability import pair_eta_max
from specker.joint_povm import (
    JointParams,
    JointPovm,
    anticorrelation_effect,
    check_marginals,
    construct_joint,
    is_valid_povm,
    validity_window,
)
from specker.optimizer import trine_axes
from specker.qubit import TOL_ALG, NoisyObservable, QubitEffect, UnitAxis, as_matrix, observable_effects

SQ13_9 = math.sqrt(13) / 9


def trine_pair(eta=2 / 3):
    n1, n2, _ = trine_axes()
    return NoisyObservable(n1, eta), NoisyObservable(n2, eta)


def random_valid_case(rng):
    """Random pair, sharpness and (alpha, a) inside the validity window."""
    while True:
        vi, vj = rng.normal(size=(2, 3))
        ni = UnitAxis.from_vector(vi / np.linalg.norm(vi))
        nj = UnitAxis.from_vector(vj / np.linalg.norm(vj))
        eta = rng.uniform(0, pair_eta_max(ni.dot(nj)))
        mi, mj = NoisyObservable(ni, eta), NoisyObservable(nj, eta)
        a = rng.normal(size=3)
        a *= rng.uniform(0, 1) / np.linalg.norm(a)
        lo, hi = validity_window(mi, mj, a)
        if lo <= hi:
            return mi, mj, JointParams(rng.uniform(lo, hi), a)


def test_trine_optimal_parameters_give_valid_povm():
    mi, mj = trine_pair()
    g = construct_joint(mi, mj, JointParams(7 / 9, (0, SQ13_9, 0)))
    assert is_valid_povm(g)
    assert check_marginals(g, mi, mj)


def test_zero_sharpness_joint_is_uniform():
    mi, mj = trine_pair(0.0)
    g = construct_joint(mi, mj, JointParams(1.0, (0, 0, 0)))
    for e in g.effects:
        np.testing.assert_allclose(as_matrix(e), np.eye(2) / 4, atol=TOL_ALG)


def test_window_with_zero_a_is_direct_substitution():
    eta = 0.6
    ni = UnitAxis(0, 0, 1)
    nj = UnitAxis.from_angles(1.0, 0.4)
    cos = ni.dot(nj)
    lo, hi = validity_window(NoisyObservable(ni, eta), NoisyObservable(nj, eta), (0, 0, 0))
    assert lo == pytest.approx(math.sqrt(2) * eta * math.sqrt(1 + cos), abs=TOL_ALG)
    assert hi == pytest.approx(2 - math.sqrt(2) * eta * math.sqrt(1 - cos), abs=TOL_ALG)


def test_trine_window_collapses_to_seven_ninths():
    # closed form: sqrt(eta^2 + |a|^2) = 1 - eta^2/2 on both sides when a is normal to the plane
    mi, mj = trine_pair()
    lo, hi = validity_window(mi, mj, (0, SQ13_9, 0))
    assert lo == pytest.approx(7 / 9, abs=1e-12)
    assert hi == pytest.approx(7 / 9, abs=1e-12)
    assert 1 + (2 / 3) ** 2 * mi.axis.dot(mj.axis) == pytest.approx(7 / 9)


def test_antiparallel_sharp_pair_window():
    # n_j = -n_i: the (+,+) outcome must vanish, so alpha is pinned to 0
    z, mz = UnitAxis(0, 0, 1), UnitAxis(0, 0, -1)
    lo, hi = validity_window(NoisyObservable(z, 1.0), NoisyObservable(mz, 1.0), (0, 0, 0))
    assert lo == pytest.approx(0.0, abs=TOL_ALG)
    assert hi == pytest.approx(0.0, abs=TOL_ALG)


def test_anticorrelation_effect_examples():
    mi, mj = trine_pair(0.0)
    g = construct_joint(mi, mj, JointParams(1.0, (0, 0, 0)))
    assert anticorrelation_effect(g).isclose(QubitEffect(1.0, (0, 0, 0)))

    mi, mj = trine_pair()
    g = construct_joint(mi, mj, JointParams(7 / 9, (0, SQ13_9, 0)))
    assert anticorrelation_effect(g).isclose(QubitEffect(11 / 9, (0, SQ13_9, 0)))


def test_anticorrelation_effect_matches_matrix_sum():
    rng = np.random.default_rng(10)
    for _ in range(100):
        mi, mj, p = random_valid_case(rng)
        g = construct_joint(mi, mj, p)
        np.testing.assert_allclose(
            as_matrix(anticorrelation_effect(g)), as_matrix(g.g_pm) + as_matrix(g.g_mp), atol=TOL_ALG
        )


def test_invalid_params_report_slack():
    mi, mj = trine_pair()
    with pytest.raises(InvalidJointParams) as info:
        construct_joint(mi, mj, JointParams(0.7, (0, SQ13_9, 0)))
    assert info.value.slacks["lower"] == pytest.approx(7 / 9 - 0.7)
    with pytest.raises(InvalidJointParams) as info:
        construct_joint(mi, mj, JointParams(0.9, (0, SQ13_9, 0)))
    assert "upper" in info.value.slacks


def test_mismatched_sharpness():
    n1, n2, _ = trine_axes()
    with pytest.raises(MismatchedSharpness):
        construct_joint(NoisyObservable(n1, 0.6), NoisyObservable(n2, 0.7), JointParams(1.0))


def test_perturbed_effect_breaks_marginals():
    mi, mj = trine_pair()
    g = construct_joint(mi, mj, JointParams(7 / 9, (0, SQ13_9, 0)))
    bumped = QubitEffect(g.g_pp.c, g.g_pp.vec + np.array([0, 1e-6, 0]))
    assert not check_marginals(JointPovm(bumped, g.g_pm, g.g_mp, g.g_mm), mi, mj)


def test_random_valid_params_satisfy_all_checks():
    rng = np.random.default_rng(11)
    ident = np.eye(2)
    for _ in range(1_000):
        mi, mj, p = random_valid_case(rng)
        g = construct_joint(mi, mj, p)
        mats = [as_matrix(e) for e in g.effects]
        np.testing.assert_allclose(sum(mats), ident, atol=TOL_ALG)
        for m in mats:
            eig = np.linalg.eigvalsh(m)
            assert eig.min() >= -1e-12 and eig.max() <= 1 + 1e-12
        ei_p, ei_m = (as_matrix(e) for e in observable_effects(mi))
        ej_p, ej_m = (as_matrix(e) for e in observable_effects(mj))
        np.testing.assert_allclose(mats[0] + mats[1], ei_p, atol=TOL_ALG)
        np.testing.assert_allclose(mats[2] + mats[3], ei_m, atol=TOL_ALG)
        np.testing.assert_allclose(mats[0] + mats[2], ej_p, atol=TOL_ALG)
        np.testing.assert_allclose(mats[1] + mats[3], ej_m, atol=TOL_ALG)


def test_window_is_exactly_the_constructible_set():
    rng = np.random.default_rng(12)
    checked = 0
    while checked < 300:
        mi, mj, p = random_valid_case(rng)
        lo, hi = validity_window(mi, mj, p.a)
        for alpha, ok in ((lo + 0.3 * (hi - lo), True), (lo - 1e-6, False), (hi + 1e-6, False)):
            effects_ok = _all_effects_positive(mi, mj, alpha, p.vec)
            assert effects_ok is ok
            if ok:
                construct_joint(mi, mj, JointParams(alpha, p.a))
            else:
                with pytest.raises(InvalidJointParams):
                    construct_joint(mi, mj, JointParams(alpha, p.a))
        checked += 1


def _all_effects_positive(mi, mj, alpha, a):
    # dense-matrix construction, independent of the closed-form window
    eta = mi.eta
    ni, nj = mi.axis.vec, mj.axis.vec
    blocks = [
        (alpha / 2, 0.5 * (eta * (ni + nj) - a)),
        (1 - alpha / 2, 0.5 * (eta * (ni - nj) + a)),
        (1 - alpha / 2, 0.5 * (eta * (nj - ni) + a)),
        (alpha / 2, 0.5 * (-eta * (ni + nj) - a)),
    ]
    for c, v in blocks:
        eig = np.linalg.eigvalsh(as_matrix(QubitEffect(c, v)))
        if eig.min() < -1e-12 or eig.max() > 1 + 1e-12:
            return False
    return True


def test_swapping_observables_transposes_outcomes():
    rng = np.random.default_rng(13)
    for _ in range(100):
        mi, mj, p = random_valid_case(rng)
        g_ij = construct_joint(mi, mj, p)
        g_ji = construct_joint(mj, mi, p)
        for e1, e2 in zip(g_ji.effects, g_ij.transpose().effects):
            assert e1.isclose(e2)


def test_component_vectors_satisfy_marginal_identities():
    rng = np.random.default_rng(14)
    for _ in range(100):
        mi, mj, p = random_valid_case(rng)
        g = construct_joint(mi, mj, p)
        a_pp, a_pm, a_mp, a_mm = (e.vec for e in g.effects)
        eta, ni, nj = mi.eta, mi.axis.vec, mj.axis.vec
        np.testing.assert_allclose(a_pp + a_pm, eta * ni, atol=TOL_ALG)
        np.testing.assert_allclose(a_mp + a_mm, -eta * ni, atol=TOL_ALG)
        np.testing.assert_allclose(a_pp + a_mp, eta * nj, atol=TOL_ALG)
        np.testing.assert_allclose(a_pm + a_mm, -eta * nj, atol=TOL_ALG)
        np.testing.assert_allclose(a_pm + a_mp, p.vec, atol=TOL_ALG)
