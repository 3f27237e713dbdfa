import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specker.errors import InvalidAxis, InvalidSharpness
from specker.qubit import (
    TOL_ALG,
    NoisyObservable,
    Povm,
    QubitEffect,
    QubitState,
    UnitAxis,
    as_matrix,
    born_probability,
    effect_validity,
    observable_effects,
)

Z = UnitAxis(0, 0, 1)


@pytest.mark.parametrize(
    "c, v, expected",
    [
        (1.0, (0, 0, 1), True),
        (1.0, (0, 0, 2 / 3), True),
        (0.5, (0, 0, 0.8), False),
        (2.0, (0, 0, 0), True),
        (2.1, (0, 0, 0), False),
        (1.5, (0, 0.6, 0), False),
    ],
)
def test_effect_validity_examples(c, v, expected):
    assert effect_validity(QubitEffect(c, v)) is expected


def test_sharp_observable_gives_projectors():
    e_plus, e_minus = observable_effects(NoisyObservable(Z, 1.0))
    np.testing.assert_allclose(as_matrix(e_plus), np.diag([1, 0]), atol=TOL_ALG)
    np.testing.assert_allclose(as_matrix(e_minus), np.diag([0, 1]), atol=TOL_ALG)


def test_pure_noise_observable():
    e_plus, e_minus = observable_effects(NoisyObservable(Z, 0.0))
    for e in (e_plus, e_minus):
        np.testing.assert_allclose(as_matrix(e), np.eye(2) / 2, atol=TOL_ALG)


def test_trine_sharpness_effect():
    e_plus, _ = observable_effects(NoisyObservable(Z, 2 / 3))
    assert e_plus == QubitEffect(1.0, (0, 0, 2 / 3))
    assert effect_validity(e_plus)


@pytest.mark.parametrize("eta", [-0.1, 1.0001, 2.0])
def test_sharpness_out_of_range_rejected(eta):
    with pytest.raises(InvalidSharpness):
        NoisyObservable(Z, eta)


def test_born_probability_examples():
    e = QubitEffect(0.7, (0.1, -0.2, 0.3))
    assert born_probability(QubitState.maximally_mixed(), e) == pytest.approx(0.35, abs=TOL_ALG)
    eta = 0.4
    e_plus, _ = observable_effects(NoisyObservable(Z, eta))
    assert born_probability(QubitState((0, 0, 1)), e_plus) == pytest.approx((1 + eta) / 2, abs=TOL_ALG)


def test_as_matrix_examples():
    np.testing.assert_allclose(as_matrix(QubitEffect(2, (0, 0, 0))), np.eye(2))
    np.testing.assert_allclose(as_matrix(QubitEffect(1, (0, 0, 1))), np.diag([1, 0]))
    np.testing.assert_allclose(as_matrix(QubitEffect(1, (1, 0, 0))), [[0.5, 0.5], [0.5, 0.5]])


def test_axis_norm_checks():
    with pytest.raises(InvalidAxis):
        UnitAxis(0, 0, 1.001)
    axis = UnitAxis(0, 0, 1 + 5e-10)
    assert axis.z == 1.0


def test_state_parameterization():
    q, theta, phi = 0.8, 1.1, 2.3
    s = QubitState.from_params(q, theta, phi)
    n = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    np.testing.assert_allclose(s.vec, 0.6 * n, atol=TOL_ALG)
    assert QubitState.from_params(1.0, theta, phi).is_pure
    assert not s.is_pure


def test_state_density_matrix_matches_projector():
    theta, phi = 0.7, 1.9
    psi = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
    s = QubitState.from_params(1.0, theta, phi)
    np.testing.assert_allclose(s.density_matrix(), np.outer(psi, psi.conj()), atol=1e-12)


def test_povm_sum_to_identity():
    m = NoisyObservable(UnitAxis.from_angles(0.3, 1.2), 0.8)
    assert Povm(m.effects()).is_valid()
    assert not Povm((m.effects()[0],)).is_valid()


def _random_effects(rng, n):
    c = rng.uniform(-0.5, 2.5, n)
    dirs = rng.normal(size=(n, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    v = dirs * rng.uniform(0, 1.5, n)[:, None]
    return c, v


def test_validity_matches_matrix_eigenvalues_on_random_effects():
    rng = np.random.default_rng(1)
    c, v = _random_effects(rng, 10_000)
    mismatches = 0
    for ck, vk in zip(c, v):
        e = QubitEffect(ck, vk)
        eig = np.linalg.eigvalsh(as_matrix(e))
        by_matrix = bool(eig.min() >= -TOL_ALG and eig.max() <= 1 + TOL_ALG)
        mismatches += by_matrix != effect_validity(e)
    assert mismatches == 0


unit = st.floats(-1, 1, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(st.tuples(unit, unit, unit).filter(lambda t: np.linalg.norm(t) > 1e-3),
       st.tuples(unit, unit, unit).filter(lambda t: np.linalg.norm(t) <= 1),
       st.floats(0, 1))
def test_outcome_probabilities_sum_to_one(direction, r, eta):
    axis = UnitAxis.from_vector(np.array(direction) / np.linalg.norm(direction))
    e_plus, e_minus = observable_effects(NoisyObservable(axis, eta))
    s = QubitState(r)
    total = born_probability(s, e_plus) + born_probability(s, e_minus)
    assert abs(total - 1) <= TOL_ALG


def test_bloch_probability_matches_trace_on_random_samples():
    rng = np.random.default_rng(2)
    c, v = _random_effects(rng, 2_000)
    r = rng.normal(size=(2_000, 3))
    r *= (rng.uniform(0, 1, 2_000) / np.linalg.norm(r, axis=1))[:, None]
    for ck, vk, rk in zip(c, v, r):
        e, s = QubitEffect(ck, vk), QubitState(rk)
        trace = np.trace(s.density_matrix() @ as_matrix(e))
        assert abs(trace.imag) <= TOL_ALG
        assert abs(trace.real - born_probability(s, e)) <= TOL_ALG
