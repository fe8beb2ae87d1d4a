import math
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blockspin.observables import (
    NonUniqueMaximizer,
    R_function,
    R_product_form,
    R_projector_form,
    free_energy_with_field,
    limit_correlation,
    magnetisation,
    profile_z,
)
from blockspin.variational import TwoBlockParams, beta_crit, free_energy

import bruteforce as bf

BETA_C3 = 4 * math.log(2)


def test_R_trivial_cases():
    assert R_function([0.0, 0.0, 0.0], [0.5, 0.3, 0.2]) == pytest.approx(1.0, abs=1e-14)
    assert R_function([1.0, 0.0, -1.0], [1 / 3] * 3) == pytest.approx(1.0, abs=1e-12)
    assert R_function([2.0], [0.7]) == pytest.approx(math.exp(1.4), rel=1e-14)


def test_R_constant_z_general_w():
    # R(w; s, ..., s) = exp(s * sum w)
    w = [0.9, 0.2, -0.4, 1.5]
    assert R_function(w, [0.25] * 4) == pytest.approx(math.exp(0.25 * sum(w)), rel=1e-12)


def test_R_two_by_two_hand_value():
    w, z = [1.0, 0.0], [0.8, 0.2]
    expected = (math.exp(0.8) - math.exp(0.2)) / 0.6
    assert R_function(w, z) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_R_det_vs_product(seed):
    rng = np.random.default_rng(seed)
    for _ in range(20):
        r = int(rng.integers(2, 6))
        h = float(rng.uniform(-3, 3))
        z = rng.dirichlet(np.ones(r))
        assert R_function(h * np.arange(r), z) == pytest.approx(R_product_form(h, z), rel=1e-10)


@settings(max_examples=25)
@given(st.integers(2, 4), st.data())
def test_R_matches_schur_series_with_coincidences(r, data):
    # entries from a small pool so that coincidences are frequent
    w = data.draw(st.lists(st.sampled_from([-1.5, -0.5, 0.0, 0.5, 1.0, 2.0]), min_size=r, max_size=r))
    z = data.draw(st.lists(st.sampled_from([-0.4, 0.0, 0.1, 0.3, 0.7]), min_size=r, max_size=r))
    assert R_function(w, z) == pytest.approx(bf.R_by_schur_series(w, z, dps=25).real, rel=1e-12)


def test_R_complex_confluent():
    w, z = [1j, 1j, 0.0], [0.3, 0.3, 0.4]
    assert abs(R_function(w, z) - bf.R_by_schur_series(w, z)) < 1e-13


def test_R_near_confluent_is_continuous():
    z = np.array([0.5, 0.3, 0.2])
    w0 = np.array([0.6, 0.6, -1.2])
    exact = R_function(w0, z)
    for eps in (1e-6, 1e-7, 1e-9):
        assert R_function(w0 + [eps, 0, 0], z) == pytest.approx(exact, rel=1e-5)


@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3),
       st.lists(st.floats(0, 1), min_size=3, max_size=3))
def test_R_permutation_invariance(w, z):
    base = R_function(w, z)
    for perm in permutations(range(3)):
        pw = [w[i] for i in perm]
        assert R_function(pw, z) == pytest.approx(base, rel=1e-9, abs=1e-12)
        pz = [z[i] for i in perm]
        assert R_function(w, pz) == pytest.approx(base, rel=1e-9, abs=1e-12)


@given(st.lists(st.floats(-3, 3), min_size=2, max_size=4), st.data())
def test_R_real_and_positive_for_real_input(w, data):
    z = data.draw(st.lists(st.floats(-1, 1), min_size=len(w), max_size=len(w)))
    val = R_function(w, z)
    assert isinstance(val, float)
    # HCIZ-type integral of a positive function
    assert val > 0


def test_R_complex_w():
    val = R_function([1j, 0.0], [0.6, 0.4])
    expected = (np.exp(0.6j) - np.exp(0.4j)) / (1j * 0.2)
    assert abs(val - expected) < 1e-12


def test_projector_form_small_h():
    assert R_projector_form(1e-12, 0.4, 3) == pytest.approx(1.0, abs=1e-10)
    assert R_projector_form(0.0, 0.4, 3) == pytest.approx(1.0)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_projector_form_vs_R(r):
    z = np.full(r, 0.6 / (r - 1) * 0.5)
    z[0] = 1 - z[1:].sum()
    u = z[0] - z[1]
    for h in (0.5, -1.7, 3.0):
        w = np.zeros(r)
        w[0] = h
        assert R_function(w, z) == pytest.approx(R_projector_form(h, u, r), rel=1e-10)


def test_profile_z():
    x = np.array([0.3, 0.1, 0.1])
    y = np.array([0.1, 0.2, 0.2])
    assert np.allclose(profile_z(x, y, "AB"), [0.4, 0.3, 0.3])
    assert np.allclose(profile_z(x, y, "WB"), [0.2, -0.1, -0.1])
    with pytest.raises(ValueError):
        profile_z(x, y, "XY")


@pytest.mark.parametrize("kind", ["AB", "WB"])
def test_correlation_is_one_below_transition(kind):
    p = TwoBlockParams(3, 1.0, 0.5, 1.0, 0.4, 1.0)
    assert limit_correlation(p, kind, [1.2, 0.3, -1.5]) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("r", [2, 3])
def test_correlation_matches_projector_form(r):
    bc = beta_crit(1, 1, 1, 0.5, r).value
    p = TwoBlockParams(r, 1.0, 1.0, 1.0, 0.5, 1.5 * bc)
    w = np.zeros(r)
    w[0] = 0.8
    from blockspin.variational import maximize_F
    x, y = maximize_F(p).point
    z = profile_z(x, y, "AB")
    assert limit_correlation(p, "AB", w) == pytest.approx(R_projector_form(0.8, z[0] - z[1], r), rel=1e-8)


def test_correlation_reports_multiplicity():
    p = TwoBlockParams(3, 1.0, 1.0, 1.0, 0.5, BETA_C3)
    with pytest.raises(NonUniqueMaximizer) as info:
        limit_correlation(p, "AB", [1.0, 0.0, -1.0])
    assert len(info.value.candidates) == 2
    assert min(info.value.candidates) == pytest.approx(1.0, abs=1e-10)


def test_magnetisation_zero_below_transition():
    p = TwoBlockParams(3, 1.0, 1.0, 1.0, 0.5, 2.0)
    m = magnetisation(p, "AB", [1.0, 0.0, -1.0])
    assert abs(m.right) < 1e-9 and abs(m.left) < 1e-9


def test_magnetisation_jump_at_transition():
    p = TwoBlockParams(3, 1.0, 1.0, 1.0, 0.5, BETA_C3)
    m = magnetisation(p, "AB", [1.0, 0.0, -1.0])
    assert m.maximizers == 2
    assert m.right == pytest.approx(0.5, abs=1e-7)
    assert m.left == pytest.approx(-0.5, abs=1e-7)


@given(st.floats(0.3, 6.0), st.floats(-2, 2), st.floats(-2, 2))
def test_right_at_least_left(beta, a, b):
    p = TwoBlockParams(3, a, b, 1.0, 0.4, beta)
    m = magnetisation(p, "AB", [0.7, 0.1, -0.8])
    assert m.right >= m.left - 1e-9


def test_magnetisation_side_argument():
    p = TwoBlockParams(2, 1.0, 1.0, 1.0, 0.5, 3.0)
    both = magnetisation(p, "AB", [0.5, -0.5])
    assert magnetisation(p, "AB", [0.5, -0.5], side="right") == both.right
    assert magnetisation(p, "AB", [-0.5, 0.5], side="left") == both.left
    with pytest.raises(ValueError):
        magnetisation(p, "AB", [0.5, -0.5], side="up")


@pytest.mark.parametrize("kind", ["AB", "WB"])
@pytest.mark.parametrize("beta", [1.0, 3.5])
def test_field_free_energy_at_zero_field(kind, beta):
    p = TwoBlockParams(3, 0.5, -0.5, 1.0, 0.4, beta)
    assert free_energy_with_field(p, kind, [0.5, 0.0, -0.5], 0.0) == pytest.approx(
        free_energy(p, kind=kind), abs=1e-10)


def test_field_free_energy_is_convex_in_h():
    p = TwoBlockParams(2, 1.0, 1.0, 1.0, 0.5, 3.0)
    w = [0.5, -0.5]
    hs = [-0.2, -0.1, 0.0, 0.1, 0.2]
    vals = [free_energy_with_field(p, "AB", w, h) for h in hs]
    second = np.diff(vals, 2)
    assert np.all(second >= -1e-9)


def test_field_derivative_matches_magnetisation_above_transition():
    p = TwoBlockParams(2, 1.0, 1.0, 1.0, 0.5, 3.0)
    w = [0.5, -0.5]
    m = magnetisation(p, "AB", w)
    h = 1e-4
    f0 = free_energy_with_field(p, "AB", w, 0.0)
    fd = (free_energy_with_field(p, "AB", w, h) - f0) / h
    assert fd == pytest.approx(m.right, abs=1e-3)
