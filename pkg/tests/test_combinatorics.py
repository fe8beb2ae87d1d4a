import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from blockspin.combinatorics import (
    conjugacy_class_size,
    conjugate,
    content,
    cycle_type,
    decompose_weight,
    dim_gl,
    dim_rational,
    dim_specht,
    dim_specht_hooks,
    gl_character,
    horn_positive,
    lr_coeff,
    mn_character,
    multi_lr_coeff,
    partition,
    partitions,
    signed_weight,
    wb_branch,
)

import bruteforce as bf


@st.composite
def partitions_of(draw, max_n=8, max_len=None):
    n = draw(st.integers(0, max_n))
    choices = list(partitions(n, max_len))
    return draw(st.sampled_from(choices))


def test_partition_validation():
    assert partition([3, 1, 0, 0]) == (3, 1)
    with pytest.raises(ValueError):
        partition([1, 2])
    with pytest.raises(ValueError):
        partition([2, -1])


def test_partition_counts():
    # p(n) for n = 0..10
    assert [len(list(partitions(n))) for n in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    assert list(partitions(4, 2)) == [(4,), (3, 1), (2, 2)]


@pytest.mark.parametrize("lam,expected", [((2,), 1), ((1, 1), -1), ((3, 1), 2), ((), 0)])
def test_content_examples(lam, expected):
    assert content(lam) == expected


@given(partitions_of(max_n=12))
def test_content_matches_box_sum(lam):
    assert content(lam) == sum(j - i for i, j in bf.boxes(lam))


@given(partitions_of(max_n=12))
def test_content_flips_under_conjugation(lam):
    assert content(conjugate(lam)) == -content(lam)


@pytest.mark.parametrize("lam,r,expected", [((1,), 2, 2), ((1, 1), 2, 1), ((2,), 2, 3)])
def test_dim_gl_examples(lam, r, expected):
    assert dim_gl(lam, r) == expected


def test_dim_gl_rejects_long_partition():
    with pytest.raises(ValueError):
        dim_gl((1, 1, 1), 2)


@given(partitions_of(max_n=5, max_len=3), st.integers(3, 4))
def test_dim_gl_counts_semistandard_tableaux(lam, r):
    assert dim_gl(lam, r) == len(bf.ssyt(lam, r))


@pytest.mark.parametrize("mu,expected", [((5,), 1), ((2, 1), 2), ((2, 2), 2), ((), 1)])
def test_dim_specht_examples(mu, expected):
    assert dim_specht(mu) == expected


@given(partitions_of(max_n=10))
def test_dim_specht_three_ways(mu):
    assert dim_specht(mu) == dim_specht_hooks(mu) == bf.count_syt(mu)


@pytest.mark.parametrize("lam,mu,nu,expected", [
    ((2,), (1,), (1,), 1),
    ((1, 1), (1,), (1,), 1),
    ((3, 2, 1), (2, 1), (2, 1), 2),
    ((2, 2), (2,), (1, 1), 0),
    ((3, 1), (2,), (1, 1), 1),
    ((4, 2, 2, 1), (3, 1, 1), (2, 1, 1), 2),
    ((4, 3, 2, 1), (3, 2, 1), (2, 1, 1), 3),
    ((4, 3, 2, 1), (2, 2, 1), (3, 2), 2),
])
def test_lr_examples(lam, mu, nu, expected):
    # frozen values, cross-checked against the character inner product below
    assert lr_coeff(lam, mu, nu) == expected
    assert bf.lr_by_characters(lam, mu, nu, partitions, mn_character) == expected


def test_lr_size_mismatch_is_zero():
    assert lr_coeff((3,), (1,), (1,)) == 0
    assert lr_coeff((2,), (3,), ()) == 0


@given(st.data())
def test_lr_matches_character_oracle(data):
    n = data.draw(st.integers(1, 7))
    m = data.draw(st.integers(0, n))
    lam = data.draw(st.sampled_from(list(partitions(n))))
    mu = data.draw(st.sampled_from(list(partitions(m))))
    nu = data.draw(st.sampled_from(list(partitions(n - m))))
    assert lr_coeff(lam, mu, nu) == bf.lr_by_characters(lam, mu, nu, partitions, mn_character)


@given(st.data())
def test_lr_conjugation_symmetry(data):
    n = data.draw(st.integers(1, 8))
    m = data.draw(st.integers(0, n))
    lam = data.draw(st.sampled_from(list(partitions(n))))
    mu = data.draw(st.sampled_from(list(partitions(m))))
    nu = data.draw(st.sampled_from(list(partitions(n - m))))
    assert lr_coeff(lam, mu, nu) == lr_coeff(conjugate(lam), conjugate(mu), conjugate(nu))


@pytest.mark.parametrize("lam,blocks,expected", [
    ((2,), [(1,), (1,)], 1),
    ((3,), [(1,), (1,), (1,)], 1),
    ((2, 1), [(1,), (1,), (1,)], 2),
])
def test_multi_lr_examples(lam, blocks, expected):
    assert multi_lr_coeff(lam, blocks) == expected


@given(partitions_of(max_n=6))
def test_multi_lr_single_boxes_count_tableaux(lam):
    assert multi_lr_coeff(lam, [(1,)] * sum(lam)) == dim_specht(lam)


@given(st.data())
def test_multi_lr_order_independent(data):
    sizes = data.draw(st.lists(st.integers(1, 3), min_size=3, max_size=3))
    blocks = [data.draw(st.sampled_from(list(partitions(s)))) for s in sizes]
    lam = data.draw(st.sampled_from(list(partitions(sum(sizes)))))
    perm = data.draw(st.permutations(range(3)))
    assert multi_lr_coeff(lam, blocks) == multi_lr_coeff(lam, [blocks[i] for i in perm])


def test_horn_examples():
    assert horn_positive((2,), (1,), (1,), 2)
    assert not horn_positive((2,), (2,), (2,), 2)
    # s_2 s_11 = s_31 + s_211, so (2,2) is absent
    assert not horn_positive((2, 2), (2,), (1, 1), 2)
    assert horn_positive((3, 1), (2,), (1, 1), 2)
    assert not horn_positive((2, 1, 1), (2,), (1, 1), 2)


@given(st.data())
def test_horn_spectral_consistency(data):
    # a positive coefficient needs Hermitian A, B with spectra mu, nu and A + B with
    # spectrum lam, so Weyl's inequalities on the top eigenvalue must hold
    n = data.draw(st.integers(1, 8))
    m = data.draw(st.integers(0, n))
    lam = data.draw(st.sampled_from(list(partitions(n, 3))))
    mu = data.draw(st.sampled_from(list(partitions(m, 3))))
    nu = data.draw(st.sampled_from(list(partitions(n - m, 3))))
    if horn_positive(lam, mu, nu, 3):
        pad = lambda p: p + (0,) * (3 - len(p))
        assert pad(lam)[0] <= pad(mu)[0] + pad(nu)[0]
        assert pad(lam)[0] >= max(pad(mu)[0], pad(nu)[0])


@pytest.mark.parametrize("lam,mu,r,expected", [
    ((3, 2), (2, 1), 5, (3, 2, 0, -1, -2)),
    ((1,), (), 2, (1, 0)),
    ((), (1,), 2, (0, -1)),
])
def test_signed_weight_examples(lam, mu, r, expected):
    assert signed_weight(lam, mu, r) == expected
    assert decompose_weight(expected) == (partition(lam), partition(mu))


def test_signed_weight_rejects_long():
    with pytest.raises(ValueError):
        signed_weight((1, 1), (1,), 2)


@given(partitions_of(max_n=6, max_len=2), partitions_of(max_n=6, max_len=2))
def test_signed_weight_round_trip(lam, mu):
    r = len(lam) + len(mu) + 1
    assert decompose_weight(signed_weight(lam, mu, r)) == (lam, mu)


@pytest.mark.parametrize("args,expected", [
    (((1,), (), (1,), (), 2), 1),
    (((), (), (1,), (1,), 2), 1),
    # V (x) V* = adjoint + trivial, so the adjoint [1,1] occurs once
    (((1,), (1,), (1,), (1,), 2), 1),
    (((1,), (1,), (1,), (1,), 3), 1),
    (((2,), (), (1,), (1,), 3), 0),
])
def test_wb_branch_examples(args, expected):
    assert wb_branch(*args) == expected


@pytest.mark.parametrize("r", [2, 3])
def test_wb_branch_matches_dense_tensor_decomposition(r):
    # U_pi (x) U_tau^* decomposed by characters at a generic point
    rng = np.random.default_rng(5)
    x = rng.uniform(0.5, 1.5, r)
    for pi in [(1,), (2,), (1, 1)]:
        for tau in [(1,), (2,), (1, 1)]:
            if len(pi) > r or len(tau) > r:
                continue
            lhs = gl_character(pi, x) * gl_character(tau, 1 / x)
            rhs = 0.0
            for t in range(min(sum(pi), sum(tau)) + 1):
                for lam in partitions(sum(pi) - t, r):
                    for mu in partitions(sum(tau) - t, r - len(lam)):
                        b = wb_branch(lam, mu, pi, tau, r)
                        if b:
                            rhs += b * gl_character(signed_weight(lam, mu, r), x)
            assert rhs == pytest.approx(lhs, rel=1e-10)


@pytest.mark.parametrize("mu,gamma,expected", [
    ((4,), (2, 2), 1),
    ((1, 1), (2,), -1),
    ((2, 1), (3,), -1),
    ((2, 2), (2,), 0),
    ((2, 2), (3,), -1),
    ((3, 1), (2, 2), -1),
])
def test_mn_examples(mu, gamma, expected):
    assert mn_character(mu, gamma) == expected


def test_s4_character_table():
    # rows (4), (3,1), (2,2), (2,1,1), (1,1,1,1); columns e, (2), (2,2), (3), (4)
    table = [
        [1, 1, 1, 1, 1],
        [3, 1, -1, 0, -1],
        [2, 0, 2, -1, 0],
        [3, -1, -1, 0, 1],
        [1, -1, 1, 1, -1],
    ]
    cols = [(), (2,), (2, 2), (3,), (4,)]
    rows = [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert [[mn_character(mu, g) for g in cols] for mu in rows] == table


@given(partitions_of(max_n=9))
def test_mn_identity_gives_dimension(mu):
    assert mn_character(mu, ()) == dim_specht(mu)


@given(partitions_of(max_n=8), st.data())
def test_mn_conjugate_is_sign_twist(mu, data):
    n = sum(mu)
    gamma = data.draw(st.sampled_from(list(partitions(n))))
    sign = (-1) ** (n - len(gamma))
    assert mn_character(conjugate(mu), gamma) == sign * mn_character(mu, gamma)


def test_mn_rejects_oversized_cycle():
    with pytest.raises(ValueError):
        mn_character((2,), (3,))


@pytest.mark.parametrize("gamma,n,expected", [((2,), 4, 6), ((3,), 3, 2), ((2, 2), 4, 3)])
def test_class_size_examples(gamma, n, expected):
    assert conjugacy_class_size(gamma, n) == expected


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_class_sizes_by_enumeration(n):
    counts = bf.class_sizes_by_enumeration(n)
    for gamma, k in counts.items():
        assert conjugacy_class_size(gamma, n) == k


def test_class_size_rejects_oversized():
    with pytest.raises(ValueError):
        conjugacy_class_size((3, 2), 4)


def test_cycle_type():
    assert cycle_type((1, 2, 0, 3)) == (3, 1)
    assert cycle_type(()) == ()


def test_gl_character_examples():
    assert gl_character((1, 0), [2.0, 1.0]) == pytest.approx(3.0)
    assert gl_character((2, 0), [1.0, 1.0]) == 3
    x = np.array([0.7, 1.3, 2.1])
    assert gl_character((2, 2, 2), x) == pytest.approx(np.prod(x) ** 2)
    assert gl_character((-1, -1, -1), x) == pytest.approx(1 / np.prod(x))


@given(partitions_of(max_n=5, max_len=3),
       st.lists(st.floats(0.2, 3.0), min_size=3, max_size=3))
def test_gl_character_matches_tableau_sum(lam, x):
    assert gl_character(lam, x) == pytest.approx(bf.schur_by_tableaux(lam, x), rel=1e-8, abs=1e-10)


@given(partitions_of(max_n=6, max_len=3))
def test_gl_character_confluent_path(lam):
    x = np.array([1.2, 1.2 + 1e-11, 0.8])
    assert gl_character(lam, x) == pytest.approx(bf.schur_by_tableaux(lam, x), rel=1e-8)


def test_gl_character_signed_weight_shift():
    x = np.array([0.5, 1.5, 2.5])
    w = (2, 0, -1)
    assert gl_character(w, x) == pytest.approx(gl_character((3, 1, 0), x) / np.prod(x))


def test_dim_rational_dual():
    # [lam, mu] and [mu, lam] are dual, same dimension
    assert dim_rational((2, 0, -1)) == dim_rational((1, 0, -2)) == 15
    with pytest.raises(ValueError):
        dim_rational((0, 1))


# ---- identities on full enumerations


@pytest.mark.parametrize("n", range(1, 9))
def test_branching_dimension_identity(n):
    for m in range(n + 1):
        for lam in partitions(n):
            total = sum(lr_coeff(lam, mu, nu) * dim_specht(mu) * dim_specht(nu)
                        for mu in partitions(m) for nu in partitions(n - m))
            assert total == dim_specht(lam)


@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("n", range(0, 9))
def test_schur_weyl_dimension_identity(n, r):
    assert sum(dim_gl(lam, r) * dim_specht(lam) for lam in partitions(n, r)) == r ** n


@pytest.mark.parametrize("n", range(1, 8))
def test_character_orthogonality(n):
    lams = list(partitions(n))
    for mu in lams:
        for nu in lams:
            s = sum(conjugacy_class_size(g, n) * mn_character(mu, g) * mn_character(nu, g) for g in lams)
            assert s == (math.factorial(n) if mu == nu else 0)


@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("n", range(1, 7))
def test_walled_brauer_dimension_identity(n, r):
    for m in range(n + 1):
        total = 0
        for pi in partitions(m, r):
            for tau in partitions(n - m, r):
                for t in range(min(m, n - m) + 1):
                    for lam in partitions(m - t, r):
                        for mu in partitions(n - m - t, r - len(lam)):
                            b = wb_branch(lam, mu, pi, tau, r)
                            total += dim_rational(signed_weight(lam, mu, r)) * b * dim_specht(pi) * dim_specht(tau)
        assert total == r ** n


@pytest.mark.parametrize("n", range(1, 7))
def test_trace_of_permutation_is_character_sum(n):
    # tr T_sigma on (C^r)^n = r^(#cycles) = sum_lam dim_gl chi_lam
    for r in (2, 3):
        for gamma in partitions(n):
            lhs = r ** len(gamma)
            rhs = sum(dim_gl(lam, r) * mn_character(lam, gamma) for lam in partitions(n, r))
            assert lhs == rhs


@pytest.mark.parametrize("n", range(1, 8))
def test_lr_symmetry_and_bound(n):
    for m in range(n + 1):
        for lam in partitions(n):
            r = len(lam)
            for mu in partitions(m, r):
                for nu in partitions(n - m, r):
                    c = lr_coeff(lam, mu, nu)
                    assert c == lr_coeff(lam, nu, mu)
                    assert c <= (n + 1) ** (r * r)
