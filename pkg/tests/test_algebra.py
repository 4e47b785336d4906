from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from algebra import (
    FAILS,
    HOLDS,
    NOT_APPLICABLE,
    NOT_INVOLUTION,
    SKEW,
    SYMMETRIC,
    AntiInvolutionData,
    SemisimpleProfile,
    classify_anti_involution,
    eps_gelfand_check,
    fixed_space_dim,
    hecke_profile,
    named_form,
    random_invertible,
    rank_k_upper_bound,
    rank_one_lower_bound,
    run_trials,
    synthetic_profile,
)
from chartab import MultiplicityReport
from errors import ConfigError, InternalAssertion, NotInvertible


# ─── Fixed spaces ──────────────────────────────────────────────────────

def test_fixed_space_examples():
    assert fixed_space_dim(2, [[1, 0], [0, 1]]) == 3
    assert fixed_space_dim(2, [[0, 1], [-1, 0]]) == 1
    assert fixed_space_dim(4, named_form(4, "symplectic")) == 6


def test_singular_g():
    with pytest.raises(NotInvertible):
        fixed_space_dim(2, [[1, 2], [2, 4]])
    with pytest.raises(NotInvertible):
        AntiInvolutionData.from_rows([[0, 0], [0, 0]])


def test_classification():
    assert classify_anti_involution(2, [[1, 0], [0, 1]]) == SYMMETRIC
    assert classify_anti_involution(4, named_form(4, "symplectic")) == SKEW
    assert classify_anti_involution(2, [[1, 1], [0, 1]]) == NOT_INVOLUTION


@pytest.mark.parametrize("n", range(2, 7))
def test_random_bounds(n):
    rng = random.Random(n)
    top = n * (n + 1) // 2
    for _ in range(50):
        g = random_invertible(n, rng)
        dim = fixed_space_dim(n, g)
        assert dim <= top
        kind = classify_anti_involution(n, g)
        if kind == SYMMETRIC:
            assert dim == top
    for _ in range(10):
        g = random_invertible(n, rng, SYMMETRIC)
        assert classify_anti_involution(n, g) == SYMMETRIC
        assert fixed_space_dim(n, g) == top
    if n % 2 == 0:
        for _ in range(10):
            g = random_invertible(n, rng, SKEW)
            assert classify_anti_involution(n, g) == SKEW
            assert fixed_space_dim(n, g) == n * (n - 1) // 2


def test_random_invertible_kinds():
    rng = random.Random(0)
    g = random_invertible(3, rng, SYMMETRIC)
    assert all(g[i][j] == g[j][i] for i in range(3) for j in range(3))
    assert all(-9 <= x <= 9 for row in g for x in row)
    with pytest.raises(ConfigError):
        random_invertible(3, rng, SKEW)


def test_random_invertible_is_seeded():
    assert random_invertible(4, random.Random(7)) == random_invertible(4, random.Random(7))


@settings(max_examples=30, derandomize=True, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=9, max_size=9))
def test_rational_g_bound(entries):
    g = [entries[0:3], entries[3:6], entries[6:9]]
    try:
        data = AntiInvolutionData.from_rows(g)
    except NotInvertible:
        assume(False)
    dim = fixed_space_dim(3, data.g)
    assert dim <= 6
    if classify_anti_involution(3, data.g) == SYMMETRIC:
        assert dim == 6


# ─── Profiles and bounds ───────────────────────────────────────────────

def test_rank_one_bound_examples():
    tight = SemisimpleProfile.of([1, 1, 1, 2], 6)
    assert tight.dimA == 7
    assert tight.epsilon == Fraction(1, 7)
    r = rank_one_lower_bound(tight)
    assert (r.bound, r.holds) == (3, True)

    ones = SemisimpleProfile.of([1] * 5, 5)
    r = rank_one_lower_bound(ones)
    assert (r.bound, r.holds) == (5, True)

    single = SemisimpleProfile.of([2], 3)
    r = rank_one_lower_bound(single)
    assert (r.raw, r.bound, r.holds) == (0, 0, True)


def test_rank_one_bound_can_fail():
    # all blocks of rank 2 and sigma close to the identity
    r = rank_one_lower_bound(SemisimpleProfile.of([2, 2], 8))
    assert r.bound == 8
    assert not r.holds


def test_rank_k_bound_examples():
    r = rank_k_upper_bound(SemisimpleProfile.of([1] * 4, 4), 3)
    assert r.status == HOLDS and r.bound >= 4

    r = rank_k_upper_bound(SemisimpleProfile.of([3], 6), 3)
    assert r.bound == 45
    assert (r.status, r.total) == (HOLDS, 9)

    r = rank_k_upper_bound(SemisimpleProfile.of([3], 2), 3)
    assert r.status == NOT_APPLICABLE and r.bound is None

    # eps exactly 1/4 leaves no room for the rank-3 block
    r = rank_k_upper_bound(SemisimpleProfile.of([1] * 3 + [3], 3), 3)
    assert (r.status, r.bound) == (FAILS, 0)

    with pytest.raises(ConfigError):
        rank_k_upper_bound(SemisimpleProfile.of([3], 6), 2)


def test_eps_gelfand():
    e = eps_gelfand_check(SemisimpleProfile.of([1, 1, 1, 2], 6))
    assert (e.fraction, e.bound, e.holds) == (Fraction(3, 4), Fraction(3, 7), True)


def test_profile_validation():
    with pytest.raises(ConfigError):
        SemisimpleProfile.of([1, 2], 6)
    with pytest.raises(ConfigError):
        SemisimpleProfile.of([0, 1], 1)


def test_hecke_profile():
    report = MultiplicityReport(((0, 1, 1), (1, 1, 0), (2, 2, 1), (3, 3, 2), (4, 3, 1)))
    profile = hecke_profile(report, 6, z_count=7)
    assert profile.blocks == (2, 1, 1, 1)
    assert (profile.dimA, profile.fixed_dim) == (7, 6)
    assert hecke_profile(MultiplicityReport(((0, 1, 1),)), 1).dimA == 1
    with pytest.raises(InternalAssertion):
        hecke_profile(report, 6, z_count=8)


def test_synthetic_profiles():
    p = synthetic_profile(stable=[(2, SYMMETRIC), (1, SYMMETRIC)], cycles=[(2, 2)])
    assert p.blocks == (2, 2, 2, 1)
    assert p.dimA == 13
    assert p.fixed_dim == 3 + 1 + 4
    assert rank_one_lower_bound(p).holds
    assert eps_gelfand_check(p).holds

    p = synthetic_profile(stable=[(1, SYMMETRIC)] * 3, cycles=[(1, 2)])
    assert (p.dimA, p.fixed_dim) == (5, 4)
    assert rank_one_lower_bound(p).bound == 1

    with pytest.raises(ConfigError):
        synthetic_profile(stable=[(3, SKEW)])
    with pytest.raises(ConfigError):
        synthetic_profile(cycles=[(2, 1)])


@settings(max_examples=100, derandomize=True)
@given(
    st.lists(st.tuples(st.integers(1, 4), st.sampled_from([SYMMETRIC, SKEW])), max_size=5),
    st.lists(st.tuples(st.integers(1, 3), st.just(2)), max_size=3),
)
def test_synthetic_anti_involutions_satisfy_rank_one_bound(stable, cycles):
    stable = [(n, kind) for n, kind in stable if kind == SYMMETRIC or n % 2 == 0]
    assume(stable or cycles)
    p = synthetic_profile(stable, cycles)
    assert rank_one_lower_bound(p).holds
    assert eps_gelfand_check(p).holds


def test_run_trials():
    trials = run_trials(3, 20, seed=1)
    assert len(trials) == 20
    assert all(t.fixed_dim <= 6 for t in trials)
    sympl = run_trials(4, 1, seed=0, kind="symplectic")
    assert (sympl[0].classification, sympl[0].fixed_dim) == (SKEW, 6)
    ident = run_trials(2, 1, seed=0, kind="identity")
    assert (ident[0].classification, ident[0].fixed_dim) == (SYMMETRIC, 3)
    with pytest.raises(ConfigError):
        run_trials(3, 1, seed=0, kind="orthogonal")
