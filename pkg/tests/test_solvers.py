import random
from fractions import Fraction

import pytest

from conftest import random_bimatrix, random_nondegenerate_bimatrix
from ppadkit.games import (
    BimatrixGame,
    MixedProfile,
    NormalFormGame,
    max_payoff_regret,
    rescale_unit,
    verify_nash,
)
from ppadkit.reductions import fixture_gmp, fixture_rps, fixture_stag_hunt
from ppadkit.solvers import (
    DegeneracyError,
    approx_nash,
    lemke_howson,
    lemke_howson_with_path,
    solve_support,
    support_enumeration,
)

F = Fraction


def vec(*xs):
    return tuple(F(x) for x in xs)


STAG_EQUILIBRIA = {
    (vec(1, 0), vec(1, 0)),
    (vec(0, 1), vec(0, 1)),
    ((F(1, 8), F(7, 8)), (F(1, 8), F(7, 8))),
}


def test_lemke_howson_stag_hunt_all_labels():
    g = fixture_stag_hunt()
    seen = set()
    for label in range(4):
        prof = lemke_howson(g, label)
        assert verify_nash(g, prof).accepted
        assert prof.vectors in STAG_EQUILIBRIA
        seen.add(prof.vectors)
    assert seen  # at least one equilibrium reached


def test_lemke_howson_gmp2_uniform():
    g = fixture_gmp(2)
    for label in range(4):
        prof = lemke_howson(g, label)
        assert prof.vectors == ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2)))


def test_lemke_howson_rps_uniform():
    g = fixture_rps()
    for label in range(6):
        prof = lemke_howson(g, label)
        assert prof.vectors == ((F(1, 3),) * 3, (F(1, 3),) * 3)


def test_lemke_howson_path_never_revisits():
    rnd = random.Random(23)
    g = random_nondegenerate_bimatrix(rnd, 4, 4)
    for label in range(8):
        prof, path = lemke_howson_with_path(g, label)
        assert len(path) == len(set(path))
        assert verify_nash(g, prof).accepted


def test_lemke_howson_oracle_membership_seed23():
    rnd = random.Random(23)
    g = random_nondegenerate_bimatrix(rnd, 4, 4)
    oracle = {p.vectors for p in support_enumeration(g)}
    for label in range(8):
        assert lemke_howson(g, label).vectors in oracle


def test_lemke_howson_degeneracy_error_without_perturbation():
    g = BimatrixGame.from_matrices([[1, 1], [1, 1]], [[1, 1], [1, 1]])
    with pytest.raises(DegeneracyError):
        for label in range(4):
            lemke_howson(g, label, lexicographic=False)
    # the lexicographic rule must handle the same game
    for label in range(4):
        prof = lemke_howson(g, label)
        assert verify_nash(g, prof).accepted


def test_lemke_howson_rejects_bad_label():
    with pytest.raises(ValueError):
        lemke_howson(fixture_rps(), 6)


def test_solve_support_rps_full():
    g = fixture_rps()
    sol = solve_support(g, ((0, 1, 2), (0, 1, 2)))
    assert sol is not None
    assert sol.profile.vectors == ((F(1, 3),) * 3, (F(1, 3),) * 3)
    assert not sol.degenerate


def test_solve_support_stag_mismatched_supports():
    g = fixture_stag_hunt()
    assert solve_support(g, ((0,), (1,))) is None  # stag vs hare: 0 < 1


def test_solve_support_stag_full():
    g = fixture_stag_hunt()
    sol = solve_support(g, ((0, 1), (0, 1)))
    assert sol is not None
    assert sol.profile.vectors == ((F(1, 8), F(7, 8)), (F(1, 8), F(7, 8)))


def test_solve_support_degenerate_lexmin():
    # all-ones game: every profile is an equilibrium; the full-support
    # system is singular, so the flagged lexicographically-least vector
    # puts all mass on the last action.
    g = BimatrixGame.from_matrices([[1, 1], [1, 1]], [[1, 1], [1, 1]])
    sol = solve_support(g, ((0, 1), (0, 1)))
    assert sol is not None
    assert sol.degenerate
    assert sol.profile.vectors == ((F(0), F(1)), (F(0), F(1)))
    assert verify_nash(g, sol.profile).accepted


def test_solve_support_validates_input():
    g = fixture_rps()
    with pytest.raises(ValueError):
        solve_support(g, ((), (0,)))
    with pytest.raises(ValueError):
        solve_support(g, ((0,), (5,)))


def test_support_enumeration_rps():
    got = support_enumeration(fixture_rps())
    assert len(got) == 1
    assert got[0].vectors == ((F(1, 3),) * 3, (F(1, 3),) * 3)


def test_support_enumeration_stag_hunt():
    got = support_enumeration(fixture_stag_hunt())
    assert len(got) == 3
    assert {p.vectors for p in got} == STAG_EQUILIBRIA


def test_support_enumeration_gmp3():
    got = support_enumeration(fixture_gmp(3))
    assert len(got) == 1
    assert got[0].vectors == ((F(1, 3),) * 3, (F(1, 3),) * 3)


def test_support_enumeration_outputs_verify_and_are_sorted():
    rnd = random.Random(5)
    for _ in range(5):
        g = random_bimatrix(rnd, 3, 3, lo=-5, hi=5)
        got = support_enumeration(g)
        assert got, "totality: every bimatrix game has an equilibrium"
        assert all(verify_nash(g, p).accepted for p in got)
        keys = [p.vectors for p in got]
        assert keys == sorted(keys)


def test_support_enumeration_odd_count_on_nondegenerate_games():
    rnd = random.Random(99)
    for _ in range(8):
        g = random_nondegenerate_bimatrix(rnd, rnd.randint(2, 4), rnd.randint(2, 4))
        assert len(support_enumeration(g)) % 2 == 1


def test_approx_nash_rps_trace():
    g = fixture_rps()
    prof, guarantee = approx_nash(g)
    assert guarantee == F(1, 2)
    # committed half on rock, then scissors against pure paper
    assert prof.vectors[0] == (F(1, 2), F(0), F(1, 2))
    assert prof.vectors[1] == (F(0), F(1), F(0))
    scaled = rescale_unit(g)
    # the additive guarantee holds with equality here: rock trails the best
    # response by 1 but only carries half the mass
    assert max_payoff_regret(scaled, prof) == F(1, 2)
    # the well-supported check is strictly stronger and rejects at 1/2:
    # rock itself is a full unit below the best response
    verdict = verify_nash(scaled, prof, F(1, 2))
    assert not verdict.accepted
    assert verdict.max_violation == F(1, 2)
    assert verify_nash(scaled, prof, F(1)).accepted


def test_approx_nash_dominant_action_exact():
    g = BimatrixGame.from_matrices([[5, 5], [0, 0]], [[5, 0], [5, 0]])
    prof, guarantee = approx_nash(g)
    assert prof.vectors == ((F(1), F(0)), (F(1), F(0)))
    assert verify_nash(rescale_unit(g), prof, F(0)).accepted


def test_approx_nash_three_players_seed5():
    rnd = random.Random(5)
    payoffs = tuple(
        tuple(F(rnd.randint(-9, 9)) for _ in range(8)) for _ in range(3)
    )
    g = NormalFormGame(action_counts=(2, 2, 2), payoffs=payoffs)
    prof, guarantee = approx_nash(g)
    assert guarantee == F(2, 3)
    assert max_payoff_regret(rescale_unit(g), prof) <= F(2, 3)


def test_approx_nash_seeded_commitments_keep_guarantee():
    g = fixture_rps()
    for seed in range(4):
        prof, guarantee = approx_nash(g, seed=seed)
        assert max_payoff_regret(rescale_unit(g), prof) <= guarantee


def test_approx_nash_guarantee_sweep():
    rnd = random.Random(17)
    for _ in range(10):
        k = rnd.randint(2, 3)
        counts = tuple(rnd.randint(2, 3) for _ in range(k))
        n_profiles = 1
        for c in counts:
            n_profiles *= c
        payoffs = tuple(
            tuple(F(rnd.randint(-9, 9)) for _ in range(n_profiles))
            for _ in range(k)
        )
        g = NormalFormGame(action_counts=counts, payoffs=payoffs)
        prof, guarantee = approx_nash(g)
        assert guarantee == 1 - F(1, k)
        assert max_payoff_regret(rescale_unit(g), prof) <= guarantee
