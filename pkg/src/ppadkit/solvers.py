"""Equilibrium solvers: complementary pivoting, support enumeration and
the polynomial-time constant-factor approximation for k players.

Everything here is exact: pivoting runs on integer tableaus (Edmonds
style, with a lexicographic tie rule standing in for symbolic
perturbation), and support systems are solved over the rationals.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from ._linsolve import int_gauss_solve, lex_min_polytope
from .games import (
    BimatrixGame,
    MixedProfile,
    NormalFormGame,
    as_normal_form,
    rescale_unit,
)

SUPPORT_ENUM_MAX_ACTIONS = 8

SupportPair = tuple[tuple[int, ...], tuple[int, ...]]


class DegeneracyError(RuntimeError):
    """A pivot ratio tie occurred with the lexicographic rule disabled."""


class PivotingError(RuntimeError):
    """Internal pivoting failure (budget exceeded or revisited vertex)."""


def _int_matrix(matrix: tuple[tuple[Fraction, ...], ...]) -> list[list[int]]:
    denom = lcm(*(v.denominator for row in matrix for v in row))
    return [[int(v * denom) for v in row] for row in matrix]


def _positive_int_matrix(matrix) -> list[list[int]]:
    rows = _int_matrix(matrix)
    low = min(min(r) for r in rows)
    if low <= 0:
        shift = 1 - low
        rows = [[v + shift for v in r] for r in rows]
    return rows


# --- Lemke-Howson --------------------------------------------------------


class _Tableau:
    """Integer tableau for one best-response polytope.

    Variable ids are shared across both tableaus: ids < n1 are row
    strategies (decision vars here, slack labels there) and ids >= n1 are
    column strategies.  `lex_block` lists the initial identity columns
    used by the lexicographic ratio rule.
    """

    def __init__(self, matrix: list[list[int]], var_ids: list[int], slack_ids: list[int]):
        n_rows = len(matrix)
        n_cols = len(var_ids) + len(slack_ids) + 1
        self.cols: dict[int, int] = {}
        for pos, vid in enumerate(var_ids + slack_ids):
            self.cols[vid] = pos
        self.rows = []
        for r in range(n_rows):
            row = [0] * n_cols
            for pos, vid in enumerate(var_ids):
                row[pos] = matrix[r][pos]
            row[len(var_ids) + r] = 1
            row[-1] = 1
            self.rows.append(row)
        self.basis = list(slack_ids)
        self.det = 1
        self.lex_block = [self.cols[v] for v in slack_ids]

    def pivot(self, enter_id: int, lexicographic: bool) -> int:
        col = self.cols[enter_id]
        rows = self.rows
        candidates = [r for r in range(len(rows)) if rows[r][col] > 0]
        if not candidates:
            raise PivotingError(f"no positive pivot entry for variable {enter_id}")
        best = candidates[0]
        ties = [best]
        for r in candidates[1:]:
            cmp = self._ratio_compare(r, best, col, lexicographic)
            if cmp < 0:
                best, ties = r, [r]
            elif cmp == 0:
                ties.append(r)
        if len(ties) > 1:
            tied = sorted(self.basis[r] for r in ties)
            raise DegeneracyError(
                f"minimum-ratio tie between basic variables {tied}; "
                "enable the lexicographic rule to resolve it"
            )
        p = rows[best][col]
        det = self.det
        for i, row in enumerate(rows):
            if i == best:
                continue
            f = row[col]
            prow = rows[best]
            if f:
                for j in range(len(row)):
                    row[j] = (p * row[j] - f * prow[j]) // det
            elif p != det:
                for j in range(len(row)):
                    row[j] = (p * row[j]) // det
        self.det = p
        leave = self.basis[best]
        self.basis[best] = enter_id
        return leave

    def _ratio_compare(self, r: int, s: int, col: int, lexicographic: bool) -> int:
        rows = self.rows
        a_r, a_s = rows[r][col], rows[s][col]
        lhs = rows[r][-1] * a_s
        rhs = rows[s][-1] * a_r
        if lhs != rhs:
            return -1 if lhs < rhs else 1
        if not lexicographic:
            return 0
        for c in self.lex_block:
            lhs = rows[r][c] * a_s
            rhs = rows[s][c] * a_r
            if lhs != rhs:
                return -1 if lhs < rhs else 1
        raise AssertionError("lexicographic rule failed to break a tie")

    def solution(self, decision_ids: set[int]) -> dict[int, Fraction]:
        out = {}
        for r, vid in enumerate(self.basis):
            if vid in decision_ids:
                out[vid] = Fraction(self.rows[r][-1], self.det)
        return out


def _lh_run(
    g: BimatrixGame, dropped_label: int, lexicographic: bool
) -> tuple[MixedProfile, list[tuple[frozenset, frozenset]]]:
    n1, n2 = g.n1, g.n2
    if not 0 <= dropped_label < n1 + n2:
        raise ValueError(f"dropped label must be in [0, {n1 + n2})")
    rmat = _positive_int_matrix(g.row_payoffs)
    cmat = _positive_int_matrix(g.col_payoffs)
    row_ids = list(range(n1))
    col_ids = list(range(n1, n1 + n2))
    # tableau 1: column player's polytope facets, decision vars x_i
    ct = [[cmat[i][j] for i in range(n1)] for j in range(n2)]
    tab1 = _Tableau(ct, row_ids, col_ids)
    # tableau 2: row player's facets, decision vars y_j
    tab2 = _Tableau(rmat, col_ids, row_ids)
    owner = tab1 if dropped_label < n1 else tab2
    other = tab2 if owner is tab1 else tab1

    visited = {(frozenset(tab1.basis), frozenset(tab2.basis))}
    path = list(visited)
    enter = dropped_label
    budget = 1 << (n1 + n2)
    for _ in range(budget):
        leave = owner.pivot(enter, lexicographic)
        vertex = (frozenset(tab1.basis), frozenset(tab2.basis))
        if vertex in visited:
            raise PivotingError("pivot path revisited a vertex")
        visited.add(vertex)
        path.append(vertex)
        if leave == dropped_label:
            break
        enter = leave
        owner, other = other, owner
    else:
        raise PivotingError(f"pivot budget {budget} exceeded")

    xvals = tab1.solution(set(row_ids))
    yvals = tab2.solution(set(col_ids))
    xsum = sum(xvals.values(), Fraction(0))
    ysum = sum(yvals.values(), Fraction(0))
    if xsum == 0 or ysum == 0:
        raise PivotingError("pivoting terminated at the artificial vertex")
    x = tuple(xvals.get(i, Fraction(0)) / xsum for i in range(n1))
    y = tuple(yvals.get(n1 + j, Fraction(0)) / ysum for j in range(n2))
    return MixedProfile(vectors=(x, y)), path


def lemke_howson(
    g: BimatrixGame, dropped_label: int, lexicographic: bool = True
) -> MixedProfile:
    """Pivot from the artificial all-zero vertex after dropping one label.

    Returns an exact equilibrium.  The lexicographic tie rule (on by
    default) resolves degenerate games; with it disabled, a ratio tie
    raises DegeneracyError naming the tied basis variables.
    """
    profile, _ = _lh_run(g, dropped_label, lexicographic)
    return profile


def lemke_howson_with_path(
    g: BimatrixGame, dropped_label: int, lexicographic: bool = True
) -> tuple[MixedProfile, list[tuple[frozenset, frozenset]]]:
    """Like lemke_howson but also returns the visited vertex sequence."""
    return _lh_run(g, dropped_label, lexicographic)


# --- support enumeration -------------------------------------------------


@dataclass(frozen=True)
class SupportSolution:
    profile: MixedProfile
    degenerate: bool


def _side_vector(
    matrix: list[list[int]],
    eq_support: tuple[int, ...],
    var_support: tuple[int, ...],
    n_vars_total: int,
) -> tuple[list[Fraction], bool] | None:
    """Opponent vector making `eq_support` indifferent and optimal.

    matrix[i][j] is the payoff to the constrained player for action i
    against opponent action j; variables range over var_support.  Returns
    (full-length vector, degenerate-flag) or None if infeasible.
    """
    t = len(var_support)
    i0 = eq_support[0]
    base = matrix[i0]
    eq_rows = [[1] * t]
    rhs = [1]
    for i in eq_support[1:]:
        row_i = matrix[i]
        eq_rows.append([row_i[c] - base[c] for c in var_support])
        rhs.append(0)
    off_rows = [
        [base[c] - matrix[k][c] for c in var_support]
        for k in range(len(matrix))
        if k not in eq_support
    ]
    status, sol = int_gauss_solve(eq_rows, rhs, t)
    if status == "none":
        return None
    if status == "unique":
        denom = lcm(*(v.denominator for v in sol)) if sol else 1
        nums = [int(v * denom) for v in sol]
        if any(v < 0 for v in nums):
            return None
        for row in off_rows:
            if sum(a * v for a, v in zip(row, nums)) < 0:
                return None
        full = [Fraction(0)] * n_vars_total
        for c, v in zip(var_support, sol):
            full[c] = v
        return full, False
    # underdetermined: take the lexicographically least feasible point
    fr = Fraction
    eqs = [
        (tuple(fr(a) for a in row), fr(-b)) for row, b in zip(eq_rows, rhs)
    ]
    ineqs = [
        (tuple(fr(1 if i == j else 0) for i in range(t)), fr(0))
        for j in range(t)
    ]
    ineqs += [(tuple(fr(a) for a in row), fr(0)) for row in off_rows]
    point = lex_min_polytope(eqs, ineqs, t)
    if point is None:
        return None
    full = [Fraction(0)] * n_vars_total
    for c, v in zip(var_support, point):
        full[c] = v
    return full, True


def _solve_support_scaled(
    rmat: list[list[int]],
    cmat_t: list[list[int]],
    rows: tuple[int, ...],
    cols: tuple[int, ...],
    n1: int,
    n2: int,
) -> SupportSolution | None:
    # Try the more-constrained (cheaper to refute) side first.
    if len(cols) < len(rows):
        x_side = _side_vector(cmat_t, cols, rows, n1)
        if x_side is None:
            return None
        y_side = _side_vector(rmat, rows, cols, n2)
        if y_side is None:
            return None
    else:
        y_side = _side_vector(rmat, rows, cols, n2)
        if y_side is None:
            return None
        x_side = _side_vector(cmat_t, cols, rows, n1)
        if x_side is None:
            return None
    x, x_deg = x_side
    y, y_deg = y_side
    profile = MixedProfile(vectors=(tuple(x), tuple(y)))
    return SupportSolution(profile=profile, degenerate=x_deg or y_deg)


def solve_support(g: BimatrixGame, supports: SupportPair) -> SupportSolution | None:
    """Equilibrium with supports inside the given pair, if one exists.

    Solves the indifference system of each side exactly; when a side is
    underdetermined the lexicographically least feasible vector is
    returned and the result is flagged degenerate.
    """
    rows, cols = tuple(sorted(set(supports[0]))), tuple(sorted(set(supports[1])))
    if not rows or not cols:
        raise ValueError("supports must be non-empty on both sides")
    if max(rows) >= g.n1 or max(cols) >= g.n2 or min(rows) < 0 or min(cols) < 0:
        raise ValueError("support indices out of range")
    rmat = _int_matrix(g.row_payoffs)
    cmat = _int_matrix(g.col_payoffs)
    cmat_t = [[cmat[i][j] for i in range(g.n1)] for j in range(g.n2)]
    return _solve_support_scaled(rmat, cmat_t, rows, cols, g.n1, g.n2)


def support_enumeration(g: BimatrixGame) -> list[MixedProfile]:
    """All support pairs, solved exactly; deduplicated, lexicographic order.

    This is the oracle the pivoting solver and the reductions are checked
    against.
    """
    n1, n2 = g.n1, g.n2
    if n1 > SUPPORT_ENUM_MAX_ACTIONS or n2 > SUPPORT_ENUM_MAX_ACTIONS:
        raise ValueError(
            f"support enumeration capped at {SUPPORT_ENUM_MAX_ACTIONS} actions"
        )
    rmat = _int_matrix(g.row_payoffs)
    cmat = _int_matrix(g.col_payoffs)
    cmat_t = [[cmat[i][j] for i in range(n1)] for j in range(n2)]
    row_subsets = [
        tuple(i for i in range(n1) if mask >> i & 1)
        for mask in range(1, 1 << n1)
    ]
    col_subsets = [
        tuple(j for j in range(n2) if mask >> j & 1)
        for mask in range(1, 1 << n2)
    ]
    found: dict[tuple, MixedProfile] = {}
    for rows in row_subsets:
        for cols in col_subsets:
            sol = _solve_support_scaled(rmat, cmat_t, rows, cols, n1, n2)
            if sol is not None:
                key = sol.profile.vectors
                if key not in found:
                    found[key] = sol.profile
    return [found[key] for key in sorted(found)]


# --- k-player approximation ----------------------------------------------


def _partial_deviation_payoffs(
    g: NormalFormGame, vectors: list[list[Fraction]], player: int
) -> list[Fraction]:
    # like the exact deviation payoffs, but against sub-probability masses
    supports = [
        [j for j, p in enumerate(vec) if p > 0] if i != player else [None]
        for i, vec in enumerate(vectors)
    ]
    out = [Fraction(0)] * g.action_counts[player]
    for pure in itertools.product(*supports):
        weight = Fraction(1)
        for i, a in enumerate(pure):
            if i != player:
                weight *= vectors[i][a]
        if weight == 0:
            continue
        profile = list(pure)
        for j in range(g.action_counts[player]):
            profile[player] = j
            out[j] += g.payoff(player, tuple(profile)) * weight
    return out


def approx_nash(
    g: NormalFormGame | BimatrixGame,
    commit_actions: list[int] | None = None,
    seed: int | None = None,
) -> tuple[MixedProfile, Fraction]:
    """Two-phase approximation with additive guarantee 1 - 1/k.

    Payoffs are first rescaled per player onto [0, 1]; the guarantee is
    stated for the rescaled game.  Phase 1 commits player i (of k, for
    i < k) to probability 1 - 1/(k+1-i) on a designated action (index 0
    unless commit_actions or a seed overrides it); phase 2 walks players
    k down to 1, putting each player's remaining probability on a best
    response to everything allocated so far.  Ties break toward the
    lowest action.
    """
    g = rescale_unit(as_normal_form(g))
    k = g.k
    if commit_actions is None:
        if seed is not None:
            rng = random.Random(seed)
            commit_actions = [
                rng.randrange(g.action_counts[i]) for i in range(k - 1)
            ]
        else:
            commit_actions = [0] * (k - 1)
    if len(commit_actions) != k - 1:
        raise ValueError(f"need {k - 1} committed actions, one per early player")
    vectors: list[list[Fraction]] = [
        [Fraction(0)] * c for c in g.action_counts
    ]
    for idx in range(k - 1):
        committed = 1 - Fraction(1, k - idx)
        vectors[idx][commit_actions[idx]] += committed
    for idx in range(k - 1, -1, -1):
        remaining = 1 - sum(vectors[idx])
        devs = _partial_deviation_payoffs(g, vectors, idx)
        best = max(devs)
        choice = devs.index(best)
        vectors[idx][choice] += remaining
    profile = MixedProfile(vectors=tuple(tuple(v) for v in vectors))
    return profile, 1 - Fraction(1, k)


def approx_nash_rescaled_game(g: NormalFormGame | BimatrixGame) -> NormalFormGame:
    """The [0,1]-rescaled game the approximation guarantee refers to."""
    return rescale_unit(as_normal_form(g))
