"""Normal-form games with exact rational payoffs.

Payoffs, probabilities and the epsilon in approximate-equilibrium checks
are all `fractions.Fraction`; no floating point enters verification or
solving anywhere in the package, so every verdict is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

PAYOFF_TABLE_MAX_ENTRIES = 10**6


class GameFormatError(ValueError):
    """Malformed game or profile text."""


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' or integer text into an exact rational."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise GameFormatError(f"not a rational: {text!r} ({exc})") from exc


def _profile_index(action_counts: tuple[int, ...], profile: tuple[int, ...]) -> int:
    idx = 0
    for count, action in zip(action_counts, profile):
        idx = idx * count + action
    return idx


@dataclass(frozen=True)
class NormalFormGame:
    """k >= 2 players; payoffs[i] is player i's flat payoff tensor over
    pure profiles in lexicographic order."""

    action_counts: tuple[int, ...]
    payoffs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        k = len(self.action_counts)
        if k < 2:
            raise GameFormatError("a game needs at least 2 players")
        if any(c < 2 for c in self.action_counts):
            raise GameFormatError("every player needs at least 2 actions")
        n_profiles = 1
        for c in self.action_counts:
            n_profiles *= c
        if k * n_profiles > PAYOFF_TABLE_MAX_ENTRIES:
            raise GameFormatError("payoff table exceeds the dense-storage cap")
        if len(self.payoffs) != k:
            raise GameFormatError("need one payoff tensor per player")
        for tensor in self.payoffs:
            if len(tensor) != n_profiles:
                raise GameFormatError(
                    f"payoff tensor has {len(tensor)} entries, expected {n_profiles}"
                )

    @property
    def k(self) -> int:
        return len(self.action_counts)

    def payoff(self, player: int, profile: tuple[int, ...]) -> Fraction:
        return self.payoffs[player][_profile_index(self.action_counts, profile)]

    def pure_profiles(self):
        return itertools.product(*(range(c) for c in self.action_counts))


@dataclass(frozen=True)
class BimatrixGame:
    """Two-player special case stored as row/column payoff matrices."""

    row_payoffs: tuple[tuple[Fraction, ...], ...]
    col_payoffs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        n1 = len(self.row_payoffs)
        if n1 < 2 or len(self.col_payoffs) != n1:
            raise GameFormatError("payoff matrices must have equal shape, >= 2 rows")
        n2 = len(self.row_payoffs[0])
        if n2 < 2:
            raise GameFormatError("every player needs at least 2 actions")
        for matrix in (self.row_payoffs, self.col_payoffs):
            if any(len(row) != n2 for row in matrix):
                raise GameFormatError("ragged payoff matrix")

    @property
    def n1(self) -> int:
        return len(self.row_payoffs)

    @property
    def n2(self) -> int:
        return len(self.row_payoffs[0])

    def to_normal_form(self) -> NormalFormGame:
        row = tuple(v for r in self.row_payoffs for v in r)
        col = tuple(v for r in self.col_payoffs for v in r)
        return NormalFormGame(action_counts=(self.n1, self.n2), payoffs=(row, col))

    @classmethod
    def from_matrices(cls, row, col) -> "BimatrixGame":
        to_fr = lambda m: tuple(tuple(Fraction(v) for v in r) for r in m)
        return cls(row_payoffs=to_fr(row), col_payoffs=to_fr(col))


def as_normal_form(g: NormalFormGame | BimatrixGame) -> NormalFormGame:
    return g.to_normal_form() if isinstance(g, BimatrixGame) else g


@dataclass(frozen=True)
class MixedProfile:
    """One exact probability vector per player; sums are checked exactly."""

    vectors: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        for vec in self.vectors:
            if any(p < 0 for p in vec):
                raise GameFormatError("negative probability")
            if sum(vec) != 1:
                raise GameFormatError(f"probabilities sum to {sum(vec)}, not 1")

    @classmethod
    def of(cls, *vectors) -> "MixedProfile":
        return cls(tuple(tuple(Fraction(p) for p in vec) for vec in vectors))

    @classmethod
    def pure(cls, action_counts: tuple[int, ...], actions: tuple[int, ...]) -> "MixedProfile":
        return cls.of(
            *(
                [Fraction(1 if j == a else 0) for j in range(c)]
                for c, a in zip(action_counts, actions)
            )
        )

    def support(self, player: int) -> tuple[int, ...]:
        return tuple(j for j, p in enumerate(self.vectors[player]) if p > 0)


def _check_shape(g: NormalFormGame, prof: MixedProfile) -> None:
    if len(prof.vectors) != g.k or any(
        len(v) != c for v, c in zip(prof.vectors, g.action_counts)
    ):
        raise GameFormatError("profile shape does not match the game")


def expected_payoff(
    g: NormalFormGame | BimatrixGame, prof: MixedProfile, player: int
) -> Fraction:
    """Exact expected payoff; zero-probability profiles are skipped."""
    g = as_normal_form(g)
    _check_shape(g, prof)
    supports = [prof.support(i) for i in range(g.k)]
    total = Fraction(0)
    for pure in itertools.product(*supports):
        weight = Fraction(1)
        for i, a in enumerate(pure):
            weight *= prof.vectors[i][a]
        total += g.payoff(player, pure) * weight
    return total


def pure_deviation_payoff(
    g: NormalFormGame | BimatrixGame, prof: MixedProfile, player: int, action: int
) -> Fraction:
    """Expected payoff to `player` playing `action` against the others."""
    g = as_normal_form(g)
    _check_shape(g, prof)
    if not 0 <= action < g.action_counts[player]:
        raise GameFormatError(f"action {action} out of range for player {player}")
    return _deviation_payoffs(g, prof, player)[action]


def _deviation_payoffs(g: NormalFormGame, prof: MixedProfile, player: int) -> list[Fraction]:
    other_supports = [
        prof.support(i) if i != player else (None,) for i in range(g.k)
    ]
    out = [Fraction(0)] * g.action_counts[player]
    for pure in itertools.product(*other_supports):
        weight = Fraction(1)
        for i, a in enumerate(pure):
            if i != player:
                weight *= prof.vectors[i][a]
        profile = list(pure)
        for j in range(g.action_counts[player]):
            profile[player] = j
            out[j] += g.payoff(player, tuple(profile)) * weight
    return out


def best_response_set(
    g: NormalFormGame | BimatrixGame, prof: MixedProfile, player: int
) -> set[int]:
    g = as_normal_form(g)
    _check_shape(g, prof)
    devs = _deviation_payoffs(g, prof, player)
    best = max(devs)
    return {j for j, v in enumerate(devs) if v == best}


@dataclass(frozen=True)
class NashVerdict:
    accepted: bool
    max_violation: Fraction

    def __bool__(self) -> bool:
        return self.accepted


def verify_nash(
    g: NormalFormGame | BimatrixGame,
    prof: MixedProfile,
    eps: Fraction = Fraction(0),
) -> NashVerdict:
    """Exact epsilon-equilibrium check.

    Accepts iff no action played with positive probability trails some
    pure deviation by more than eps.  max_violation is the largest margin
    by which that fails (0 when accepted); comparisons are exact.
    """
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be >= 0")
    g = as_normal_form(g)
    _check_shape(g, prof)
    worst = Fraction(0)
    for i in range(g.k):
        devs = _deviation_payoffs(g, prof, i)
        best = max(devs)
        for j, prob in enumerate(prof.vectors[i]):
            if prob > 0:
                gap = best - devs[j] - eps
                if gap > worst:
                    worst = gap
    return NashVerdict(accepted=(worst == 0), max_violation=worst)


def max_payoff_regret(
    g: NormalFormGame | BimatrixGame, prof: MixedProfile
) -> Fraction:
    """Largest gain any player can get by a pure deviation.

    This is the additive (expected-payoff) approximation measure: the
    profile is an additive eps-equilibrium iff the result is <= eps.  It
    is weaker than verify_nash, which demands that every action inside a
    support is individually within eps of the best response.
    """
    g = as_normal_form(g)
    _check_shape(g, prof)
    worst = Fraction(0)
    for i in range(g.k):
        devs = _deviation_payoffs(g, prof, i)
        achieved = sum(p * d for p, d in zip(prof.vectors[i], devs))
        gain = max(devs) - achieved
        if gain > worst:
            worst = gain
    return worst


def rescale_unit(g: NormalFormGame | BimatrixGame) -> NormalFormGame:
    """Affinely map each player's payoffs onto [0, 1] (constants to 0).

    Rescaling is per player, so best responses and equilibria are
    preserved; additive approximation guarantees are stated against this
    normalisation.
    """
    g = as_normal_form(g)
    tensors = []
    for tensor in g.payoffs:
        lo, hi = min(tensor), max(tensor)
        if lo == hi:
            tensors.append(tuple(Fraction(0) for _ in tensor))
        else:
            span = hi - lo
            tensors.append(tuple((v - lo) / span for v in tensor))
    return NormalFormGame(action_counts=g.action_counts, payoffs=tuple(tensors))


def serialize_game(g: NormalFormGame | BimatrixGame) -> str:
    g = as_normal_form(g)
    lines = [f"GAME k={g.k}", "ACTIONS " + " ".join(str(c) for c in g.action_counts)]
    for pure in g.pure_profiles():
        actions = " ".join(str(a) for a in pure)
        values = " ".join(str(g.payoff(i, pure)) for i in range(g.k))
        lines.append(f"{actions} : {values}")
    return "\n".join(lines) + "\n"


def parse_game(text: str) -> NormalFormGame:
    lines = [
        (no, ln.strip())
        for no, ln in enumerate(text.splitlines(), start=1)
        if ln.strip()
    ]
    if not lines or not lines[0][1].startswith("GAME k="):
        raise GameFormatError("line 1: missing 'GAME k=<k>' header")
    try:
        k = int(lines[0][1].split("=", 1)[1])
    except ValueError:
        raise GameFormatError(f"line {lines[0][0]}: bad player count")
    if len(lines) < 2 or not lines[1][1].startswith("ACTIONS "):
        raise GameFormatError("line 2: missing 'ACTIONS' line")
    counts = tuple(int(t) for t in lines[1][1].split()[1:])
    if len(counts) != k:
        raise GameFormatError(f"line {lines[1][0]}: expected {k} action counts")
    n_profiles = 1
    for c in counts:
        n_profiles *= c
    payoffs = [[None] * n_profiles for _ in range(k)]
    if len(lines) - 2 != n_profiles:
        raise GameFormatError(
            f"expected {n_profiles} payoff lines, found {len(lines) - 2}"
        )
    for no, line in lines[2:]:
        if ":" not in line:
            raise GameFormatError(f"line {no}: missing ':' separator")
        left, right = line.split(":", 1)
        try:
            profile = tuple(int(t) for t in left.split())
        except ValueError:
            raise GameFormatError(f"line {no}: bad action indices")
        if len(profile) != k or any(
            not 0 <= a < c for a, c in zip(profile, counts)
        ):
            raise GameFormatError(f"line {no}: profile out of range")
        values = right.split()
        if len(values) != k:
            raise GameFormatError(f"line {no}: expected {k} payoffs")
        idx = _profile_index(counts, profile)
        for i, tok in enumerate(values):
            try:
                payoffs[i][idx] = parse_rational(tok)
            except GameFormatError as exc:
                raise GameFormatError(f"line {no}: {exc}") from exc
    for tensor in payoffs:
        if any(v is None for v in tensor):
            raise GameFormatError("payoff table is incomplete")
    return NormalFormGame(
        action_counts=counts, payoffs=tuple(tuple(t) for t in payoffs)
    )


def serialize_profile(prof: MixedProfile) -> str:
    lines = ["PROFILE"]
    for vec in prof.vectors:
        lines.append(" ".join(str(p) for p in vec))
    return "\n".join(lines) + "\n"


def parse_profile(text: str) -> MixedProfile:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "PROFILE":
        raise GameFormatError("missing 'PROFILE' header")
    vectors = []
    for line in lines[1:]:
        vectors.append(tuple(parse_rational(t) for t in line.split()))
    if len(vectors) < 2:
        raise GameFormatError("a profile needs at least 2 players")
    return MixedProfile(vectors=tuple(vectors))
