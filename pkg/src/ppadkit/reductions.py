"""Symmetrisation of bimatrix games, equilibrium recovery, and the
classic example games used as exact fixtures throughout the test suite."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .games import BimatrixGame, GameFormatError, MixedProfile, verify_nash


@dataclass(frozen=True)
class SymmetrizationCertificate:
    """How a game was embedded into its symmetric double.

    shift makes every payoff of the embedded game strictly positive;
    orientation records which half-pair carried the recovered equilibrium
    and is filled in by recover_equilibrium.
    """

    shift: Fraction
    block_dims: tuple[int, int]
    orientation: str | None = None


def symmetrize(g: BimatrixGame) -> tuple[BimatrixGame, SymmetrizationCertificate]:
    """Embed an n x n game into a symmetric 2n x 2n game.

    The doubled game has zero blocks on the diagonal and the positively
    shifted payoff matrices off-diagonal; its row matrix equals the
    transpose of its column matrix.
    """
    if g.n1 != g.n2:
        raise GameFormatError(
            f"symmetrisation needs a square game, got {g.n1}x{g.n2}"
        )
    n = g.n1
    lowest = min(
        min(min(row) for row in g.row_payoffs),
        min(min(row) for row in g.col_payoffs),
    )
    shift = Fraction(0) if lowest > 0 else 1 - lowest
    rs = [[v + shift for v in row] for row in g.row_payoffs]
    cs = [[v + shift for v in row] for row in g.col_payoffs]
    zero = Fraction(0)
    big_rows = []
    for i in range(n):
        big_rows.append(tuple([zero] * n + rs[i]))
    for j in range(n):
        big_rows.append(tuple([cs[i][j] for i in range(n)] + [zero] * n))
    row_matrix = tuple(big_rows)
    col_matrix = tuple(tuple(row_matrix[c][r] for c in range(2 * n)) for r in range(2 * n))
    doubled = BimatrixGame(row_payoffs=row_matrix, col_payoffs=col_matrix)
    return doubled, SymmetrizationCertificate(shift=shift, block_dims=(n, n))


def recover_equilibrium(
    g: BimatrixGame,
    cert: SymmetrizationCertificate,
    prof: MixedProfile,
) -> tuple[MixedProfile, SymmetrizationCertificate]:
    """Map an equilibrium of the symmetric double back onto the source game.

    With p (q) the mass players 1 (2) put on their first n actions, the
    first orientation rescales player 1's first half against player 2's
    second half; the mirror orientation swaps the roles.  The profile must
    be an exact equilibrium of the doubled game.
    """
    n = cert.block_dims[0]
    if g.n1 != n or g.n2 != n:
        raise GameFormatError("certificate does not match the source game")
    doubled, _ = symmetrize(g)
    if not verify_nash(doubled, prof, Fraction(0)):
        raise ValueError("profile is not an equilibrium of the symmetrised game")
    v1, v2 = prof.vectors
    if len(v1) != 2 * n or len(v2) != 2 * n:
        raise GameFormatError("profile shape does not match the doubled game")
    p = sum(v1[:n])
    q = sum(v2[:n])
    if p > 0 and 1 - q > 0:
        row = tuple(x / p for x in v1[:n])
        col = tuple(x / (1 - q) for x in v2[n:])
        orientation = "first"
    elif q > 0 and 1 - p > 0:
        row = tuple(x / q for x in v2[:n])
        col = tuple(x / (1 - p) for x in v1[n:])
        orientation = "mirror"
    else:
        # p=q=1 or p=q=0 cannot be an equilibrium of the doubled game: both
        # players earn 0 there while the shifted payoffs are positive.
        raise ValueError(
            "degenerate half-masses (p=q=0 or p=q=1); not reachable from a "
            "verified equilibrium of the symmetrised game"
        )
    recovered = MixedProfile(vectors=(row, col))
    return recovered, replace(cert, orientation=orientation)


def _bimatrix(rows: list[list[tuple[int, int]]]) -> BimatrixGame:
    return BimatrixGame.from_matrices(
        [[cell[0] for cell in row] for row in rows],
        [[cell[1] for cell in row] for row in rows],
    )


def fixture_rps() -> BimatrixGame:
    """Rock-paper-scissors: win 1, lose 1, draw 0."""
    return _bimatrix(
        [
            [(0, 0), (-1, 1), (1, -1)],
            [(1, -1), (0, 0), (-1, 1)],
            [(-1, 1), (1, -1), (0, 0)],
        ]
    )


def fixture_stag_hunt() -> BimatrixGame:
    """Stag hunt: cooperation pays 8, a lone hare hunter gets 1."""
    return _bimatrix([[(8, 8), (0, 1)], [(1, 0), (1, 1)]])


def fixture_matching_pennies() -> BimatrixGame:
    """Classic matching pennies: the loser pays the winner one unit."""
    return _bimatrix([[(1, -1), (-1, 1)], [(-1, 1), (1, -1)]])


def fixture_gmp(n: int) -> BimatrixGame:
    """Generalised matching pennies: (1,-1) on the diagonal, else (0,0)."""
    if n < 2:
        raise GameFormatError("generalised matching pennies needs n >= 2")
    return _bimatrix(
        [[(1, -1) if i == j else (0, 0) for j in range(n)] for i in range(n)]
    )


FIXTURES = {
    "rps": fixture_rps,
    "stag_hunt": fixture_stag_hunt,
    "matching_pennies": fixture_matching_pennies,
}
