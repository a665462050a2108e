import random

from ppadkit.games import BimatrixGame
from ppadkit.solvers import DegeneracyError, lemke_howson


def random_bimatrix(rnd: random.Random, n1: int, n2: int, lo=0, hi=999) -> BimatrixGame:
    mk = lambda: [[rnd.randint(lo, hi) for _ in range(n2)] for _ in range(n1)]
    return BimatrixGame.from_matrices(mk(), mk())


def random_nondegenerate_bimatrix(
    rnd: random.Random, n1: int, n2: int
) -> BimatrixGame:
    """Draw wide-range integer games until none of the pivot runs ties.

    A ratio tie with the lexicographic rule disabled is exactly the
    operational signature of degeneracy, so rejection on it leaves only
    nondegenerate games.
    """
    while True:
        g = random_bimatrix(rnd, n1, n2)
        try:
            for label in range(n1 + n2):
                lemke_howson(g, label, lexicographic=False)
        except DegeneracyError:
            continue
        return g
