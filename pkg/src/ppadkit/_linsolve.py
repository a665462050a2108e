"""Exact linear algebra for small dense systems.

Two layers: a fraction-free integer elimination used on the hot path of
support enumeration, and a Fraction-based Fourier-Motzkin layer that
finds the lexicographically least point of a polytope when an
indifference system is underdetermined.
"""

from __future__ import annotations

from fractions import Fraction


class UnboundedError(RuntimeError):
    """A minimisation objective had no lower bound over the polytope."""


def int_gauss_solve(
    rows: list[list[int]], rhs: list[int], nvars: int
) -> tuple[str, list[Fraction] | None]:
    """Solve an integer linear system exactly.

    Returns ("none", None) when inconsistent, ("unique", solution) when the
    solution is a single point, and ("multi", None) when the solution set
    has positive dimension.  Elimination is fraction-free (Bareiss), so
    intermediate values stay integral.
    """
    m = len(rows)
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    width = nvars + 1
    pivot_cols: list[int] = []
    prev = 1
    r = 0
    for c in range(nvars):
        pivot = -1
        for i in range(r, m):
            if aug[i][c]:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            aug[r], aug[pivot] = aug[pivot], aug[r]
        p = aug[r][c]
        for i in range(r + 1, m):
            f = aug[i][c]
            row_i = aug[i]
            row_r = aug[r]
            if f:
                for j in range(c, width):
                    row_i[j] = (p * row_i[j] - f * row_r[j]) // prev
            elif prev != p:
                for j in range(c, width):
                    row_i[j] = (p * row_i[j]) // prev
        prev = p
        pivot_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][nvars] != 0:
            return "none", None
    if len(pivot_cols) < nvars:
        return "multi", None
    # rows above the diagonal kept their own consistent scaling, so plain
    # back-substitution over the echelon rows is exact
    sol: list[Fraction] = [Fraction(0)] * nvars
    for i in range(len(pivot_cols) - 1, -1, -1):
        c = pivot_cols[i]
        acc = Fraction(aug[i][nvars])
        for j in range(c + 1, nvars):
            if aug[i][j]:
                acc -= aug[i][j] * sol[j]
        sol[c] = acc / aug[i][c]
    return "unique", sol


# --- Fraction-based polytope layer --------------------------------------

Affine = tuple[tuple[Fraction, ...], Fraction]  # coeffs over frees, constant


def _fm_eliminate(
    ineqs: list[Affine], var: int
) -> list[Affine] | None:
    """Eliminate one variable from `coeffs . t + const >= 0` constraints.

    Returns the projected system or None when a constant contradiction
    appears.
    """
    lowers, uppers, rest = [], [], []
    for coeffs, const in ineqs:
        c = coeffs[var]
        if c > 0:
            lowers.append((coeffs, const))
        elif c < 0:
            uppers.append((coeffs, const))
        else:
            if all(x == 0 for x in coeffs) and const < 0:
                return None
            rest.append((coeffs, const))
    for lc, lk in lowers:
        for uc, uk in uppers:
            scale_l = -uc[var]
            scale_u = lc[var]
            coeffs = tuple(
                scale_l * a + scale_u * b for a, b in zip(lc, uc)
            )
            const = scale_l * lk + scale_u * uk
            if all(x == 0 for x in coeffs) and const < 0:
                return None
            rest.append((coeffs, const))
    return rest


def minimize_affine(
    obj: Affine, ineqs: list[Affine], nvars: int
) -> Fraction | None:
    """Exact minimum of an affine objective over a polyhedron.

    Returns None when the polyhedron is empty and raises UnboundedError
    when the objective has no lower bound.
    """
    obj_coeffs, obj_const = obj
    # z >= obj(t), encoded with z as an extra final coordinate
    system: list[Affine] = [
        (tuple(-a for a in obj_coeffs) + (Fraction(1),), -obj_const)
    ]
    for coeffs, const in ineqs:
        system.append((coeffs + (Fraction(0),), const))
    for var in range(nvars):
        projected = _fm_eliminate(system, var)
        if projected is None:
            return None
        system = projected
    best: Fraction | None = None
    has_lower = False
    for coeffs, const in system:
        c = coeffs[nvars]
        if c > 0:
            has_lower = True
            bound = -const / c
            if best is None or bound > best:
                best = bound
        elif c < 0:
            # cannot arise: z appears only with a +1 coefficient
            raise AssertionError("unexpected upper bound on objective")
        elif const < 0:
            return None
    if not has_lower:
        raise UnboundedError("objective unbounded below")
    return best


def lex_min_polytope(
    eqs: list[Affine], ineqs: list[Affine], nvars: int
) -> list[Fraction] | None:
    """Lexicographically least point of {eqs hold, ineqs hold}.

    Coordinates are minimised in index order; every coordinate must be
    bounded below over the feasible set (guaranteed here because callers
    always include nonnegativity constraints).
    """
    # exprs[v] = current affine expression of coordinate v over the frees
    zero = Fraction(0)
    one = Fraction(1)
    exprs: list[Affine] = [
        (tuple(one if j == v else zero for j in range(nvars)), zero)
        for v in range(nvars)
    ]
    active = list(range(nvars))
    system = list(ineqs)

    def substitute(target: int, replacement: Affine) -> None:
        # replace free variable `target` with an affine over the others
        rc, rk = replacement
        nonlocal system, exprs
        def subst_one(aff: Affine) -> Affine:
            coeffs, const = aff
            c = coeffs[target]
            if c == 0:
                return aff
            new_coeffs = tuple(
                a + c * r if j != target else zero
                for j, (a, r) in enumerate(zip(coeffs, rc))
            )
            return new_coeffs, const + c * rk
        system = [subst_one(a) for a in system]
        exprs = [subst_one(a) for a in exprs]

    def eliminate_with_equality(aff: Affine, value: Fraction) -> bool:
        coeffs, const = aff
        pivot = next((j for j in active if coeffs[j] != 0), None)
        if pivot is None:
            return const == value
        rest = tuple(
            (-coeffs[j] / coeffs[pivot]) if j != pivot else zero
            for j in range(nvars)
        )
        substitute(pivot, (rest, (value - const) / coeffs[pivot]))
        active.remove(pivot)
        return True

    for coeffs, const in eqs:
        if not eliminate_with_equality((coeffs, const), zero):
            return None

    result: list[Fraction] = [zero] * nvars
    for v in range(nvars):
        aff = exprs[v]
        if any(aff[0][j] != 0 for j in active):
            m = minimize_affine(aff, system, nvars)
            if m is None:
                return None
            if not eliminate_with_equality(aff, m):
                return None
            result[v] = m
        else:
            result[v] = aff[1]
        # re-read: expressions may have been substituted
    # feasibility when every coordinate was already pinned by equations
    if all(all(c == 0 for c in coeffs) for coeffs, _ in system):
        if any(const < 0 for _, const in system):
            return None
    else:
        probe = minimize_affine(
            (tuple(zero for _ in range(nvars)), zero), system, nvars
        )
        if probe is None:
            return None
    return result
