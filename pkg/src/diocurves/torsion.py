"""Rational torsion subgroups, point halving, and reduction bounds.

The torsion group is assembled from exact rational roots of division
polynomials (and, when the curve has full rational two-torsion, from the
much cheaper halving formulas).  A gcd of good-reduction point counts
serves as an independent upper bound; together with the classification of
possible rational torsion shapes this makes the returned group provably
complete, not just a lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import Poly, Rational, symbols

from .errors import BadReduction, FormMismatch
from .factoring import DEFAULT_BUDGET, is_probable_prime
from .rationals import QQ, is_perfect_square, square_class
from .sieve import count_points_fp
from .weierstrass import (
    INFINITY,
    CurveQ,
    ModelMap,
    PointQ,
    add,
    complete_the_square,
    dbl,
    invariants,
    map_point,
)

_X = symbols("x")

# every possible shape of the rational torsion group, as invariant factors
ALLOWED_SHAPES = frozenset(
    [()] + [(n,) for n in (2, 3, 4, 5, 6, 7, 8, 9, 10, 12)]
    + [(2, 2), (2, 4), (2, 6), (2, 8)]
)
# element orders are therefore among {1,...,10,12}: prime powers up to 9
_SEARCH_PRIME_POWERS = (3, 4, 5, 7, 8, 9)
_MAX_ELEMENT_ORDER = 12


def rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """All rational roots of sum coeffs[i] x^(n-i), sorted ascending."""
    cs = [Rational(QQ(c).numerator, QQ(c).denominator) for c in coeffs]
    while cs and cs[0] == 0:
        cs = cs[1:]
    if len(cs) <= 1:
        return []
    poly = Poly(cs, _X, domain="QQ")
    return sorted(QQ(int(r.p), int(r.q)) for r in poly.ground_roots())


def points_with_x(E: CurveQ, x0: Fraction) -> list[PointQ]:
    """The rational points of E with the given x, solved from the quadratic in y."""
    x0 = QQ(x0)
    B = E.a1 * x0 + E.a3
    C = x0 ** 3 + E.a2 * x0 * x0 + E.a4 * x0 + E.a6
    root = is_perfect_square(B * B + 4 * C)
    if root is None:
        return []
    ys = {(-B + root) / 2, (-B - root) / 2}
    return [PointQ(x0, y) for y in sorted(ys)]


def two_torsion_points(E: CurveQ) -> list[PointQ]:
    """The rational points of order exactly two, sorted by x."""
    inv = invariants(E)
    out = []
    for x0 in rational_roots([QQ(4), inv.b2, 2 * inv.b4, inv.b6]):
        out.append(PointQ(x0, -(E.a1 * x0 + E.a3) / 2))
    return out


def point_order(E: CurveQ, P: PointQ, cap: int = _MAX_ELEMENT_ORDER) -> int | None:
    """The exact order of P, or None when P is of infinite order.

    Rational torsion orders never exceed 12, so a short multiple scan
    settles the question.
    """
    acc = P
    for n in range(1, cap + 1):
        if acc.is_infinity:
            return n
        acc = add(E, acc, P)
    return None


def reduction_torsion_bound(E: CurveQ, prime_count: int = 20) -> int:
    """gcd of #E(F_p) over the first prime_count odd good primes.

    The torsion group injects into every such reduction, so its order
    divides the returned value.
    """
    g = 0
    used = 0
    p = 3
    while used < prime_count:
        try:
            g = math.gcd(g, count_points_fp(E, p))
        except BadReduction:
            pass
        else:
            used += 1
            if g == 1:
                break
        p += 2
        while not is_probable_prime(p):
            p += 2
    return g


# ---------------------------------------------------------------------------
# halving


def _square_completed(E: CurveQ) -> tuple[CurveQ, ModelMap, list[Fraction]]:
    Es, M = complete_the_square(E)
    roots = rational_roots([QQ(1), Es.a2, Es.a4, Es.a6])
    if len(roots) != 3:
        raise FormMismatch(
            "operation needs all three two-torsion x-coordinates rational "
            f"(found {len(roots)})")
    return Es, M, roots


def halving_obstruction(E: CurveQ, P: PointQ,
                        support: Sequence[int] | None = None,
                        budget: int = DEFAULT_BUDGET) -> tuple[int, int, int]:
    """Square classes of (x - e_i) at P on a full two-torsion curve.

    P is in 2 E(Q) exactly when the result is (1, 1, 1).  At a two-torsion
    point the vanishing coordinate is replaced by the product of the other
    two differences, keeping the vector a group homomorphism image.

    When the support of the curve's discriminant is supplied, classes are
    computed by stripping those primes and never factoring the point
    coordinates themselves.
    """
    Es, M, roots = _square_completed(E)
    if P.is_infinity:
        return (1, 1, 1)
    Ps = map_point(E, M, P)
    x0 = Ps.x
    diffs = [x0 - e for e in roots]
    if 0 in diffs:
        i = diffs.index(0)
        e = roots[i]
        diffs[i] = math.prod(e - roots[j] for j in range(3) if j != i)
    return tuple(_square_class_in_support(d, support, budget) for d in diffs)


def _square_class_in_support(q: Fraction, support: Sequence[int] | None,
                             budget: int) -> int:
    from .rationals import square_class_supported
    if support is not None:
        cls = square_class_supported(q, support)
        if cls is not None:
            return cls
    return square_class(q, budget)


def halve_point(E: CurveQ, P: PointQ) -> list[PointQ]:
    """All rational points S with 2S = P, sorted; empty when none exist.

    Requires full rational two-torsion (FormMismatch otherwise).
    """
    Es, M, roots = _square_completed(E)
    e1, e2, e3 = roots
    Ps = map_point(E, M, P)
    found: set[PointQ] = set()

    if Ps.is_infinity:
        found.add(INFINITY)
        for e in roots:
            found.add(PointQ(e, 0))
    elif Ps.y == 0:
        # halving a two-torsion point
        e = Ps.x
        others = [r for r in roots if r != e]
        w2 = is_perfect_square(e - others[0])
        w3 = is_perfect_square(e - others[1])
        if w2 is not None and w3 is not None:
            for xi in (e + w2 * w3, e - w2 * w3):
                for S in points_with_x(Es, xi):
                    if dbl(Es, S) == Ps:
                        found.add(S)
    else:
        ws = [is_perfect_square(Ps.x - e) for e in roots]
        if None not in ws:
            w1, w2, w3 = ws
            for s1 in (1, -1):
                for s2 in (1, -1):
                    for s3 in (1, -1):
                        if s1 * s2 * s3 * w1 * w2 * w3 != Ps.y:
                            continue
                        xi = (Ps.x + s1 * s2 * w1 * w2
                              + s1 * s3 * w1 * w3 + s2 * s3 * w2 * w3)
                        for S in points_with_x(Es, xi):
                            if dbl(Es, S) == Ps:
                                found.add(S)

    Minv = M.inverse()
    out = [map_point(Es, Minv, S) for S in found]
    return sorted(out, key=_point_sort_key)


def _point_sort_key(P: PointQ):
    if P.is_infinity:
        return (0, 0, 0)
    return (1, P.x, P.y)


# ---------------------------------------------------------------------------
# division polynomials (x-only parts)


def _division_poly_roots(E: CurveQ, q: int) -> list[Fraction]:
    """Rational x-coordinates of points whose order divides q (odd part
    of the kernel for even q)."""
    inv = invariants(E)
    b2, b4, b6, b8 = (Rational(v.numerator, v.denominator)
                      for v in (inv.b2, inv.b4, inv.b6, inv.b8))
    F2 = Poly([4, b2, 2 * b4, b6], _X, domain="QQ")
    f3 = Poly([3, b2, 3 * b4, 3 * b6, b8], _X, domain="QQ")
    f4 = Poly([2, b2, 5 * b4, 10 * b6, 10 * b8,
               b2 * b8 - b4 * b6, b4 * b8 - b6 * b6], _X, domain="QQ")
    polys = {3: f3, 4: f4}
    if q in (5, 7, 8, 9):
        polys[5] = F2 ** 2 * f4 - f3 ** 3
    if q in (7, 8, 9):
        polys[6] = f3 * (polys[5] - f4 ** 2)
    if q == 7:
        polys[7] = polys[5] * f3 ** 3 - F2 ** 2 * f4 ** 3
    if q == 8:
        polys[8] = f4 * (polys[6] * f3 ** 2 - polys[5] ** 2)
    if q == 9:
        polys[9] = F2 ** 2 * polys[6] * f4 ** 3 - f3 * polys[5] ** 3
    poly = polys[q]
    return sorted(QQ(int(r.p), int(r.q)) for r in poly.ground_roots())


def _torsion_candidates_from_poly(E: CurveQ, q: int) -> list[PointQ]:
    pts = []
    for x0 in _division_poly_roots(E, q):
        pts.extend(points_with_x(E, x0))
    return pts


# ---------------------------------------------------------------------------
# assembly


@dataclass(frozen=True)
class TorsionSubgroup:
    points: tuple[PointQ, ...]
    order: int
    invariants: tuple[int, ...]     # invariant factors, e.g. (2, 8)
    reduction_bound: int
    exact: bool

    def __repr__(self):
        if not self.invariants:
            return "TorsionSubgroup(trivial)"
        return "TorsionSubgroup(%s)" % " x ".join(
            "Z/%d" % d for d in self.invariants)


def torsion_subgroup(E: CurveQ, prime_count: int = 20) -> TorsionSubgroup:
    """The full rational torsion subgroup of E.

    Every prime-power element order that divides the reduction bound and
    can occur at all is searched, and the group order always divides the
    bound, so the returned group is complete; `exact` records that.  The
    bound itself stays available for independent cross-checks.
    """
    bound = reduction_torsion_bound(E, prime_count)
    two = two_torsion_points(E)
    pts: set[PointQ] = {INFINITY, *two}

    if len(two) == 3:
        # full two-torsion: grow the 2-Sylow part by halving
        if bound % 4 == 0:
            order4 = []
            for T in two:
                for S in halve_point(E, T):
                    if point_order(E, S) == 4:
                        order4.append(S)
                        pts.add(S)
            if bound % 8 == 0 and order4:
                for S in order4:
                    for R in halve_point(E, S):
                        if point_order(E, R) == 8:
                            pts.add(R)
    else:
        for q in (4, 8):
            if bound % q == 0:
                for P in _torsion_candidates_from_poly(E, q):
                    if point_order(E, P) is not None:
                        pts.add(P)

    for q in (3, 5, 7, 9):
        if bound % q == 0:
            for P in _torsion_candidates_from_poly(E, q):
                if point_order(E, P) is not None:
                    pts.add(P)

    # close under addition (the group is tiny, a fixpoint pass is enough)
    changed = True
    while changed:
        changed = False
        frozen = list(pts)
        for i, P in enumerate(frozen):
            for Q in frozen[i:]:
                S = add(E, P, Q)
                if S not in pts:
                    pts.add(S)
                    changed = True
        if len(pts) > 16:
            raise ArithmeticError("torsion closure exceeded the rational maximum")

    order = len(pts)
    n_two = sum(1 for P in pts if not P.is_infinity and dbl(E, P).is_infinity)
    if order == 1:
        shape: tuple[int, ...] = ()
    elif n_two == 3:
        shape = (2, order // 2)
    else:
        shape = (order,)
    if shape not in ALLOWED_SHAPES:  # pragma: no cover - would be a defect
        raise ArithmeticError(f"impossible torsion shape {shape}")
    assert bound % order == 0
    return TorsionSubgroup(tuple(sorted(pts, key=_point_sort_key)),
                           order, shape, bound, True)
