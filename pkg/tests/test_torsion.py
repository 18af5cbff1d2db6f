from fractions import Fraction as F

import pytest

from diocurves.errors import FormMismatch
from diocurves.torsion import (
    halve_point,
    halving_obstruction,
    point_order,
    points_with_x,
    rational_roots,
    reduction_torsion_bound,
    torsion_subgroup,
    two_torsion_points,
)
from diocurves.triples import induced_curves, make_triple
from diocurves.weierstrass import INFINITY, CurveQ, PointQ, dbl, is_on_curve

E37 = CurveQ(0, 0, 1, -1, 0)          # trivial torsion
E11 = CurveQ(0, -1, 1, -10, -20)      # Z/5
E14 = CurveQ(1, 0, 1, 4, -6)          # Z/6
E15 = CurveQ(1, 1, 1, 0, 0)           # Z/4
E27 = CurveQ(0, 0, 1, 0, 0)           # Z/3
EK = CurveQ(0, 2, 0, -3, 0)           # y^2 = x(x-1)(x+3), Z/2 x Z/4


def test_rational_roots():
    assert rational_roots([F(1), F(0), F(-4)]) == [-2, 2]
    assert rational_roots([F(6), F(-5), F(1)]) == [F(1, 3), F(1, 2)]
    assert rational_roots([F(1), F(0), F(2)]) == []
    assert rational_roots([F(0), F(1), F(3)]) == [-3]
    assert rational_roots([F(5)]) == []


def test_points_with_x():
    assert points_with_x(E11, F(5)) == [PointQ(5, -6), PointQ(5, 5)]
    assert points_with_x(E11, F(6)) == []
    assert points_with_x(EK, F(0)) == [PointQ(0, 0)]


def test_two_torsion_points():
    assert two_torsion_points(E37) == []
    assert two_torsion_points(EK) == [PointQ(-3, 0), PointQ(0, 0), PointQ(1, 0)]
    # one rational two-torsion point on the Z/6 curve
    pts = two_torsion_points(E14)
    assert len(pts) == 1
    assert dbl(E14, pts[0]) == INFINITY


def test_point_order():
    assert point_order(E11, PointQ(5, 5)) == 5
    assert point_order(E15, PointQ(0, 0)) == 4
    assert point_order(EK, PointQ(0, 0)) == 2
    assert point_order(E37, PointQ(0, 0)) is None
    assert point_order(E37, INFINITY) == 1


def test_reduction_bound_divisible_by_torsion():
    assert reduction_torsion_bound(E11) % 5 == 0
    assert reduction_torsion_bound(E15) % 4 == 0
    assert reduction_torsion_bound(EK) % 8 == 0
    assert reduction_torsion_bound(E37) == 1


def test_torsion_trivial():
    T = torsion_subgroup(E37)
    assert T.order == 1 and T.invariants == ()
    assert T.points == (INFINITY,)
    assert T.exact


def test_torsion_cyclic_groups():
    for E, n in ((E11, 5), (E15, 4), (E27, 3), (E14, 6)):
        T = torsion_subgroup(E)
        assert T.order == n
        assert T.invariants == (n,)
        for P in T.points:
            assert is_on_curve(E, P)
            o = point_order(E, P)
            assert o is not None and n % o == 0


def test_torsion_z2z4():
    T = torsion_subgroup(EK)
    assert T.invariants == (2, 4)
    assert T.order == 8
    orders = sorted(point_order(EK, P) for P in T.points)
    assert orders == [1, 2, 2, 2, 4, 4, 4, 4]


def test_torsion_z2z2_from_triple():
    E = induced_curves(make_triple(1, 3, 8)).curve
    T = torsion_subgroup(E)
    assert T.invariants[0] == 2 and T.order in (4, 8, 12, 16)
    # the three pair-product points are always there
    for x in (-24, -8, -3):
        assert PointQ(x, 0) in T.points


def test_halve_point_quarters():
    halves = halve_point(EK, PointQ(1, 0))
    assert halves == [PointQ(-1, -2), PointQ(-1, 2), PointQ(3, -6), PointQ(3, 6)]
    for S in halves:
        assert dbl(EK, S) == PointQ(1, 0)
    assert halve_point(EK, PointQ(0, 0)) == []
    assert halve_point(EK, PointQ(-3, 0)) == []


def test_halve_point_infinity():
    halves = halve_point(EK, INFINITY)
    assert halves == [INFINITY, PointQ(-3, 0), PointQ(0, 0), PointQ(1, 0)]


def test_halve_point_generic():
    t = make_triple(1, 3, 8)
    E = induced_curves(t).curve
    from diocurves.triples import canonical_points
    pts = canonical_points(t)
    halves = halve_point(E, pts.x_one)
    assert pts.half_x_one in halves
    assert len(halves) == 4
    for S in halves:
        assert dbl(E, S) == pts.x_one


def test_halve_point_needs_full_two_torsion():
    with pytest.raises(FormMismatch):
        halve_point(E14, PointQ(2, 2))
    with pytest.raises(FormMismatch):
        halving_obstruction(E37, PointQ(0, 0))


def test_halving_obstruction_values():
    # roots ascend: e = (-3, 0, 1)
    assert halving_obstruction(EK, INFINITY) == (1, 1, 1)
    assert halving_obstruction(EK, PointQ(1, 0)) == (1, 1, 1)
    assert halving_obstruction(EK, PointQ(0, 0)) == (3, -3, -1)
    assert halving_obstruction(EK, PointQ(-3, 0)) == (3, -3, -1)
    # images multiply like the points add: T(-3) + T(0) = T(1)
    prod = tuple(a * b for a, b in zip((3, -3, -1), (3, -3, -1)))
    from diocurves.rationals import square_class
    from fractions import Fraction
    assert tuple(square_class(Fraction(v)) for v in prod) == (1, 1, 1)


def test_halving_obstruction_is_trivial_on_doubles():
    t = make_triple(3, 8, 21)
    E = induced_curves(t).curve
    from diocurves.triples import canonical_points
    pts = canonical_points(t)
    D = dbl(E, pts.x_zero)
    assert halving_obstruction(E, D) == (1, 1, 1)
    assert halve_point(E, D) != []


def test_halving_obstruction_supported_path():
    # supplying the discriminant support must not change any value
    from diocurves.weierstrass import invariants
    from diocurves.factoring import factor_best_effort
    t = make_triple(1, 3, 8)
    E = induced_curves(t).curve
    disc = int(invariants(E).disc)
    support = [2] + [p for p, _ in factor_best_effort(disc).factors]
    from diocurves.triples import canonical_points
    pts = canonical_points(t)
    for P in pts.all_points():
        assert halving_obstruction(E, P, support=support) == \
            halving_obstruction(E, P)
