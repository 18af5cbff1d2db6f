from fractions import Fraction as F

import pytest

from diocurves.errors import (
    DegenerateTriple,
    NotDiophantine,
    NotDiophantinePair,
    PointNotOnCurve,
    ZeroExtension,
)
from diocurves.triples import (
    canonical_points,
    euler_extension,
    extend_to_quadruple,
    induced_curves,
    make_triple,
    mutual_root,
    validate_tuple,
)
from diocurves.weierstrass import CurveQ, PointQ, dbl, is_on_curve, scalar_mul


def test_mutual_root():
    assert mutual_root(F(1), F(3)) == 2
    assert mutual_root(F(1), F(2)) is None
    assert mutual_root(F(4, 3), F(-3, 4)) == 0
    assert mutual_root(F(4, 3), F(7, 12)) == F(4, 3)


def test_make_triple_138():
    t = make_triple(1, 3, 8)
    assert t.elements == (1, 3, 8)
    assert (t.root_ab, t.root_ac, t.root_bc) == (2, 3, 5)


def test_make_triple_rational_with_negative_entries():
    t = make_triple(F(4, 3), F(-3, 4), F(7, 12))
    assert t.root_ab == 0
    assert t.root_ac == F(4, 3)
    assert t.root_bc == F(3, 4)


def test_validate_tuple_rejections():
    with pytest.raises(NotDiophantine):
        make_triple(1, 2, 3)
    with pytest.raises(DegenerateTriple):
        make_triple(0, 3, 8)
    with pytest.raises(DegenerateTriple):
        make_triple(3, 3, 8)
    # quadruple check
    roots = validate_tuple([F(1), F(3), F(8), F(120)])
    assert roots[(0, 3)] == 11
    assert roots[(2, 3)] == 31


def test_euler_extension():
    assert euler_extension(1, 3) == 8
    with pytest.raises(ZeroExtension):
        euler_extension(1, 3, sign=-1)
    assert euler_extension(3, 8) == 21
    assert euler_extension(3, 8, sign=-1) == 1
    with pytest.raises(NotDiophantinePair):
        euler_extension(1, 2)
    # rational pair
    ext = euler_extension(F(1, 4), F(33, 4))
    assert ext == F(1, 4) + F(33, 4) + 2 * F(7, 4)


def test_induced_curves_138():
    ind = induced_curves(make_triple(1, 3, 8))
    assert ind.cubic == (24, 35, 12, 1)
    assert ind.curve == CurveQ(0, 35, 0, 288, 576)
    assert ind.scale == 24
    # the identification carries cubic-model points to the companion model
    assert ind.is_on_cubic(0, 1)
    P = ind.lift(0, 1)
    assert P == PointQ(0, 24)
    assert is_on_curve(ind.curve, P)
    with pytest.raises(PointNotOnCurve):
        ind.lift(0, 2)


def test_companion_roots_are_pair_products():
    t = make_triple(F(4, 3), F(-3, 4), F(7, 12))
    ind = induced_curves(t)
    a, b, c = t.elements
    for x in (-a * b, -a * c, -b * c):
        assert is_on_curve(ind.curve, PointQ(x, 0))


def test_canonical_points_138():
    t = make_triple(1, 3, 8)
    pts = canonical_points(t)
    assert pts.two_torsion == (PointQ(-24, 0), PointQ(-8, 0), PointQ(-3, 0))
    assert pts.x_zero == PointQ(0, 24)
    assert pts.x_one == PointQ(1, 30)
    assert pts.half_x_one == PointQ(32, 280)
    E = induced_curves(t).curve
    for P in pts.all_points():
        assert is_on_curve(E, P)
    assert dbl(E, pts.half_x_one) == pts.x_one


def test_canonical_points_generic_rational_triple():
    t = make_triple(F(4, 3), F(-3, 4), F(7, 12))
    pts = canonical_points(t)
    E = induced_curves(t).curve
    for P in pts.all_points():
        assert is_on_curve(E, P)
    assert dbl(E, pts.half_x_one) == pts.x_one


def test_extend_to_quadruple_closed_form():
    ext = extend_to_quadruple(make_triple(1, 3, 8))
    assert ext.plus_branch == 120
    assert ext.minus_branch == 0
    assert not ext.plus_degenerate and ext.minus_degenerate
    assert ext.usable() == [120]

    ext = extend_to_quadruple(make_triple(2, 4, 12))
    assert ext.plus_branch == 420
    assert ext.minus_branch == 0


def test_extension_matches_group_law():
    # both branches arise as x(x_zero +- x_one)/abc on the companion model
    from diocurves.weierstrass import add, sub
    for entries in [(1, 3, 8), (2, 4, 12), (F(1, 4), F(33, 4), 12)]:
        t = make_triple(*entries)
        pts = canonical_points(t)
        ind = induced_curves(t)
        ext = extend_to_quadruple(t)
        S = add(ind.curve, pts.x_zero, pts.x_one)
        D = sub(ind.curve, pts.x_zero, pts.x_one)
        assert {S.x / ind.scale, D.x / ind.scale} == {ext.plus_branch,
                                                      ext.minus_branch}


def test_extended_family_identity():
    # {k-1, k+1, 4k} extends by 16k^3 - 4k
    for k in (F(3), F(5, 2), F(7, 3), F(-4)):
        t = make_triple(k - 1, k + 1, 4 * k)
        ext = extend_to_quadruple(t)
        assert 16 * k ** 3 - 4 * k in (ext.plus_branch, ext.minus_branch)
