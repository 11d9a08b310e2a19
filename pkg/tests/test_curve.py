import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ecblind.curve import (
    INFINITY,
    CurveParams,
    Point,
    add,
    double,
    enumerate_points,
    is_on_curve,
    negate,
    scalar_mul,
    validate_params,
)
from oracles import affine_points, chord_add, chord_double, multiples

# k*G on toy17 for k = 0..18, computed with the chord oracle (tests/oracles.py).
TOY_MULTIPLES = [
    None, (5, 1), (6, 3), (10, 6), (3, 1), (9, 16), (16, 13), (0, 6), (13, 7), (7, 6),
    (7, 11), (13, 10), (0, 11), (16, 4), (9, 1), (3, 16), (10, 11), (6, 14), (5, 16),
]


def P(x, y):
    return Point(x, y)


def as_point(t):
    return INFINITY if t is None else Point(*t)


def test_is_on_curve(toy):
    assert is_on_curve(toy, P(5, 1))
    assert not is_on_curve(toy, P(5, 2))
    assert is_on_curve(toy, INFINITY)


def test_negate(toy):
    assert negate(toy, P(5, 1)) == P(5, 16)
    assert negate(toy, INFINITY) == INFINITY
    assert negate(toy, P(6, 3)) == P(6, 14)


def test_add_examples(toy):
    assert add(toy, toy.G, P(6, 3)) == P(10, 6)
    assert add(toy, P(7, 6), INFINITY) == P(7, 6)
    assert add(toy, INFINITY, P(7, 6)) == P(7, 6)
    assert add(toy, P(5, 1), P(5, 16)) == INFINITY
    assert add(toy, P(6, 3), P(6, 3)) == double(toy, P(6, 3))


def test_double_examples(toy):
    assert double(toy, P(5, 1)) == P(6, 3)
    assert double(toy, INFINITY) == INFINITY
    assert double(toy, P(6, 3)) == P(3, 1)


def test_double_vertical_tangent():
    # y^2 = x^3 + x over F_23 has (0, 0) of order 2
    c = CurveParams("c23", 23, 1, 0, P(0, 0), 2)
    assert double(c, P(0, 0)) == INFINITY
    assert scalar_mul(c, 2, P(0, 0)) == INFINITY


def test_scalar_mul_examples(toy):
    assert scalar_mul(toy, 19, toy.G) == INFINITY
    assert scalar_mul(toy, 1, P(7, 11)) == P(7, 11)
    assert scalar_mul(toy, 11, toy.G) == P(13, 10)
    assert scalar_mul(toy, 0, toy.G) == INFINITY
    with pytest.raises(ValueError):
        scalar_mul(toy, -1, toy.G)


def test_multiples_match_chord_oracle(toy):
    for k, expected in enumerate(TOY_MULTIPLES):
        assert scalar_mul(toy, k, toy.G) == as_point(expected)


def test_enumerate_points(toy):
    pts = enumerate_points(toy)
    assert len(pts) == 19
    assert len(set(pts)) == 19
    assert all(is_on_curve(toy, p) for p in pts)
    assert set(pts) == {as_point(t) for t in TOY_MULTIPLES}


def test_enumerate_refuses_large(std):
    with pytest.raises(ValueError):
        enumerate_points(std)
    big = CurveParams("big", 65537, 1, 1, P(0, 1), 65537)
    with pytest.raises(ValueError):
        enumerate_points(big)


SMALL_CURVES = [(17, 2, 2), (23, 1, 1), (29, 4, 20), (31, 2, 0), (37, 0, 3), (43, 5, 7)]


@pytest.mark.parametrize("q, a, b", SMALL_CURVES)
def test_add_and_double_agree_with_chord_oracle(q, a, b):
    pts = affine_points(q, a, b)
    c = CurveParams("t", q, a, b, P(*pts[0]), 2)
    checked = 0
    for p, r in itertools.combinations(pts, 2):
        if p[0] == r[0]:
            continue
        ref = chord_add(q, pts, p, r)
        if ref is not None:
            assert add(c, P(*p), P(*r)) == P(*ref)
            checked += 1
    assert checked > 0
    for p in pts:
        ref = chord_double(q, pts, p)
        if ref is not None:
            assert double(c, P(*p)) == P(*ref)


@pytest.mark.parametrize("q, a, b", SMALL_CURVES)
def test_group_axioms_exhaustive(q, a, b):
    c = CurveParams("t", q, a, b, INFINITY, 2)
    pts = enumerate_points(c)
    assert len(pts) == len(affine_points(q, a, b)) + 1
    for p in pts:
        assert add(c, p, negate(c, p)) == INFINITY
        assert is_on_curve(c, double(c, p))
    for p, r in itertools.product(pts, repeat=2):
        s = add(c, p, r)
        assert s == add(c, r, p)
        assert is_on_curve(c, s)
    sample = pts[:: max(1, len(pts) // 12)]
    for p, r, t in itertools.product(sample, repeat=3):
        assert add(c, add(c, p, r), t) == add(c, p, add(c, r, t))


@pytest.mark.parametrize("q, a, b", SMALL_CURVES)
def test_scalar_mul_is_repeated_addition(q, a, b):
    c = CurveParams("t", q, a, b, INFINITY, 2)
    for p in enumerate_points(c)[1:6]:
        table = multiples(lambda u, v: add(c, u, v), INFINITY, p, 2 * len(enumerate_points(c)))
        for k, expected in enumerate(table):
            assert scalar_mul(c, k, p) == expected


@given(st.integers(min_value=0, max_value=2**170), st.integers(min_value=0, max_value=2**170))
def test_scalar_mul_distributes_on_standard_curve(j, k):
    from ecblind.codec import registry_lookup

    c = registry_lookup("secp160r1")
    lhs = scalar_mul(c, j + k, c.G)
    rhs = add(c, scalar_mul(c, j, c.G), scalar_mul(c, k, c.G))
    assert lhs == rhs
    assert is_on_curve(c, lhs)


def test_validate_toy(toy):
    rep = validate_params(toy, test_mode=True)
    assert rep.ok, rep.render()
    strict = validate_params(toy)
    assert strict.failures == ["order exceeds 2^160"]


def test_validate_base_point_off_curve(toy):
    bad = CurveParams("bad", 17, 2, 2, P(5, 2), 19)
    rep = validate_params(bad, test_mode=True)
    assert not rep.ok
    assert "base point on curve" in rep.failures
    assert any(d == "base point not on curve" for _, _, d in rep.checks)


def test_validate_singular():
    # 4*0^3 + 27*0^2 = 0: y^2 = x^3 is singular.
    bad = CurveParams("cusp", 17, 0, 0, P(1, 1), 17)
    rep = validate_params(bad, test_mode=True)
    assert "non-singular (4a^3 + 27b^2 != 0)" in rep.failures


def test_validate_uses_b_squared():
    # a=3, b=8 over F_17: 4a^3 + 27b^2 = 1836 = 0 (singular), while the
    # linear-b form 4a^3 + 27b = 324 = 1 would wrongly accept it.
    assert (4 * 27 + 27 * 64) % 17 == 0
    assert (4 * 27 + 27 * 8) % 17 != 0
    bad = CurveParams("sing", 17, 3, 8, INFINITY, 17)
    assert "non-singular (4a^3 + 27b^2 != 0)" in validate_params(bad, test_mode=True).failures


def test_validate_wrong_order(toy):
    bad = CurveParams("wrong-n", 17, 2, 2, P(5, 1), 17)
    rep = validate_params(bad, test_mode=True)
    assert "n * G = O" in rep.failures


def test_validate_standard(standard_curve):
    assert validate_params(standard_curve).ok


def test_point_constructor_checks(toy):
    assert toy.point(5, 1) == P(5, 1)
    with pytest.raises(ValueError):
        toy.point(5, 2)
