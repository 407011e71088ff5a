import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from curves import conic, decic, fermat_cubic, quartic, rational_points, split_divisor
from oracles import eval_bivariate, point_multiset
from rrspace.bipoly import BiPoly, eval_pair_mod
from rrspace.divisor import (Curve, NodalDivisor, SmoothDivisor, add, change_prim_elt, compute_T_E,
                             equals, genus, hensel_lifting_step, subtract, validate, validate_nodal)
from rrspace.errors import DrawFailed, InvalidInput
from rrspace.randomness import RngConfig
from rrspace.riemann_roch import random_smooth_divisor
from rrspace.upoly import UPoly

P = 7
S = UPoly.var(P)
C7 = conic(7)
TWO_POINTS = SmoothDivisor(2, UPoly([5, 6, 1], P), UPoly.const(2, P), S + 3)


def const(c):
    return UPoly.const(c, P)


def test_validate_examples():
    assert validate(TWO_POINTS, C7) == (True, None)
    ok, why = validate(SmoothDivisor(1, UPoly([0, 3, 1], P), const(2), S - 2), C7)
    assert not ok and "H3" in why
    assert validate(SmoothDivisor.zero(P, 4), C7)[0]


def test_validate_reports_h1_and_h2():
    ok, why = validate(SmoothDivisor(2, UPoly([5, 6, 1], P), const(3), S + 3), C7)
    assert not ok and "H1" in why
    ok, why = validate(SmoothDivisor(3, UPoly([5, 6, 1], P), const(2), S + 3), C7)
    assert not ok and "H2" in why
    ok, why = validate(SmoothDivisor(2, UPoly([5, 6, 2], P), const(2), S + 3), C7)
    assert not ok


def test_change_prim_elt_examples():
    moved = change_prim_elt(TWO_POINTS, 3, C7)
    assert moved == SmoothDivisor(3, UPoly([4, 2, 1], P), const(2), S + 1)
    assert change_prim_elt(TWO_POINTS, 2, C7) == TWO_POINTS
    with pytest.raises(DrawFailed):
        change_prim_elt(TWO_POINTS, 1, C7)


def test_hensel_examples():
    point = SmoothDivisor(2, S + 1, const(2), const(2))
    assert hensel_lifting_step(C7, point, S + 1) == (const(2), const(2))
    target = (S + 1) ** 2
    uh, vh = hensel_lifting_step(C7, point, target)
    assert eval_pair_mod(C7.q, uh, vh, target).is_zero()
    assert ((uh * 2 + vh - S) % target).is_zero()
    assert validate(SmoothDivisor(2, target, uh, vh), C7)[0]
    assert hensel_lifting_step(C7, point, const(1)) == (UPoly.zero(P), UPoly.zero(P))


def test_add_examples():
    rng = RngConfig(0)
    d1 = SmoothDivisor(2, S - 1, UPoly.zero(P), const(1))
    d2 = SmoothDivisor(2, S - 2, const(1), UPoly.zero(P))
    assert add(d1, d2, C7, rng) == SmoothDivisor(2, UPoly([2, 4, 1], P), S + 6, S * 6 + 2)
    assert add(TWO_POINTS, SmoothDivisor.zero(P), C7, rng) == TWO_POINTS
    double = add(TWO_POINTS, TWO_POINTS, C7, rng)
    assert double.chi == UPoly([5, 6, 1], P) ** 2
    assert validate(double, C7)[0]


def test_subtract_examples():
    rng = RngConfig(0)
    point = SmoothDivisor(2, S + 1, const(2), const(2))
    assert subtract(TWO_POINTS, point, C7, rng) == SmoothDivisor(2, S + 5, const(2), const(5))
    assert subtract(TWO_POINTS, SmoothDivisor.zero(P), C7, rng) == TWO_POINTS
    assert subtract(TWO_POINTS, TWO_POINTS, C7, rng).is_zero()


def test_equals_examples():
    assert equals(TWO_POINTS, change_prim_elt(TWO_POINTS, 3, C7))
    assert not equals(TWO_POINTS, SmoothDivisor.zero(P))
    assert not equals(SmoothDivisor(2, S + 1, const(2), const(2)), SmoothDivisor(2, S + 5, const(2), const(5)))


def test_compute_T_E_examples():
    one = UPoly.const(1, P)
    zero = UPoly.zero(P)
    assert compute_T_E(C7.q, one, zero, zero) == 1
    decic7 = BiPoly({(2, 0): 1, (0, 2): -1, (0, 4): 1, (3, 0): -1, (10, 0): 1, (0, 10): -5, (3, 7): 3}, 7)
    assert compute_T_E(decic7, S, zero, zero) == UPoly([6, 0, 1], 7)
    E = NodalDivisor(0, S, zero, zero, UPoly([6, 0, 1], 7))
    assert validate_nodal(E, decic7) == (True, None)
    assert Curve(decic7, E).genus == 35


def test_two_nodes_give_degree_four():
    # (X^2 - 1)^2 + ... style curve with nodes at (1, 0) and (-1, 0): Y^4 - ... built from a product
    p = 101
    q = BiPoly({(0, 4): 1, (4, 0): 1, (2, 0): -2, (0, 0): 1, (0, 2): -1}, p)  # (X^2-1)^2 - Y^2 + Y^4
    s = UPoly.var(p)
    chi = (s - 1) * (s + 1)
    u = s
    v = UPoly.zero(p)
    T = compute_T_E(q, chi, u, v)
    assert T.degree == 4
    # tangents at (+-1, 0) are Y = +-2(X -+ 1), so lambda = +-2 are the tangent directions
    for lam in (2, p - 2):
        assert T.eval(lam) == 0


def test_genus_examples():
    assert genus(2, 0) == 0 and genus(3, 0) == 1 and genus(10, 1) == 35
    with pytest.raises(InvalidInput):
        genus(3, 2)


def test_curve_rejects_non_noether():
    with pytest.raises(InvalidInput):
        Curve.smooth(BiPoly({(0, 2): 1, (3, 0): -1}, P))


SPLIT_CURVES = [lambda: conic(1009), lambda: fermat_cubic(1009), lambda: quartic(1009)]


@settings(max_examples=40)
@given(st.integers(0, 2), st.integers(0, 10 ** 9))
def test_split_add_subtract_multiset_oracle(which, seed):
    C = SPLIT_CURVES[which]()
    rnd = random.Random(seed)
    pool = rational_points(C, 10, rnd)
    a = rnd.sample(pool, rnd.randint(1, 5))
    b = rnd.sample(pool, rnd.randint(1, 5))  # may overlap a: exercises the Hensel path
    D1, D2 = split_divisor(C, a, rnd), split_divisor(C, b, rnd)
    rng = RngConfig(seed % (1 << 32), retry_budget=32)
    total = add(D1, D2, C, rng)
    assert validate(total, C)[0]
    assert total.degree == D1.degree + D2.degree
    assert point_multiset(total) == Counter(a) + Counter(b)
    diff = subtract(total, D2, C, rng)
    assert equals(diff, D1)
    assert point_multiset(diff) == Counter(a)
    part = subtract(D1, D2, C, rng)
    assert point_multiset(part) == Counter(a) - Counter(b)
    assert equals(add(D2, D1, C, rng), total)


@settings(max_examples=25)
@given(st.integers(0, 10 ** 9))
def test_change_prim_elt_round_trip_on_decic(seed):
    C = decic()
    rng = RngConfig(seed, retry_budget=16)
    D = random_smooth_divisor(C, 8 + seed % 20, rng)
    lam = rng.element(C.p)
    try:
        moved = change_prim_elt(D, lam, C)
    except DrawFailed:
        return
    assert validate(moved, C)[0]
    assert equals(D, moved) and equals(moved, D)


@settings(max_examples=20)
@given(st.integers(0, 10 ** 9))
def test_repeated_points_hensel_idempotent(seed):
    C = fermat_cubic(1009)
    rnd = random.Random(seed)
    D = split_divisor(C, rational_points(C, 3, rnd), rnd)
    target = D.chi * D.chi
    uh, vh = hensel_lifting_step(C, D, target)
    assert ((uh - D.u) % D.chi).is_zero() and ((vh - D.v) % D.chi).is_zero()
    assert validate(SmoothDivisor(D.lam, target, uh, vh), C)[0]


def test_points_of_random_divisor_lie_on_curve():
    C = fermat_cubic(1009)
    rnd = random.Random(4)
    pts = rational_points(C, 6, rnd)
    for x, y in pts:
        assert eval_bivariate(C.q.terms, x, y, C.p) == 0
    D = split_divisor(C, pts, rnd)
    assert point_multiset(D) == Counter(pts)
