from fractions import Fraction as F

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from oracles import exp_in_t, mac_mahon_recurrence, plane_partitions
from strategies import LAW
from wallcross.quiver import InputError, PreconditionError
from wallcross.series import (ClassLattice, InvariantTable, TruncatedSeries, WallDatum,
                              apply_wall_crossing, compare_series, dtpt_transform, mac_mahon,
                              mac_mahon_coefficients, palindrome_check, pt_product_formula,
                              series_from_rows, series_mul, telescope_check, wall_factor,
                              walls_from_table)

LAT = ClassLattice.single()
W = (-8, 8)


def s1(terms, window=W, t_cap=2):
    """Rank-one series from {(n, weight): value}."""
    return TruncatedSeries(1, window, t_cap, {(n, (w,)): F(v) for (n, w), v in terms.items()})


def table(values, **kw):
    return InvariantTable(LAT, {((w,), n): F(v) for (w, n), v in values.items()}, **kw)


def test_series_mul_examples():
    b = s1({(1, 1): 2, (-3, 2): F(1, 3)})
    assert series_mul(TruncatedSeries.one(1, W, 2), b) == b
    plus, minus = s1({(0, 0): 1, (1, 1): 1}, t_cap=1), s1({(0, 0): 1, (1, 1): -1}, t_cap=1)
    assert series_mul(plus, minus).is_one()
    sq = series_mul(plus.truncate(t_cap=2), plus.truncate(t_cap=2))
    assert sq == s1({(0, 0): 1, (1, 1): 2, (2, 2): 1})


def test_series_normal_form():
    s = s1({(0, 0): 1, (9, 1): 5, (0, 3): 7, (2, 1): 0})
    assert s.coeffs == {(0, (0,)): 1}
    with pytest.raises(InputError):
        TruncatedSeries(1, (2, 1), 2)
    with pytest.raises(InputError):
        TruncatedSeries(1, W, 2, {(0, (0, 0)): 1})


def test_series_mul_meets_windows():
    a = s1({(0, 0): 1}, window=(-3, 5), t_cap=2)
    b = s1({(0, 0): 1}, window=(-6, 2), t_cap=1)
    prod = series_mul(a, b)
    assert prod.window == (-3, 2) and prod.t_cap == 1


def test_wall_factor_examples():
    wd = WallDatum(1, LAT, (((1,), 1, 1),))
    assert wall_factor(wd, W, 1) == s1({(0, 0): 1, (1, 1): 1}, t_cap=1)
    lat3 = ClassLattice.single(1)
    # walls t = n on a degree-one class: one contribution each, combined here by hand
    poly = {}
    for n in (1, 2, 3):
        f = wall_factor(WallDatum(n, lat3, (((1,), n, 1),)), W, 1)
        poly = f.coeffs if not poly else series_mul(TruncatedSeries(1, W, 1, poly), f).coeffs
    q, t = sympy.symbols("q t")
    oracle = exp_in_t(q * t - 2 * q**2 * t + 3 * q**3 * t, 1)
    assert sympy.expand(oracle[1] - (q - 2 * q**2 + 3 * q**3)) == 0
    assert poly == {(0, (0,)): 1, (1, (1,)): 1, (2, (1,)): -2, (3, (1,)): 3}
    assert wall_factor(WallDatum(1, LAT, (((1,), 1, 0),)), W, 2).is_one()


def test_wall_factor_second_order_matches_exp():
    wd = WallDatum(2, LAT, (((1,), 2, F(3, 2)),))
    got = wall_factor(wd, W, 2)
    q, t = sympy.symbols("q t")
    oracle = exp_in_t(-3 * q**2 * t, 2)
    for k in range(3):
        expected = sympy.Poly(oracle[k], q) if oracle[k] != 0 else None
        for n in range(-8, 9):
            want = expected.coeff_monomial(q**n) if expected is not None and n >= 0 else 0
            assert got.coeff(n, (k,)) == F(str(want))


def test_wall_datum_validation():
    with pytest.raises(InputError):
        WallDatum(0, LAT, ())
    with pytest.raises(InputError):
        WallDatum(1, LAT, (((0,), 1, 1),))
    with pytest.raises(InputError):
        WallDatum(1, LAT, (((1,), 2, 1),))
    with pytest.raises(InputError):
        WallDatum(F(-1), LAT, (((1,), -1, 1),))


def test_apply_wall_crossing_examples():
    wd = WallDatum(1, LAT, (((1,), 1, 2),))
    one = TruncatedSeries.one(1, W, 2)
    assert apply_wall_crossing(one, wd) == wall_factor(wd, W, 2)
    L = s1({(0, 0): 1, (1, 1): 4, (-1, 1): 4})
    assert apply_wall_crossing(apply_wall_crossing(L, wd), wd.negated()) == L
    wd2 = WallDatum(F(1, 2), ClassLattice.single(2), (((1,), 1, 5),))
    lat2_L = s1({(0, 0): 1})
    a = WallDatum(1, ClassLattice.single(2), (((1,), 2, 1),))
    assert apply_wall_crossing(apply_wall_crossing(lat2_L, a), wd2) == \
        apply_wall_crossing(apply_wall_crossing(lat2_L, wd2), a)


def test_pt_formula_examples():
    zero = table({})
    L = table({(1, 1): 1, (1, -1): 1}, symmetric=True)
    pt = pt_product_formula(zero, L, W, 2)
    assert pt == s1({(0, 0): 1, (1, 1): 1, (-1, 1): 1})
    N = table({(1, n): 1 for n in range(1, 9)})
    pt = pt_product_formula(N, table({}), W, 1)
    for n in range(-8, 9):
        want = (-1) ** (n - 1) * n if n > 0 else 0
        assert pt.coeff(n, (1,)) == want


def test_pt_formula_rejects_asymmetric_L():
    L = table({(1, 1): 1})
    with pytest.raises(PreconditionError):
        pt_product_formula(table({}), L, W, 2)
    with pytest.raises(InputError):
        table({(1, 1): 1}, symmetric=True)


def test_palindrome_examples():
    assert palindrome_check(table({(1, 2): 3, (1, -2): 3, (0, 0): 1}))
    assert not palindrome_check(table({(1, 1): 1, (1, -1): 0}))
    assert palindrome_check(table({}))


def test_telescope_examples():
    N = table({(1, n): 1 for n in range(1, 6)})
    walls = walls_from_table(N, 2)
    assert [w.t for w in walls] == [5, 4, 3, 2, 1]
    assert telescope_check(N, table({}), walls, W, 2).ok
    bad = table({(1, n): (2 if n == 3 else 1) for n in range(1, 6)})
    rep = telescope_check(bad, table({}), walls, W, 2)
    assert not rep.ok and rep.first_mismatch["n"] == 3 and rep.first_mismatch["weight"] == [1]
    L = table({(1, 2): 1, (1, -2): 1}, symmetric=True)
    assert telescope_check(table({}), L, [], W, 2).ok
    assert not telescope_check(table({(1, 1): 1}), L, [], W, 2).ok


def test_telescope_requires_descending_positive_walls():
    walls = [WallDatum(1, LAT, (((1,), 1, 1),)), WallDatum(2, LAT, (((1,), 2, 1),))]
    with pytest.raises(InputError):
        telescope_check(table({}), table({}), walls, W, 2)


def test_mac_mahon_examples():
    coeffs = mac_mahon_coefficients(1, 9)
    assert [plane_partitions(n) for n in range(10)] == [1, 1, 3, 6, 13, 24, 48, 86, 160, 282]
    assert coeffs == [1, 1, 3, 6, 13, 24, 48, 86, 160, 282]
    assert mac_mahon(0, 5).is_one()
    assert series_mul(mac_mahon(1, 7), mac_mahon(-1, 7)).is_one()
    assert mac_mahon_coefficients(-1, 4) == [1, -1, -2, -1, 0]


def test_dtpt_examples():
    one = TruncatedSeries.one(0, (0, 6), 0)
    assert dtpt_transform(one, 0) == one
    # square of the MacMahon series: oracle value at q^2 is 7
    assert mac_mahon_recurrence(2, 2)[2] == 7
    assert dtpt_transform(one, 2).coeff(2) == 7
    assert [dtpt_transform(one, 2).coeff(n) for n in range(5)] == [1, 2, 7, 18, 47]


def test_dtpt_window_shrink_commutes():
    P = s1({(0, 0): 1, (1, 1): 2, (-2, 1): 3, (3, 2): -1}, window=(-4, 8))
    small = (-4, 5)
    assert dtpt_transform(P.truncate(small), 1) == dtpt_transform(P, 1).truncate(small)


def test_rows_round_trip():
    s = s1({(0, 0): 1, (2, 1): F(-1, 2)})
    assert series_from_rows(1, [[list(w), n, v] for (n, w), v in s.items()], W, 2) == s
    assert compare_series(s, s).ok


def test_periodic_metadata():
    table({(1, 1): 2, (1, 2): 2}, periodic=True)
    with pytest.raises(InputError):
        table({(1, 1): 2, (1, 2): 3}, periodic=True)


# -- laws -------------------------------------------------------------------------------

coef = st.fractions(-3, 3, max_denominator=3)


@st.composite
def wall_data(draw, lattice=LAT, max_n=6):
    n = draw(st.integers(1, max_n))
    w = draw(st.integers(1, 2))
    # t = n / w; all contributions with the same ratio
    t = F(n, w)
    contribs = [((w,), n, draw(coef))]
    if draw(st.booleans()):
        contribs.append(((2 * w,), 2 * n, draw(coef)))
    return WallDatum(t, lattice, tuple(contribs))


@st.composite
def l_series(draw):
    terms = {(0, 0): 1}
    for _ in range(draw(st.integers(0, 4))):
        terms[(draw(st.integers(-4, 4)), draw(st.integers(1, 2)))] = draw(coef)
    return s1(terms)


@LAW
@given(st.lists(wall_data(), min_size=1, max_size=4), l_series(), st.randoms(use_true_random=False))
def test_wall_factors_commute_and_invert(walls, L, rnd):
    acc = L
    for wd in walls:
        acc = apply_wall_crossing(acc, wd)
    shuffled = list(walls)
    rnd.shuffle(shuffled)
    acc2 = L
    for wd in shuffled:
        acc2 = apply_wall_crossing(acc2, wd)
    assert acc == acc2
    for wd in walls:
        assert series_mul(wall_factor(wd, W, 2), wall_factor(wd.negated(), W, 2)).is_one()


@st.composite
def tables(draw):
    N = {(draw(st.integers(1, 2)), draw(st.integers(1, 10))): draw(coef) for _ in range(draw(st.integers(0, 5)))}
    L = {}
    for _ in range(draw(st.integers(0, 3))):
        w, n, v = draw(st.integers(1, 2)), draw(st.integers(0, 3)), draw(coef)
        L[(w, n)] = L[(w, -n)] = v
    return table(N), table(L, symmetric=True)


@LAW
@given(tables(), st.integers(0, 8), st.integers(0, 8), st.integers(0, 2))
def test_truncation_monotone(tabs, lo, hi, cap):
    N, L = tabs
    big = pt_product_formula(N, L, (-10, 10), 2)
    small = pt_product_formula(N, L, (-lo, hi), cap)
    assert big.truncate((-lo, hi), cap) == small
    for wd in walls_from_table(N, 2):
        assert wall_factor(wd, (-10, 10), 2).truncate((-lo, hi), cap) == wall_factor(wd, (-lo, hi), cap)
    assert mac_mahon(1, 10).truncate((0, hi)) == mac_mahon(1, hi)


@LAW
@given(tables())
def test_pt_tail_first_order(tabs):
    N, L = tabs
    pt = pt_product_formula(N, L, (-12, 12), 2)
    for n in range(4, 13):  # beyond the support of L
        assert pt.coeff(n, (1,)) == (-1) ** (n - 1) * n * N.get((1,), n)


@LAW
@given(tables())
def test_telescope_law(tabs):
    N, L = tabs
    assert telescope_check(N, L, walls_from_table(N, 2), (-10, 10), 2).ok


@LAW
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 10))
def test_mac_mahon_multiplicative(e1, e2, qmax):
    assert series_mul(mac_mahon(e1, qmax), mac_mahon(e2, qmax)) == mac_mahon(e1 + e2, qmax)
    assert mac_mahon_coefficients(e1, qmax) == mac_mahon_recurrence(e1, qmax)


@LAW
@given(l_series(), st.integers(-3, 3), st.integers(0, 8))
def test_dtpt_is_multiplication(P, e, hi):
    lo = min(n for n, _ in P.coeffs)
    prod = {}
    mm = mac_mahon_coefficients(e, 16)
    for (n, w), c in P.coeffs.items():
        for k, m in enumerate(mm):
            prod[(n + k, w)] = prod.get((n + k, w), 0) + c * m
    assert dtpt_transform(P, e) == TruncatedSeries(1, W, 2, prod)
    assume(lo <= hi)
    assert dtpt_transform(P.truncate((-8, hi)), e) == dtpt_transform(P, e).truncate((-8, hi))
