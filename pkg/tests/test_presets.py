from fractions import Fraction as F

import pytest
from hypothesis import assume, given, strategies as st

from strategies import LAW
from wallcross.classifier import Kind, classify_extended_flip, classify_symmetric_flop, classify_two_vertex
from wallcross.presets import (PRESETS, CollectionDescriptor, WallLadder, abel_jacobi_model,
                               classify_irreducible_wall, elliptic_fiber_descriptor,
                               elliptic_walls, ext_quiver, extended_spec, mmp_ledger, parallel,
                               preset_report, stable_pair_walls)
from wallcross.quiver import DimVector, InputError, PreconditionError


def test_ext_quiver_examples():
    q = ext_quiver(elliptic_fiber_descriptor(2))
    assert q.edge_matrix() == [[3, 2], [2, 2]]
    q = ext_quiver(CollectionDescriptor(((0, 2), (1, 0))))
    assert q.edge_matrix() == [[0, 2], [1, 0]]
    assert ext_quiver(CollectionDescriptor(((3,),))).edge_matrix() == [[3]]


def test_extended_spec_reads_framing_row():
    spec = extended_spec(CollectionDescriptor(((1, 4, 0), (2, 0, 1), (3, 1, 5))))
    assert spec.a == {"1": 4, "2": 0} and spec.b == {"1": 2, "2": 3} and spec.c == 1
    assert spec.base.edge_matrix() == [[0, 1], [1, 5]]


def test_descriptor_validation():
    with pytest.raises(InputError):
        CollectionDescriptor(((0, 1, 0), (1, 0, 2), (0, 1, 0)))
    with pytest.raises(InputError):
        CollectionDescriptor(((0, 1), (1,)))
    with pytest.raises(InputError):
        CollectionDescriptor(((-1,),))


def test_elliptic_wall_example():
    lines = elliptic_walls(1, 1, 1, 1, (1, 1))
    (line,) = [ln for ln in lines if ln.decomposition == (1, 0, 1)]
    assert (line.A, line.B, line.C) == (4, 1, 1)
    assert line.to_record()["equation"] == "4x - 1y = 1"
    assert line.contains(F(1, 4), 0)
    assert parallel(elliptic_walls(1, 1, 1, 1, (-10, 10)))


def test_elliptic_wall_errors():
    with pytest.raises(InputError):
        elliptic_walls(1, 1, 0, 0, (0, 1))
    with pytest.raises(InputError):
        elliptic_walls(0, 1, 1, 1, (0, 1))


def test_fiber_flip_path_rejected():
    for r in range(1, 6):
        spec = extended_spec(elliptic_fiber_descriptor(r))
        with pytest.raises(PreconditionError):
            classify_extended_flip(spec, DimVector(("1",), (1,)))
        q = ext_quiver(elliptic_fiber_descriptor(r))
        assert classify_symmetric_flop(q, q.dimvec((1, 1))).kind is Kind.GENERALIZED_FLOP


def test_irreducible_single_wall():
    ladder = stable_pair_walls([("C", 3)], "C", 2, (-5, 5))
    assert ladder.values == [F(2, 3)]
    assert not ladder.warnings


@pytest.mark.parametrize("d1,d2", [(2, 1), (3, 1), (5, 2), (F(7, 2), 1)])
def test_non_irreducible_1_walls(d1, d2):
    ladder = stable_pair_walls([("C1", d1), ("C2", d2)], {"C1": 1, "C2": 1}, 2, (-12, 12))
    assert set(ladder.values) == {1 / F(d2), 2 / (F(d1) + F(d2))}


@pytest.mark.parametrize("d", [1, 2, F(1, 3)])
def test_non_irreducible_2_walls(d):
    ladder = stable_pair_walls([("C", d)], {"C": 2}, 4, (-14, 14))
    assert ladder.values == [3 / F(d), 2 / F(d)]


def test_default_window_warns():
    ladder = stable_pair_walls([("C", 1)], {"C": 2}, 4)
    assert ladder.warnings[0]["code"] == "W_DEFAULT_WINDOW"
    assert ladder.values == [3, 2]


def test_ladder_errors():
    with pytest.raises(InputError):
        stable_pair_walls([], "C", 1)
    with pytest.raises(InputError):
        stable_pair_walls([("C", 1)], "D", 1)
    with pytest.raises(InputError):
        stable_pair_walls([("C", 0)], "C", 1)
    with pytest.raises(InputError):
        stable_pair_walls([("C", 1)], "C", 1, (3, 2))


@pytest.mark.parametrize("n,h1,kind", [
    (2, 3, Kind.GENERALIZED_FLIP),
    (1, 1, Kind.DIVISORIAL_CONTRACTION),
    (1, 0, Kind.GENERALIZED_MFS),
    (0, 3, Kind.GENERALIZED_FLOP),
    (0, 1, Kind.ISOMORPHISM),
    (0, 0, Kind.EMPTY_BOTH_SIDES),
])
def test_irreducible_table(n, h1, kind):
    assert classify_irreducible_wall(n, h1).kind is kind


def test_abel_jacobi_examples():
    rep = abel_jacobi_model(3, 1, 2)
    assert rep["classification"]["kind"] == "GeneralizedFlip"
    assert rep["dims"] == [3, 1] == rep["expected_dims"]
    assert rep["sides"] == ["S^3(C)", "S^1(C)"]
    assert abel_jacobi_model(2, 2, 0)["classification"]["kind"] == "GeneralizedMFS"
    assert abel_jacobi_model(4, 0, 2)["classification"]["kind"] == "GeneralizedFlop"
    with pytest.raises(InputError):
        abel_jacobi_model(2, -3, 1)


def test_ledger_irreducible():
    ladder = stable_pair_walls([("C", 1)], "C", 2, (-5, 5))
    led = mmp_ledger(ladder, [classify_irreducible_wall(2, 3)], ["P_2", "P_-2"])
    assert led["chain"] == "P_2 > P_-2"
    assert led["relations"][0]["strict"]


def test_ledger_empty_and_errors():
    empty = WallLadder({"C": 1}, 0, ())
    assert mmp_ledger(empty, [])["chain"] == "M0"
    ladder = stable_pair_walls([("C", 1)], "C", 2, (-5, 5))
    with pytest.raises(InputError):
        mmp_ledger(ladder, [])
    with pytest.raises(PreconditionError):
        mmp_ledger(ladder, [classify_two_vertex(3, 3)])
    zero = stable_pair_walls([("C", 1)], "C", 0, (-5, 5))
    with pytest.raises(PreconditionError):
        mmp_ledger(zero, [classify_two_vertex(3, 1)])
    assert mmp_ledger(zero, [classify_irreducible_wall(0, 2)])["chain"] == "M0 = M1"


def test_non_irreducible_ledgers():
    rep = preset_report("non-irreducible-1")
    assert rep["classes"] == ["DivisorialContraction", "GeneralizedMFS"]
    assert rep["ledger"]["chain"] == "C > C1 > empty"
    rep = preset_report("non-irreducible-2")
    assert rep["ledger"]["chain"] == "P3 > pt > empty"
    assert [w["t"] for w in rep["ladder"]["walls"]] == ["3", "2"]


def test_presets_all_run():
    expected = {
        "toric-flip": "ToricFlip",
        "grassmannian-flip": "GeneralizedFlip",
        "elliptic-fiber": "GeneralizedFlop",
        "abel-jacobi": "GeneralizedFlip",
        "dtpt-point": "GeneralizedMFS",
    }
    for name, kind in expected.items():
        assert preset_report(name)["classification"]["kind"] == kind
    assert set(PRESETS) == set(expected) | {"non-irreducible-1", "non-irreducible-2"}
    with pytest.raises(InputError):
        preset_report("nope")


def test_grassmannian_preset_mfs():
    rep = preset_report("grassmannian-flip", m=3)
    assert rep["classification"]["kind"] == "GeneralizedMFS"
    assert rep["sides"][1] == "empty"


# -- laws -------------------------------------------------------------------------------

@LAW
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 3), st.integers(0, 3))
def test_elliptic_lines_parallel(d1, d2, r, k):
    assume((r, k) != (0, 0))
    lines = elliptic_walls(d1, d2, r, k, (-10, 10))
    assert parallel(lines)
    for ln in lines:
        bx, ay = ln.direction
        assert bx * (3 * d1 + d2) == ay * d1


@st.composite
def ladder_inputs(draw):
    k = draw(st.integers(1, 2))
    degs = [draw(st.fractions(F(1, 2), 4, max_denominator=2)) for _ in range(k)]
    assume(all(d > 0 for d in degs))
    classes = [(f"C{i}", d) for i, d in enumerate(degs)]
    beta = {f"C{i}": draw(st.integers(0, 2)) for i in range(k)}
    assume(any(beta.values()))
    return classes, beta, draw(st.integers(-5, 5))


@LAW
@given(ladder_inputs(), st.integers(0, 6), st.integers(0, 6))
def test_ladder_sorted_and_window_monotone(inp, w, extra):
    classes, beta, n = inp
    small = stable_pair_walls(classes, beta, n, (-w, w))
    big = stable_pair_walls(classes, beta, n, (-w - extra, w + extra))
    vals = small.values
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert set(vals) <= set(big.values)
    order = [t for t in big.values if t in set(vals)]
    assert order == vals


@LAW
@given(st.integers(-8, 8), st.integers(0, 8))
def test_irreducible_mirror(n, h1):
    a, b = classify_irreducible_wall(n, h1), classify_irreducible_wall(-n, h1)
    assert a.kind is b.kind
    if n != 0 and a.k_relation == ">":
        assert {a.orientation, b.orientation} == {"+", "-"}


@LAW
@given(st.integers(0, 10), st.integers(-5, 5), st.integers(0, 5))
def test_abel_jacobi_dims(g, n, h1):
    assume(n + h1 >= 0)
    plus, minus = abel_jacobi_model(g, n, h1)["dims"]
    assert plus - minus == 2 * n
    assert plus + minus == 2 * (g - 1)
