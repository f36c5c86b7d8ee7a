import pytest
from hypothesis import assume, given, strategies as st

from oracles import gf_eigenvector_exists, reachable_all
from strategies import LAW, dimvecs, quivers
from wallcross.oracle import endomorphism_dim, enumerate_reps, has_quotient_to_simple, has_sub_simple, search_simple
from wallcross.quiver import InputError, Quiver, cycle_quiver, kronecker, two_vertex_symmetric
from wallcross.simples import Certificate, SimpleVerdict, has_simple, symmetric_stable_nonempty


def test_three_cycle_type_one():
    q = cycle_quiver(3)
    v = has_simple(q, q.dimvec((1, 1, 1)))
    assert v.exists and v.certificate.kind == "TypeI"


def test_tilde_a2_mismatch():
    q = cycle_quiver(2)
    assert has_simple(q, q.dimvec((1, 1))).exists
    v = has_simple(q, q.dimvec((2, 2)))
    assert not v.exists and v.certificate.kind == "TypeMismatch"


def test_kronecker_destabilized_at_source():
    q = kronecker(2)
    m = q.dimvec((1, 1))
    v = has_simple(q, m)
    assert v.to_record() == {"exists": False, "certificate": {
        "kind": "DestabilizingVertex", "vertex": "1", "direction": "quotient", "pairing": 1}}
    # every representation has (0, V2) invariant
    for rep in enumerate_reps(q, m, 3):
        assert has_quotient_to_simple(rep, "1")


def test_symmetric_two_arrows():
    q = two_vertex_symmetric(2)
    assert symmetric_stable_nonempty(q, q.dimvec((1, 1)))


def test_one_loop_dimension_three():
    q = Quiver(("1",), (("1", "1"),))
    v = has_simple(q, q.dimvec((3,)))
    assert not v.exists and v.certificate.to_record() == {
        "kind": "TypeMismatch", "shape": "TildeA1", "vertex": "1", "m_i": 3}
    assert not symmetric_stable_nonempty(q, q.dimvec((3,)))


@pytest.mark.parametrize("p", [2, 3])
def test_one_loop_no_absolutely_simple_2x2(p):
    # matrices without an eigenvector are simple over F_p but have a larger
    # endomorphism field, so they are never absolutely simple
    q = Quiver(("1",), (("1", "1"),))
    m = q.dimvec((2,))
    assert not has_simple(q, m).exists
    irreducible = 0
    for rep in enumerate_reps(q, m, p):
        if not gf_eigenvector_exists(rep.maps[0], p):
            irreducible += 1
            assert endomorphism_dim(rep) == 2
    # (p^2 - p)/2 irreducible quadratics, each with a class of p^2 - p matrices
    assert irreducible == (p * p - p) ** 2 // 2
    assert not search_simple(q, m, p, stop_at=None).witnesses


def test_disconnected_symmetric():
    # two copies of the doubled two-cycle; every pairing is -1
    q = Quiver(("1", "2", "3", "4"), (("1", "2"), ("2", "1")) * 2 + (("3", "4"), ("4", "3")) * 2)
    m = q.dimvec((1, 1, 1, 1))
    v = has_simple(q, m)
    assert not v.exists and v.certificate.kind == "NotStronglyConnected"
    assert not symmetric_stable_nonempty(q, m)


def test_not_strongly_connected_with_inequalities():
    # two loops at each vertex keep the pairings nonpositive, one arrow breaks connectivity
    q = Quiver(("1", "2"), (("1", "1"),) * 2 + (("2", "2"),) * 2 + (("1", "2"),))
    v = has_simple(q, q.dimvec((1, 1)))
    assert v.certificate.to_record() == {"kind": "NotStronglyConnected", "pair": ["2", "1"]}


def test_sub_direction_certificate():
    q = kronecker(2)
    # m = (1, 2): <m, e1> = 1 - 4 < 0, <e1, m> = 1 > 0 is excluded by source; check the sink side
    m = q.dimvec((2, 1))
    v = has_simple(q, m)
    assert v.certificate.data["direction"] in ("quotient", "sub")
    checker = has_quotient_to_simple if v.certificate.data["direction"] == "quotient" else has_sub_simple
    for rep in enumerate_reps(q, m, 2):
        assert checker(rep, v.certificate.data["vertex"])


def test_errors_and_verdict_consistency():
    q = kronecker(1)
    with pytest.raises(InputError):
        has_simple(q, q.zero())
    with pytest.raises(InputError):
        symmetric_stable_nonempty(q, q.dimvec((1, 1)))
    with pytest.raises(ValueError):
        SimpleVerdict(True, Certificate("TypeMismatch"))


# -- laws -------------------------------------------------------------------------------

@LAW
@given(st.data())
def test_verdict_matches_certificate(data):
    q = data.draw(quivers())
    m = data.draw(dimvecs(q, 3))
    v = has_simple(q, m)
    assert v.exists == (v.certificate.kind in ("TypeI", "InequalitiesOK"))
    if v.certificate.kind == "DestabilizingVertex":
        from wallcross.quiver import euler_pairing
        e = q.unit(v.certificate.data["vertex"])
        if v.certificate.data["direction"] == "quotient":
            assert euler_pairing(q, m, e) > 0
        else:
            assert euler_pairing(q, e, m) > 0


@LAW
@given(st.data())
def test_thin_vectors_match_connectivity(data):
    q = data.draw(quivers())
    ones = data.draw(st.lists(st.booleans(), min_size=len(q.vertices), max_size=len(q.vertices)))
    assume(any(ones))
    m = q.dimvec(tuple(int(b) for b in ones))
    support = [i for i, b in enumerate(ones) if b]
    assert has_simple(q, m).exists == reachable_all(q.edge_matrix(), support)


@LAW
@given(st.data())
def test_relabeling_invariance(data):
    q = data.draw(quivers())
    m = data.draw(dimvecs(q, 3))
    perm = data.draw(st.permutations(q.vertices))
    mapping = dict(zip(q.vertices, (f"w{p}" for p in perm)))
    q2 = q.relabel(mapping)
    m2 = q2.dimvec({mapping[v]: x for v, x in m.items()})
    a, b = has_simple(q, m), has_simple(q2, m2)
    assert a.exists == b.exists and a.certificate.kind == b.certificate.kind


@LAW
@given(quivers(), st.data())
def test_unit_vectors_always_simple(q, data):
    v = data.draw(st.sampled_from(q.vertices))
    assert has_simple(q, q.unit(v)).exists


@LAW
@given(st.data())
def test_oracle_witness_implies_simple(data):
    q = data.draw(quivers(max_vertices=2, max_arrows=2, max_loops=1))
    m = data.draw(dimvecs(q, 2))
    entries = sum(m[s] * m[t] for s, t in q.edges)
    assume(entries <= 8)
    report = search_simple(q, m, 2)
    if report.witnesses:
        assert has_simple(q, m).exists
