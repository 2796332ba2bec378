import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbsplit.groebner import Ideal, ideal_equals
from hilbsplit.hilbpatch import PatchRing, StratumLabel, enumerate_strata
from hilbsplit.polyring import Polynomial, RingContext
from hilbsplit.srcomplex import (
    ComplexError,
    SimplicialComplex,
    boundary,
    cone,
    delete,
    facets_from_squarefree_ideal,
    facets_from_supports,
    is_vertex_decomposable,
    link,
    minimal_nonfaces,
    minimal_transversals,
    shedding_order,
    stanley_reisner_ideal,
    star,
    verify_witness,
)
from hilbsplit.words import stratum_complex

V6 = RingContext(tuple(f"x{i}" for i in range(1, 7)), 2)
EXAMPLE_FACETS = [{"x3", "x4"}, {"x1", "x2"}, {"x1", "x3"}, {"x2", "x3", "x5"}]
EXAMPLE_GENS = [["x6"], ["x1", "x4"], ["x1", "x5"], ["x2", "x4"], ["x4", "x5"], ["x1", "x2", "x3"]]


def mono(ring, names):
    return Polynomial(ring, {ring.monomial({v: 1 for v in names}): 1})


def cx(universe, facets):
    return SimplicialComplex(universe, facets)


# Stanley-Reisner correspondence


def test_example_facets_from_ideal():
    I = Ideal(V6, [mono(V6, g) for g in EXAMPLE_GENS])
    assert facets_from_squarefree_ideal(I).facet_sets == {frozenset(f) for f in EXAMPLE_FACETS}


def test_example_ideal_from_facets():
    got = stanley_reisner_ideal(cx(V6.names, EXAMPLE_FACETS), V6)
    assert sorted(map(frozenset, minimal_nonfaces(cx(V6.names, EXAMPLE_FACETS)))) == sorted(
        map(frozenset, EXAMPLE_GENS))
    assert ideal_equals(got, Ideal(V6, [mono(V6, g) for g in EXAMPLE_GENS]))


def test_two_point_ideal_facets():
    P = PatchRing(2)
    I = P.ideal([P.b(2), P.b(1) * P.a(2)])
    assert facets_from_squarefree_ideal(I).facet_sets == {frozenset({"a1", "a2"}), frozenset({"a1", "b1"})}


def test_zero_ideal_gives_full_simplex():
    assert facets_from_squarefree_ideal(Ideal(V6, [])).facets == (V6.names,)
    assert stanley_reisner_ideal(cx(V6.names, [V6.names]), V6).is_zero()


def test_empty_face_only_complex():
    only_empty = cx(("x", "y"), [[]])
    assert not only_empty.is_void and only_empty.facets == ((),)
    I = stanley_reisner_ideal(only_empty)
    assert sorted(frozenset(nf) for nf in minimal_nonfaces(only_empty)) == [{"x"}, {"y"}]
    assert len(I.gens) == 2


def test_unit_ideal_gives_void_complex():
    R = RingContext(("x", "y"), 2)
    void = facets_from_squarefree_ideal(Ideal(R, [R.one()]))
    assert void.is_void and not void.faces()


def test_non_squarefree_generator_rejected():
    R = RingContext(("x", "y"), 2)
    with pytest.raises(ComplexError):
        facets_from_squarefree_ideal(Ideal(R, [R.var("x") ** 2]))
    with pytest.raises(ComplexError):
        facets_from_squarefree_ideal(Ideal(R, [R.var("x") + R.var("y")]))


def test_minimal_transversals_small():
    got = minimal_transversals([{"a", "b"}, {"b", "c"}])
    assert set(got) == {frozenset({"b"}), frozenset({"a", "c"})}


def brute_transversals(edges, universe):
    out = []
    for k in range(len(universe) + 1):
        for cand in itertools.combinations(universe, k):
            s = set(cand)
            if all(s & e for e in edges) and not any(o <= s for o in out):
                out.append(frozenset(s))
    return set(out)


universe8 = tuple("abcdefgh")
supports = st.lists(st.frozensets(st.sampled_from(universe8), min_size=1, max_size=4), max_size=6)


@settings(max_examples=300, deadline=None)
@given(supports)
def test_transversals_match_brute_force(edges):
    assert set(minimal_transversals(edges)) == brute_transversals(edges, universe8)


universe10 = tuple(f"v{i}" for i in range(10))


@settings(max_examples=300, deadline=None)
@given(st.lists(st.frozensets(st.sampled_from(universe10), min_size=1, max_size=4), max_size=7))
def test_round_trip_through_ideal(edges):
    complex_ = facets_from_supports(edges, universe10)
    again = facets_from_supports(minimal_nonfaces(complex_), universe10)
    assert again == complex_
    minimal_edges = {e for e in map(frozenset, edges) if not any(o < e for o in map(frozenset, edges))}
    assert set(minimal_nonfaces(complex_)) == minimal_edges


# del, link, star, cone


def test_delete_link_star_small_examples():
    edge = cx(("v", "w"), [["v", "w"]])
    assert delete(edge, "v").facets == (("w",),)
    assert link(cx(("v",), [["v"]]), "v").facets == ((),)
    assert star(edge, "v") == edge
    with pytest.raises(ComplexError):
        delete(edge, "z")


def test_gluing_identity():
    complexes = [stratum_complex(L) for L in enumerate_strata(3)]
    for c in complexes:
        for v in c.vertices:
            faces = delete(c, v).faces() | star(c, v).faces()
            assert faces == c.faces()
            assert {f for f in link(c, v).faces()} == {f - {v} for f in star(c, v).faces() if v in f}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_shedding_last_plain_letter(n):
    for u in range(1, n + 1):
        whole = stratum_complex(StratumLabel(0, u, n - u, 0))
        assert delete(whole, f"a{n}").facet_sets == stratum_complex(StratumLabel(0, u - 1, n - u, 0), n).facet_sets
        if 2 <= u < n:
            below = stratum_complex(StratumLabel(0, u, n - u - 1, 1), n)
            assert link(whole, f"a{n}").facet_sets == below.facet_sets


def test_cone_rejects_existing_apex():
    with pytest.raises(ComplexError):
        cone(cx(("v",), [["v"]]), "v")


# boundary


def test_boundary_examples():
    assert boundary(cx(("1", "2"), [["1", "2"]])).facet_sets == {frozenset("1"), frozenset("2")}
    two = stratum_complex("0,1,1,+0")
    assert two.facet_sets == {frozenset({"a1", "a2"}), frozenset({"a1", "b1"})}
    assert boundary(two).facet_sets == {frozenset({"a2"}), frozenset({"b1"})}
    # a closed cycle has every ridge in two facets
    triangle = cx(("1", "2", "3"), [["1", "2"], ["2", "3"], ["1", "3"]])
    assert boundary(triangle).is_void


def test_boundary_needs_pure_complex():
    with pytest.raises(ComplexError):
        boundary(cx(("1", "2", "3"), [["1", "2"], ["3"]]))


# vertex decomposability


def test_simplices_and_void_are_decomposable():
    assert is_vertex_decomposable(cx(("1", "2", "3"), [["1", "2", "3"]]))
    assert is_vertex_decomposable(cx(("1",), []))


def test_disjoint_edges_are_not_decomposable():
    res = is_vertex_decomposable(cx(("1", "2", "3", "4"), [["1", "2"], ["3", "4"]]))
    assert not res and res.witness is None


def test_non_pure_reports_reason():
    res = is_vertex_decomposable(cx(("1", "2", "3"), [["1", "2"], ["3"]]))
    assert not res and "pure" in res.reason


@pytest.mark.parametrize("n", range(1, 6))
def test_one_hat_family_is_a_ball(n):
    c = stratum_complex(StratumLabel(0, 1, n - 1, 0))
    res = is_vertex_decomposable(c, require_link_in_boundary=True)
    assert res and verify_witness(c, res.witness)


def test_witness_checker_rejects_forged_tree():
    c = stratum_complex("0,1,2,+0")
    res = is_vertex_decomposable(c, require_link_in_boundary=True)
    forged = dict(res.witness, vertex="b3" if res.witness["vertex"] != "b3" else "a1")
    assert not verify_witness(c, forged)
    assert shedding_order(res.witness)


def test_two_on_axis_one_off_has_no_ball_certificate():
    c = stratum_complex("2,0,1,+0")
    assert is_vertex_decomposable(c)
    assert not is_vertex_decomposable(c, require_link_in_boundary=True)


def random_vd_complex(rng, size):
    names = [f"v{i}" for i in range(size)]
    # shellable by construction: repeatedly cone or glue along a ridge
    facets = [frozenset(names[:2])]
    used = 2
    for _ in range(rng.randint(0, 4)):
        if used < size and rng.random() < 0.6:
            base = rng.choice(facets)
            drop = rng.choice(sorted(base))
            facets.append((base - {drop}) | {names[used]})
            used += 1
    return SimplicialComplex(names, facets)


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(3, 7))
def test_cone_preserves_decomposability(rng, size):
    c = random_vd_complex(rng, size)
    if is_vertex_decomposable(c):
        assert is_vertex_decomposable(cone(c, "apex"))
