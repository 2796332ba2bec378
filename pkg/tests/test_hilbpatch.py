import pytest

from hilbsplit.groebner import Ideal, ideal_equals
from hilbsplit.hilbpatch import (
    LEX,
    REVLEX,
    Component,
    PatchError,
    PatchRing,
    StratumLabel,
    applicable_directions,
    build_matrix,
    c_coefficient,
    census,
    check_degeneration,
    check_specialization,
    component_ideal,
    determinant,
    enumerate_strata,
    minors_ideal,
    origin_in_stratum,
    predicted_degeneration,
    random_points,
    specialize,
    splitting_polynomial,
    square_census,
    stratum_contained,
    stratum_ideal,
    xy_ring,
)
from hilbsplit.polyring import format_poly, initial_form, parse_poly

M2_DISPLAY = [["-a1", "-a2*b2"], ["-a2", "-a1 + b1*a2"]]
M3_DISPLAY = [
    ["-a1", "-a2*b2 - a3*b3", "-a2*b3"],
    ["-a2", "-a1 + b1*a2", "-a3*b3"],
    ["-a3", "-a2 + b1*a3", "-a1 + b1*a2 + b2*a3"],
]
# the displayed entries with their outer signs distributed
M4_DISPLAY = [
    ["-a1", "-a2*b2 - a3*b3 - a4*b4", "-a2*b3 - a3*b4", "-a2*b4"],
    ["-a2", "-a1 + b1*a2", "-a3*b3 - a4*b4", "-a3*b4"],
    ["-a3", "-a2 + b1*a3", "-a1 + b1*a2 + b2*a3", "-a4*b4"],
    ["-a4", "-a3 + b1*a4", "-a2 + b1*a3 + b2*a4", "-a1 + b1*a2 + b2*a3 + b3*a4"],
]


def as_matrix(patch, display):
    return tuple(tuple(parse_poly(patch.ring, e) for e in row) for row in display)


def L(text):
    return StratumLabel.parse(text)


# coefficients and matrices


def test_c_coefficient_examples():
    P3, P4 = PatchRing(3), PatchRing(4)
    assert c_coefficient(P3, 1, 2) == parse_poly(P3.ring, "a2*b2 + a3*b3")
    assert c_coefficient(P3, 3, 3) == parse_poly(P3.ring, "a1 - b1*a2 - b2*a3")
    assert c_coefficient(P4, 1, 4) == parse_poly(P4.ring, "a2*b4")


def test_c_coefficient_range():
    with pytest.raises(PatchError):
        c_coefficient(PatchRing(2), 3, 1)


@pytest.mark.parametrize("n,display", [(2, M2_DISPLAY), (3, M3_DISPLAY), (4, M4_DISPLAY)])
def test_matrix_matches_display(n, display):
    P = PatchRing(n)
    assert build_matrix(P) == as_matrix(P, display)


def test_one_point_matrix():
    P = PatchRing(1)
    assert build_matrix(P) == ((-P.a(1),),)


@pytest.mark.parametrize("n", range(2, 7))
def test_matrix_nesting(n):
    P = PatchRing(n)
    big = build_matrix(P)
    small = build_matrix(P, n - 1)
    for i in range(n - 1):
        for j in range(n - 1):
            assert big[i][j].substitute({f"b{n}": 0}) == small[i][j]


@pytest.mark.parametrize("n", range(1, 5))
def test_matrix_entries_are_homogeneous(n):
    P = PatchRing(n)
    for i, row in enumerate(build_matrix(P), start=1):
        for j, entry in enumerate(row, start=1):
            weights = {P.ring.t2_weight(m) for m in entry.terms}
            assert weights == {(-1, i - j)}


def test_bad_matrix_level():
    with pytest.raises(PatchError):
        build_matrix(PatchRing(3), 1)


# splitting polynomial


def test_f2_display():
    assert format_poly(splitting_polynomial(PatchRing(2))) == "a1*b1*a2*b2 - a1^2*b2 + a2^2*b2^2"


def test_f1():
    assert format_poly(splitting_polynomial(PatchRing(1))) == "a1*b1"


@pytest.mark.parametrize("n", range(1, 7))
def test_initial_form_of_f_n(n):
    P = PatchRing(n)
    f = splitting_polynomial(P)
    expected = P.ring.one()
    for v in P.ring.names:
        expected = expected * P.ring.var(v)
    assert initial_form(f, P.order) == expected
    assert f.total_degree() == 2 * n


def test_determinant_against_permutation_expansion():
    import itertools

    P = PatchRing(3)
    M = build_matrix(P)
    total = P.ring.zero()
    for perm in itertools.permutations(range(3)):
        sign = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if perm[i] > perm[j]:
                    sign = -sign
        term = P.ring.const(sign)
        for i in range(3):
            term = term * M[i][perm[i]]
        total = total + term
    assert determinant(P.ring, M) == total


# minors and stratum ideals


def test_minors_examples():
    P2, P1 = PatchRing(2), PatchRing(1)
    M2 = build_matrix(P2)
    assert ideal_equals(minors_ideal(P2, M2, 2), P2.ideal([parse_poly(P2.ring, "a1^2 - a1*b1*a2 - a2^2*b2")]))
    assert minors_ideal(P2, M2, 3).is_zero()
    assert ideal_equals(minors_ideal(P1, build_matrix(P1), 1), P1.ideal([P1.a(1)]))
    with pytest.raises(PatchError):
        minors_ideal(P2, M2, 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_whole_patch_stratum_is_zero(n):
    P = PatchRing(n)
    assert stratum_ideal(P, StratumLabel(0, 0, n, 0)).is_zero()


def test_two_point_punctual_line():
    P = PatchRing(2)
    assert ideal_equals(stratum_ideal(P, L("1,0,0,+1")), P.ideal([P.b(2), P.a(1)]))


def test_points_on_axis_have_a_radical():
    P = PatchRing(3)
    I = stratum_ideal(P, L("3,0,0,+0"))
    for g in I.gens:
        assert g.substitute({f"a{i}": 0 for i in range(1, 4)}) == P.ring.zero()
    # a_i^k lies in the ideal for some k
    for i in range(1, 4):
        assert any(I.contains(P.a(i) ** k) for k in range(1, 5))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_stratum_ideals_homogeneous(n):
    P = PatchRing(n)
    for label in enumerate_strata(n):
        assert all(g.is_homogeneous() for g in stratum_ideal(P, label).gens)


def test_stratum_ideal_rejects_wrong_size():
    with pytest.raises(PatchError):
        stratum_ideal(PatchRing(2), L("1,1,1,+0"))


# labels and census


def test_label_parsing_and_validation():
    label = L("1,1,1,+0")
    assert (label.s, label.u, label.t, label.flag) == (1, 1, 1, 0)
    assert str(label) == "1,1,1,+0" and label.dimension == 3
    for bad in ("1,1,1", "1,1,1,+2", "a,b,c,+0", "0,1,0,+1"):
        with pytest.raises(PatchError):
            L(bad)


def test_census_examples():
    assert len(enumerate_strata(1)) == 4 and census(1) == {0: 1, 1: 2, 2: 1}
    assert len(enumerate_strata(2)) == 9 and list(census(2).values()) == [1, 2, 3, 2, 1]


@pytest.mark.parametrize("n", range(1, 7))
def test_census_is_square(n):
    assert census(n) == square_census(n)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ideal_containment_respects_dimension(n):
    P = PatchRing(n)
    labels = enumerate_strata(n)
    for a in labels:
        for b in labels:
            if a != b and stratum_contained(P, a, b):
                assert a.dimension < b.dimension


# degenerations


def test_rule_examples():
    n = 3
    assert predicted_degeneration(n, StratumLabel(0, 0, n, 0), REVLEX) == (
        2, [Component(StratumLabel(0, 0, n - 1, 1), n, "line")])
    assert predicted_degeneration(n, StratumLabel(1, 2, 0, 0), LEX) == (
        8, [Component(StratumLabel(1, 1, 0, 0), n - 1, "zero", "zero")])
    assert predicted_degeneration(n, StratumLabel(0, 2, 1, 1), LEX) == (
        9, [Component(StratumLabel(0, 1, 1, 0), n - 1, "zero", "line")])


def test_lex_rule_needs_bn_zero():
    with pytest.raises(PatchError):
        predicted_degeneration(2, StratumLabel(0, 0, 2, 0), LEX)


@pytest.mark.parametrize("n", [2, 3])
def test_every_degeneration_rule(n):
    P = PatchRing(n)
    rules = set()
    for label in enumerate_strata(n):
        for direction in applicable_directions(label):
            res = check_degeneration(P, label, direction)
            assert res.holds, (str(label), direction, res.rule)
            rules.add(res.rule)
    if n == 3:
        assert rules == set(range(1, 10))


def test_degeneration_negative_control():
    P = PatchRing(3)
    label = L("1,0,2,+0")
    rule, comps = predicted_degeneration(3, label, REVLEX)
    assert len(comps) == 2
    res = check_degeneration(P, label, REVLEX)
    assert not ideal_equals(res.initial, component_ideal(P, comps[0]))


# specialization


def test_one_point_specialization():
    gens = specialize(1, (2, 3), 5)
    R = xy_ring(5)
    assert ideal_equals(Ideal(R, gens), Ideal(R, [parse_poly(R, "y - 3"), parse_poly(R, "x - 2")]))


def test_origin_specialization_is_monomial():
    gens = specialize(2, (0, 0, 0, 0), 5)
    R = xy_ring(5)
    assert ideal_equals(Ideal(R, gens), Ideal(R, [R.var("x"), R.var("y") ** 2]))


@pytest.mark.parametrize("n", range(1, 7))
def test_specialization_oracle(n):
    assert all(check_specialization(n, pt, 101) for pt in random_points(n, 101, 25, seed=n))


def test_random_points_are_seeded():
    assert random_points(3, 101, 5, 7) == random_points(3, 101, 5, 7)
    assert random_points(3, 101, 5, 7) != random_points(3, 101, 5, 8)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_origin_lies_in_every_stratum(n):
    P = PatchRing(n)
    assert all(origin_in_stratum(P, label) for label in enumerate_strata(n))
