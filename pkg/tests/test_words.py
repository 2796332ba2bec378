import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbsplit.groebner import initial_ideal
from hilbsplit.hilbpatch import PatchRing, StratumLabel, enumerate_strata, stratum_contained, stratum_ideal
from hilbsplit.srcomplex import facets_from_squarefree_ideal
from hilbsplit.words import (
    FullWord,
    WordError,
    as_full_word,
    classify_word,
    containment_poset,
    cover_relations,
    enumerate_full_words,
    fill_up,
    is_full,
    is_graded,
    raw_words,
    recursion_identities,
    stratum_complex,
    to_facet,
)


def words_of(text):
    return {str(w) for w in enumerate_full_words(text)}


# enumeration


def test_one_one_one_word_list():
    assert words_of("1,1,1,+0") == {"aauA", "Auaa", "AuauA", "auAuA"}


@pytest.mark.parametrize("n", range(2, 7))
def test_single_word_for_generic_punctual_family(n):
    assert words_of(StratumLabel(0, 0, n - 1, 1).__str__()) == {"au" * (n - 1) + "a"}


def test_two_point_word_list():
    assert words_of("0,1,1,+0") == {"auA", "aa"}


def test_enumeration_order_is_stable():
    words = enumerate_full_words("1,1,1,+0")
    assert [str(w) for w in words] == ["auAuA", "Auaa", "AuauA", "aauA"]
    assert words == sorted(words, key=FullWord.sort_key)


def test_enumeration_rejects_bad_labels():
    with pytest.raises(Exception):
        enumerate_full_words("1,1,+0")
    with pytest.raises(WordError):
        enumerate_full_words(42)


@pytest.mark.parametrize("n", range(1, 7))
def test_words_have_n_letters_and_own_label(n):
    for label in enumerate_strata(n):
        for w in enumerate_full_words(label):
            assert w.size == n
            assert w.label == label


# facets


def test_to_facet_examples():
    assert to_facet("aauAu") == {"a1", "a2", "b2", "b3"}
    assert to_facet("Aua") == {"b1", "a2"}
    assert to_facet("AAA") == frozenset()


@pytest.mark.parametrize("bad", ["uA", "auu", "ab", "a u"])
def test_to_facet_rejects_malformed_words(bad):
    with pytest.raises(WordError):
        to_facet(bad)


def test_to_facet_checks_length():
    with pytest.raises(WordError):
        to_facet("aa", n=3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_words_match_initial_ideal_facets(n):
    P = PatchRing(n)
    for label in enumerate_strata(n):
        init = initial_ideal(stratum_ideal(P, label), P.order)
        assert facets_from_squarefree_ideal(init).facet_sets == stratum_complex(label).facet_sets, str(label)


@pytest.mark.parametrize("n", range(1, 7))
def test_to_facet_is_injective_per_stratum(n):
    for label in enumerate_strata(n):
        words = enumerate_full_words(label)
        assert len({to_facet(w) for w in words}) == len(words)


def test_facets_of_two_on_axis_one_off():
    expected = [
        {"a2", "a3", "b1", "b3"},
        {"a3", "b1", "b2", "b3"},
        {"a1", "b1", "b2", "b3"},
        {"a1", "a2", "b2", "b3"},
        {"a2", "b1", "b2", "b3"},
    ]
    assert stratum_complex("2,0,1,+0").facet_sets == {frozenset(f) for f in expected}


# raw words


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_raw_word_map_is_a_bijection(n):
    words = list(raw_words(n))
    assert len(words) == 4**n
    images = {to_facet(w) for w in words}
    assert len(images) == 4**n
    names = [f"{c}{i}" for i in range(1, n + 1) for c in "ab"]
    assert all(img <= set(names) for img in images)


@pytest.mark.parametrize("n", [5, 6])
def test_raw_word_map_sampled(n):
    rng = random.Random(n)
    words = ["".join(rng.choice(["a", "au", "A", "Au"]) for _ in range(n)) for _ in range(500)]
    assert len({to_facet(w) for w in words}) == len(set(words))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_full_words_are_exactly_the_unflagged_raw_words(n):
    full = {str(w) for label in enumerate_strata(n) for w in enumerate_full_words(label)}
    assert full == {w for w in raw_words(n) if is_full(w)}


# classification and fill-up


def test_partial_by_first_condition():
    assert not is_full("aAAaaAu")
    assert classify_word("aAAaaAu").kind == "partial"


def test_full_fill_up_output():
    assert classify_word("auAuaauauAu").kind == "full"


def test_partial_by_second_condition():
    assert not is_full("aA")
    assert not is_full("auaA")
    assert is_full("auaaA")


def test_fill_up_examples():
    assert str(fill_up("aAaaaAu")) == "auAuaauauAu"
    assert str(fill_up("aAaaAaAA")) == "aaaaAaaA"


def test_fill_up_fixes_full_words():
    for label in enumerate_strata(3):
        for w in enumerate_full_words(label):
            assert fill_up(str(w)) == w


def test_as_full_word_rejects_partial():
    with pytest.raises(WordError):
        as_full_word("aA")


raw = st.lists(st.sampled_from(["a", "au", "A", "Au"]), min_size=1, max_size=8).map("".join)


@settings(max_examples=1000, deadline=None)
@given(raw)
def test_fill_up_properties(word):
    c = classify_word(word)
    assert is_full(str(c.filled))
    assert to_facet(word) <= to_facet(c.filled)
    assert c.filled.label == c.label
    assert c.filled in enumerate_full_words(c.label)
    assert c.full == (str(c.filled) == word)


# recursion identities and the containment poset


@pytest.mark.parametrize("n", range(1, 6))
def test_recursion_identities(n):
    results = recursion_identities(n)
    assert results and all(ok for _, ok in results)


def test_recursion_example_appends_lone_letter():
    for n in (4, 5):
        for u in range(2, n + 1):
            lhs = words_of(str(StratumLabel(0, u, n - u, 1)))
            rhs = {w + "a" for w in words_of(str(StratumLabel(0, u - 1, n - u, 0)))}
            assert lhs == rhs


@pytest.mark.parametrize("n", range(1, 7))
def test_poset_is_graded(n):
    assert is_graded(containment_poset(n))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_word_poset_agrees_with_ideal_containment(n):
    P = PatchRing(n)
    up = containment_poset(n)
    labels = enumerate_strata(n)
    for a in labels:
        for b in labels:
            if a != b:
                assert stratum_contained(P, a, b) == (b in up[a]), (str(a), str(b))


def test_poset_has_unique_top_and_bottom():
    for n in range(1, 7):
        up = containment_poset(n)
        top = StratumLabel(0, 0, n, 0)
        bottom = StratumLabel(0, n, 0, 0)
        assert all(top in up[L] for L in up if L != top)
        assert len(up[bottom]) == len(up) - 1
        assert cover_relations(up)
