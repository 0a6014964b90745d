import itertools

import pytest

from invbraid.coxeter import alternating, preset
from invbraid.involutions import (
    UnboundedEnumeration,
    WordRelation,
    braid_relations,
    classify_pair,
    enumerate_hecke_words,
    enumerate_involution_words,
    exceptional_relations,
    generalized_half_braid_relations,
    half_braid_relations,
    hecke_involution,
    invol_demazure_step,
    involution_of_word,
    m_theta,
    mixed_relations,
    reduced_words,
    twisted_identity,
    twisted_involutions,
)
from invbraid.rewriting import equivalence_class


def P(a, b):
    return WordRelation(tuple(a), tuple(b), "prefix")


def test_demazure_step_examples():
    A3 = preset("A3")
    y = invol_demazure_step(twisted_identity(A3), 1)
    assert y.element == A3.element((1,)) and y.hat_length == 1
    z = twisted_identity(A3)
    for s in (1, 3, 2, 1):
        z = invol_demazure_step(z, s)
    assert z.element == A3.longest_element() and z.hat_length == 4
    A2 = preset("A2", twist="swap")
    y = invol_demazure_step(twisted_identity(A2), 1)
    assert y.element == A2.element((2, 1))
    # a descent leaves the element alone
    assert invol_demazure_step(y, 1) is y


def test_swap_twist_brute_force():
    A2 = preset("A2", twist="swap")
    invols = {w for w in A2.elements() if w.twisted() == w.inverse()}
    assert {z.element for z in twisted_involutions(A2)} == invols


def test_example_words_of_4321():
    A3 = preset("A3")
    z = involution_of_word(A3, (1, 3, 2, 1))
    assert enumerate_involution_words(z) == {
        (1, 3, 2, 1), (3, 1, 2, 1), (3, 2, 1, 2), (2, 3, 1, 2),
        (2, 1, 3, 2), (1, 2, 3, 2), (1, 3, 2, 3), (3, 1, 2, 3)}


def test_words_in_a2():
    A2 = preset("A2")
    got = {z.element.reduced_word(): enumerate_involution_words(z) for z in twisted_involutions(A2)}
    assert got == {(): {()}, (1,): {(1,)}, (2,): {(2,)}, (1, 2, 1): {(1, 2), (2, 1)}}
    # brute force: words of length <= 3 whose Demazure chain never stalls
    brute = {}
    for n in range(4):
        for w in itertools.product((1, 2), repeat=n):
            z = involution_of_word(A2, w)
            if z is not None:
                brute.setdefault(z.element.reduced_word(), set()).add(w)
    assert brute == got


def test_unbounded_enumeration():
    with pytest.raises(UnboundedEnumeration):
        twisted_involutions(preset("~A2"))
    with pytest.raises(UnboundedEnumeration):
        enumerate_hecke_words(twisted_identity(preset("~A2")))


def test_m_theta_branches():
    assert m_theta(1, 2, {1: 1, 2: 2}, 3) == 2
    assert m_theta(1, 2, {1: 2, 2: 1}, 4) == 2
    assert m_theta(1, 2, {1: 1, 2: 2}, 4) == 3
    assert m_theta(1, 2, {1: 3, 2: 2}, 3) == 3
    assert m_theta(1, 2, {1: 1, 2: 2}, float("inf")) == float("inf")


def test_classify_pair():
    A2 = preset("A2")
    tag, z, mt = classify_pair(twisted_identity(A2), 1, 2)
    assert mt == 2 and {(1, 2), (2, 1)} <= enumerate_involution_words(z)
    P2 = preset("2(A1xA1)")
    tag, z, mt = classify_pair(twisted_identity(P2), 1, 2)
    assert tag == 2 and mt == 1 and z.element == P2.element((1, 2))
    assert {(1,), (2,)} <= enumerate_involution_words(z)
    with pytest.raises(ValueError):
        classify_pair(involution_of_word(A2, (1,)), 1, 2)


def test_relation_families_a3():
    A3 = preset("A3")
    assert half_braid_relations(A3) == {P((1, 2), (2, 1)), P((2, 3), (3, 2))}
    assert len(braid_relations(A3)) == 3
    assert exceptional_relations(A3) == set()


def test_exceptional_b3():
    B3 = preset("B3")
    assert exceptional_relations(B3) == {P((2, 1, 3, 2, 1, 3), (1, 3, 2, 1, 3, 2))}


def test_exceptional_c4_tilde():
    S = preset("~C4", twist="reverse")
    assert exceptional_relations(S) == {P((2, 1, 3, 2), (2, 1, 2, 3)), P((2, 3, 1, 2), (2, 3, 2, 1))}


def test_relation_json():
    r = P((2, 1), (1, 2))
    assert r.left == (1, 2)
    assert WordRelation.from_json(r.to_json()) == r
    with pytest.raises(ValueError):
        WordRelation((1,), (1, 2), "anywhere")


def test_hecke_words():
    A1 = preset("A1")
    z = involution_of_word(A1, (1,))
    assert enumerate_hecke_words(z) == {(1,)}
    A2 = preset("A2")
    z = involution_of_word(A2, (1, 2))
    brute = set()
    for v in A2.elements():
        if hecke_involution(A2, v.reduced_word()).element == z.element:
            brute |= reduced_words(v)
    assert enumerate_hecke_words(z) == brute
    assert brute == {(1, 2), (2, 1), (1, 2, 1), (2, 1, 2)}


def test_hecke_contains_involution_words():
    A3 = preset("A3")
    for z in twisted_involutions(A3):
        assert enumerate_involution_words(z) <= enumerate_hecke_words(z)


def test_mixed_relations_shape():
    A2 = preset("A2")
    rels = mixed_relations(A2, 3)
    assert all(r.mode == "exact" for r in rels)
    assert rels == {
        WordRelation((2, 1), (1, 2), "exact"),
        WordRelation((1, 2), (1, 2, 1), "exact"),
        WordRelation((2, 1), (2, 1, 2), "exact"),
    }


def test_generalized_half_braids_pq():
    A3 = preset("A3")
    A = generalized_half_braid_relations(A3)
    assert P((1, 2, 3, 2), (1, 3, 2, 3)) in A
    assert generalized_half_braid_relations(A3, p=2, q=3) == half_braid_relations(A3)
    for r in A:
        zl, zr = involution_of_word(A3, r.left), involution_of_word(A3, r.right)
        assert zl is not None and zl.element == zr.element


@pytest.mark.parametrize("name", ["A3", "B3", "H3"])
def test_matsumoto(name):
    S = preset(name)
    B = braid_relations(S)
    for w in S.elements():
        words = reduced_words(w)
        assert equivalence_class(next(iter(words)), B) == words


@pytest.mark.parametrize("name", ["A3", "B3"])
def test_two_descents(name):
    S = preset(name)
    for z in twisted_involutions(S):
        words = enumerate_involution_words(z)
        assert len({len(w) for w in words}) == 1
        for s, t in itertools.combinations(S.generators, 2):
            if not {s, t} <= z.descents():
                continue
            ms = []
            for m in range(1, S.m(s, t) + 1):
                a, b = alternating(s, t, m)[::-1], alternating(t, s, m)[::-1]
                heads = {w[:-m] for w in words if w[-m:] == a} & {w[:-m] for w in words if w[-m:] == b}
                if heads:
                    ms.append(m)
            assert len(ms) == 1


@pytest.mark.parametrize("name", ["A3", "B3"])
def test_x_lemma(name):
    S = preset(name)
    for z in twisted_involutions(S):
        w = z.element
        for s in S.generators:
            c = w.right(s).left(S.star(s))
            assert (c.length == w.length) == (c == w)
