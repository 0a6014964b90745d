import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invbraid.coxeter import preset
from invbraid.involutions import (
    WordRelation,
    braid_relations,
    enumerate_involution_words,
    exceptional_relations,
    hat_braid_relations,
    involution_of_word,
    twisted_involutions,
)
from invbraid.rewriting import (
    ClassOverflow,
    NotCoInvolutionWords,
    equivalence_class,
    failing_involutions,
    implies,
    monotone_chain,
    neighbors,
    spans,
    spans_involution_words,
)

A2, A3, B3 = preset("A2"), preset("A3"), preset("B3")
P = lambda a, b: WordRelation(tuple(a), tuple(b), "prefix")


def test_neighbors_examples():
    assert neighbors((1, 2, 1), braid_relations(A2)) == {(2, 1, 2)}
    assert neighbors((1, 3, 2, 1), hat_braid_relations(A3)) == {(3, 1, 2, 1)}
    assert neighbors((2, 1, 3), {P((1, 2), (2, 1))}) == {(1, 2, 3)}
    assert neighbors((3, 2, 1), {P((1, 2), (2, 1))}) == set()


def test_class_examples():
    words = equivalence_class((1, 3, 2, 1), hat_braid_relations(A3))
    assert len(words) == 8 and (3, 1, 2, 3) in words
    assert equivalence_class((), hat_braid_relations(A3)) == {()}
    assert equivalence_class((1, 2), hat_braid_relations(A2)) == {(1, 2), (2, 1)}


def test_class_overflow_keeps_partial():
    with pytest.raises(ClassOverflow) as exc:
        equivalence_class((1, 3, 2, 1), hat_braid_relations(A3), limit=3)
    assert len(exc.value.partial) > 3


def test_spans_examples():
    z = involution_of_word(A3, (1, 3, 2, 1))
    assert spans(enumerate_involution_words(z), hat_braid_relations(A3))
    top = max(twisted_involutions(B3), key=lambda z: z.hat_length)
    assert not spans_involution_words(top, hat_braid_relations(B3))
    assert spans_involution_words(top, hat_braid_relations(B3) | exceptional_relations(B3))
    assert spans({()}, set())


def test_spans_element_and_word_paths_agree():
    rels = hat_braid_relations(B3)
    for z in twisted_involutions(B3):
        assert spans_involution_words(z, rels) == spans(enumerate_involution_words(z), rels)


def test_failing_involutions():
    assert failing_involutions(A3, hat_braid_relations(A3)) == []
    assert len(failing_involutions(B3, hat_braid_relations(B3))) == 1


def test_implies_examples():
    hat = hat_braid_relations(A3)
    r = implies(hat, P((2, 3, 1, 2), (2, 1, 3, 2)), A3, depth=0)
    assert r and r.depth == 0
    # (2,3,2,1) stalls at its third letter, so it is no involution word
    with pytest.raises(NotCoInvolutionWords):
        implies(hat, P((2, 3, 2, 1), (2, 3, 1, 2)), A3, depth=0)
    assert not implies(set(), P((1, 2), (2, 1)), A2, depth=0)
    with pytest.raises(NotCoInvolutionWords):
        implies(hat, P((1, 2), (1, 3)), A3)


def test_implies_reports_extension():
    # the B3 exceptional relation is not implied by the hat relations
    rel = next(iter(exceptional_relations(B3)))
    got = implies(hat_braid_relations(B3), rel, B3, depth=1)
    assert not got and got.witness == ()


def test_monotone_chain():
    rels = {WordRelation((1, 2, 1), (1, 2), "exact")}
    chain = monotone_chain((1, 2, 1), rels, lambda w: len(w) == 2)
    assert chain == [(1, 2, 1), (1, 2)]
    assert monotone_chain((1, 2), rels, lambda w: len(w) == 3) is None


a3_words = st.lists(st.sampled_from([1, 2, 3]), max_size=7).map(tuple)


@settings(max_examples=200, deadline=None)
@given(a3_words)
def test_neighbors_symmetric(w):
    rels = hat_braid_relations(A3) | exceptional_relations(preset("A3", twist="reverse"))
    for v in neighbors(w, rels):
        assert w in neighbors(v, rels)


def test_class_independent_of_order():
    rels = sorted(hat_braid_relations(B3))
    z = max(twisted_involutions(B3), key=lambda z: z.hat_length)
    start = min(enumerate_involution_words(z))
    base = equivalence_class(start, rels)
    rng = random.Random(3)
    for _ in range(5):
        rng.shuffle(rels)
        assert equivalence_class(start, rels) == base


@pytest.mark.parametrize("name", ["A3", "B3"])
def test_classes_stay_inside_involution_words(name):
    S = preset(name)
    rels = hat_braid_relations(S) | exceptional_relations(S)
    for z in twisted_involutions(S):
        words = enumerate_involution_words(z)
        for w in words:
            assert neighbors(w, rels) <= words
