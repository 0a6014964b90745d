import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invbraid.coxeter import (
    InvalidSystem,
    TwistedSystem,
    apply_generator,
    preset,
    standard_automorphisms,
    system_from_json,
)
from invbraid.numfield import INF, ONE, ZERO, sign


def test_preset_a3():
    S = preset("A3")
    assert S.generators == (1, 2, 3)
    assert S.m(1, 2) == S.m(2, 3) == 3 and S.m(1, 3) == 2
    assert all(S.star(g) == g for g in S.generators)


def test_preset_c4_tilde_reverse():
    S = preset("~C4", twist="reverse")
    assert S.generators == (0, 1, 2, 3, 4)
    assert S.m(0, 1) == 4 and S.m(1, 2) == 3 and S.m(2, 3) == 3 and S.m(3, 4) == 4
    assert S.m(0, 2) == 2 and S.m(0, 4) == 2
    assert [S.star(i) for i in range(5)] == [4, 3, 2, 1, 0]
    assert not S.is_finite()


def test_preset_product():
    S = preset("2(A2xA2)")
    assert S.n == 4
    assert S.m(1, 2) == 3 and S.m(3, 4) == 3
    assert all(S.m(i, j) == 2 for i in (1, 2) for j in (3, 4))
    assert S.star(1) == 3 and S.star(2) == 4


@pytest.mark.parametrize("bad", [
    lambda: preset("A3", twist="1-2"),
    lambda: TwistedSystem([1, 2], {(1, 2): 7}),
    lambda: TwistedSystem([1, 2], [[1, 3], [4, 1]]),
    lambda: preset("B3", twist="reverse"),
])
def test_invalid_systems(bad):
    with pytest.raises(InvalidSystem):
        bad()


def test_json_roundtrip():
    S = preset("~C4", twist="reverse")
    T = system_from_json(json.dumps(S.to_json()))
    assert T == S


def test_apply_generator():
    A3 = preset("A3")
    g = apply_generator(A3.identity(), 1)
    assert g.root(1) == tuple(-c for c in A3.simple_root(1))
    assert g.root(2) == A3.reflect(1, A3.simple_root(2))
    A2 = preset("A2")
    w = apply_generator(A2.element((1, 2)), 1, "right")
    assert w.length == 3 and w == A2.element((2, 1, 2))
    assert apply_generator(apply_generator(w, 2), 2) == w
    assert apply_generator(A2.element((2,)), 1, "left") == A2.element((1, 2))
    with pytest.raises(ValueError):
        apply_generator(w, 1, "middle")


def _perm_of(word, n):
    p = list(range(1, n + 2))
    for s in word:
        p[s - 1], p[s] = p[s], p[s - 1]
    return tuple(p)


def test_type_a_against_permutations():
    S = preset("A3")
    els = S.elements()
    assert len(els) == 24
    perms = {}
    for w in els:
        p = _perm_of(w.reduced_word(), 3)
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j])
        assert inv == w.length
        perms[p] = w
    assert len(perms) == 24


def test_descents_and_reduced():
    A2 = preset("A2")
    e = A2.identity()
    assert not e.right_descents()
    assert A2.element((1,)).is_right_descent(1)
    assert A2.element((1, 2, 1)).right_descents() == {1, 2}
    assert A2.is_reduced((1, 2, 1)) and not A2.is_reduced((1, 1))
    assert preset("A3").is_reduced((2, 1, 3, 2, 1))


def test_demazure_examples():
    A2 = preset("A2")
    s1 = A2.element((1,))
    assert A2.demazure(s1, s1) == s1
    assert A2.demazure(A2.identity(), A2.element((2, 1))) == A2.element((2, 1))
    assert A2.demazure(A2.element((1, 2)), A2.element((2, 1))) == A2.element((1, 2, 1))


def test_standard_automorphisms():
    def reps(S):
        return [tuple(p[g] for g in S.order) for p in standard_automorphisms(S)]
    assert reps(preset("A3")) == [(1, 2, 3), (3, 2, 1)]
    assert reps(preset("B3")) == [(1, 2, 3)]
    # ~A5: identity, a reflection through vertices, one through edges, and the half turn
    assert len(reps(preset("~A5"))) == 4


@pytest.mark.parametrize("name", ["A3", "B3", "H3"])
def test_descent_equivalences(name):
    S = preset(name)
    for w in S.elements():
        for s in S.generators:
            neg = all(sign(c) <= 0 for c in w.root(s))
            assert w.is_right_descent(s) == neg == (w.right(s).length == w.length - 1)


@pytest.mark.parametrize("name", ["A3", "B3"])
def test_commute_lemma(name):
    S = preset(name)
    for w in S.elements():
        for s, t in itertools.product(S.generators, repeat=2):
            root = w.root(s)
            pm = root in (S.simple_root(t), tuple(-c for c in S.simple_root(t)))
            assert (w.right(s) == w.left(t)) == pm


def _form_preserved(S, w):
    for a, b in itertools.product(S.generators, repeat=2):
        if S.form_of(w.root(a), w.root(b)) != S.bilinear(a, b):
            return False
    return True


words12 = st.lists(st.integers(0, 4), max_size=12)


@settings(max_examples=60, deadline=None)
@given(words12)
def test_form_preserved_affine(word):
    S = preset("~C4")
    assert _form_preserved(S, S.element(word))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 3), max_size=12))
def test_form_preserved_h3(word):
    S = preset("H3")
    assert _form_preserved(S, S.element(word))


def test_demazure_associative():
    rng = random.Random(7)
    for name in ("A3", "B3"):
        S = preset(name)
        els = S.elements()
        for _ in range(300):
            a, b, c = (rng.choice(els) for _ in range(3))
            assert S.demazure(S.demazure(a, b), c) == S.demazure(a, S.demazure(b, c))
