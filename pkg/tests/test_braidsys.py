import itertools

import pytest
from gmpy2 import mpq

from invbraid.braidsys import (
    BraidSystem,
    NotConstant,
    asc,
    des,
    descent_set,
    down,
    hdes,
    is_redundant,
    is_trivial,
    is_valid,
    root_system_pair,
    sigma_relations,
    solutions,
    substitute,
)
from invbraid.coxeter import preset
from invbraid.feasibility import Constraint, ConstraintSystem
from invbraid.involutions import WordRelation, enumerate_involution_words, twisted_involutions
from invbraid.numfield import ONE, ZERO, FieldElement, LinearPoly

A3 = preset("A3")
F = lambda p, q=1: FieldElement(mpq(p, q))
vec = lambda *xs: tuple(F(v) for v in xs)
third = lambda k: F(k, 3)


@pytest.fixture
def roots():
    return root_system_pair(A3, 1, 2, "id"), root_system_pair(A3, 1, 2, "swap")


def test_roots(roots):
    B, Bp = roots
    assert (B.left, B.right) == ((2, 1), (1, 2))
    assert B.sigma == {1: vec(1, 0, 0), 2: vec(0, 1, 0)}
    assert Bp.sigma == {1: vec(0, 1, 0), 2: vec(1, 0, 0)}
    assert B.boundary() == [3]


def test_down_constraints(roots):
    _, Bp = roots
    x1, x2, x3 = (LinearPoly.var(i) for i in (1, 2, 3))
    h = F(1, 2)
    printed = ConstraintSystem([
        Constraint.ge(x1), Constraint.ge(x2), Constraint.ge(x3),
        Constraint.eq(x1 * h - x2 + x3 * h),
        Constraint.eq(LinearPoly(h) - x1 + x2 * h),
        Constraint.abs_one(x3),
    ])
    assert down(Bp, 3).constraints == printed


def test_down_errors(roots):
    B, _ = roots
    with pytest.raises(ValueError):
        down(B, 1)
    with pytest.raises(NotConstant):
        down(down(B, 3), 3)


def test_down_without_det():
    S = preset("A4")
    b = down(root_system_pair(S, 1, 2, "id"), 3)
    assert all(c.kind != "|.|=1" for c in b.constraints)


def test_self_norm_constraint_is_redundant(roots):
    for b in roots:
        d = down(b, 3)
        psi = solutions(d)
        # the norm condition is quadratic and left out; the unique point obeys it anyway
        assert len(psi) == 1
        col = substitute(d, psi[0]).sigma[3]
        assert A3.form_of(col, col) == ONE


def test_worked_example_operations(roots):
    B, Bp = roots
    d = down(B, 3)
    (psi,) = solutions(d)
    b0 = substitute(d, psi)
    assert b0.is_constant()
    assert b0.sigma[3] == (third(-2), third(-4), F(-1))
    assert descent_set(b0) == [3]
    b1 = hdes(3, b0)
    assert (b1.left, b1.right) == ((3, 2, 1), (3, 1, 2))
    assert b1.sigma[2] == (third(-2), third(-1), third(2))
    assert not is_valid(b1)

    dp = down(Bp, 3)
    (psi2,) = solutions(dp)
    c0 = substitute(dp, psi2)
    assert c0.sigma[3] == vec(-1, -1, -1)
    c1 = hdes(3, c0)
    c1 = BraidSystem(A3, c1.left, c1.right, c1.sigma)
    assert c1.sigma == {1: vec(0, 1, 1), 2: vec(0, -1, 0), 3: vec(1, 1, 0)}
    c2 = des(2, c1)
    c2 = BraidSystem(A3, c2.left, c2.right, c2.sigma)
    assert (c2.left, c2.right) == ((2, 3, 2, 1), (2, 3, 1, 2))
    assert c2.sigma == {1: vec(0, 0, 1), 2: vec(0, 1, 0), 3: vec(1, 0, 0)}
    assert is_valid(c2) and not descent_set(c2) and not is_redundant(c2)


def test_asc_trivial_constraints(roots):
    B, _ = roots
    assert asc(1, B).constraints == B.constraints


def test_substitute_identity(roots):
    B, _ = roots
    assert substitute(B, {}) == B


def test_nonreduced_invalid():
    b = BraidSystem(A3, (1, 1), (2, 2), {1: vec(1, 0, 0)})
    assert not is_valid(b)


def test_redundancy_examples(roots):
    for b in roots:
        assert not is_redundant(b)
    same_end = BraidSystem(A3, (2, 1), (3, 1), {1: vec(1, 0, 0)})
    assert is_redundant(same_end)


def test_triviality(roots):
    B, Bp = roots
    assert is_trivial(B) and not is_trivial(Bp)


def test_sigma_relations():
    b = BraidSystem(A3, (2, 1), (1, 2), {1: vec(1, 0, 0), 2: vec(0, 1, 0)})
    rels = sigma_relations(b)
    assert WordRelation((1, 2, 1), (2, 1, 1), "prefix") in rels
    assert all(r.mode == "prefix" for r in rels)


def test_json_dump(roots):
    B, _ = roots
    d = down(B, 3).to_json()
    assert d["s"] == [2, 1] and d["domain"] == [1, 2, 3]
    assert len(d["constraints"]) == 6


def test_des_hdes_stay_linear(roots):
    _, Bp = roots
    d = down(Bp, 3)
    for op in (des, hdes):
        b = op(3, d)
        for col in b.sigma.values():
            for e in col:
                assert isinstance(e, (FieldElement, LinearPoly))


@pytest.mark.parametrize("name", ["A3", "B3"])
def test_descents_inside_element_descents(name):
    S = preset(name)
    for w in S.elements():
        for k in range(1, S.n + 1):
            for J in itertools.combinations(S.generators, k):
                b = BraidSystem(S, (), (), w.restrict(J))
                assert set(descent_set(b)) <= w.right_descents()
