"""Exact linear feasibility over Q(sqrt2, sqrt3, sqrt5).

Equalities are eliminated first by substitution; the remaining
inequalities go through Fourier-Motzkin with strictness carried along.
Vector disequalities are only ever tested against the final solution set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .numfield import ONE, ZERO, FieldElement, LinearPoly, as_field, sign

__all__ = [
    "Constraint",
    "ConstraintSystem",
    "is_feasible",
    "solutions_if_finite",
    "entails",
    "INFINITE",
]

KINDS = ("=0", ">=0", ">0", "<=0", "<0", "!=0", "|.|=1")

INFINITE = "infinite"


def _poly(p) -> LinearPoly:
    return p if isinstance(p, LinearPoly) else LinearPoly(as_field(p))


def _lead(p: LinearPoly) -> FieldElement:
    return p.terms[0][1] if p.terms else p.const


def _scale_to_unit(p: LinearPoly) -> LinearPoly:
    """Divide by the absolute value of the leading coefficient."""
    lead = _lead(p)
    if not lead:
        return p
    k = abs(lead)
    if k == ONE:
        return p
    return p * k.inverse()


@dataclass(frozen=True)
class Constraint:
    """``poly kind``; for ``!=0`` the poly is a tuple of LinearPoly meaning
    "not every entry vanishes", for ``|.|=1`` it means ``|poly| = 1``."""

    kind: str
    poly: object

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown constraint kind {self.kind}")
        if self.kind == "!=0":
            object.__setattr__(self, "poly", tuple(_poly(p) for p in self.poly))
        else:
            object.__setattr__(self, "poly", _poly(self.poly))

    # helpers for the common shapes
    @classmethod
    def eq(cls, lhs, rhs=ZERO):
        return cls("=0", _poly(lhs) - _poly(rhs))

    @classmethod
    def ge(cls, lhs, rhs=ZERO):
        return cls(">=0", _poly(lhs) - _poly(rhs))

    @classmethod
    def gt(cls, lhs, rhs=ZERO):
        return cls(">0", _poly(lhs) - _poly(rhs))

    @classmethod
    def le(cls, lhs, rhs=ZERO):
        return cls("<=0", _poly(lhs) - _poly(rhs))

    @classmethod
    def lt(cls, lhs, rhs=ZERO):
        return cls("<0", _poly(lhs) - _poly(rhs))

    @classmethod
    def vector_ne(cls, lhs, rhs):
        return cls("!=0", tuple(_poly(a) - _poly(b) for a, b in zip(lhs, rhs)))

    @classmethod
    def abs_one(cls, p):
        return cls("|.|=1", p)

    def variables(self) -> set:
        if self.kind == "!=0":
            return set().union(*(p.variables() for p in self.poly)) if self.poly else set()
        return set(self.poly.variables())

    def canonical(self) -> "Constraint":
        """Normal form: <= and < flipped to >= and >, equalities scaled so the
        leading coefficient is 1, inequalities by a positive factor."""
        k, p = self.kind, self.poly
        if k == "!=0":
            return Constraint(k, tuple(p))
        if k in ("<=0", "<0"):
            k, p = {"<=0": ">=0", "<0": ">0"}[k], -p
        if k in ("=0", "|.|=1"):
            lead = _lead(p)
            if lead and k == "=0":
                p = p * lead.inverse()
            elif lead and sign(lead) < 0:
                p = -p
        else:
            p = _scale_to_unit(p)
        return Constraint(k, p)

    def substitute(self, assignment: Mapping):
        """The constraint after substitution, or True/False once decided."""
        if self.kind == "!=0":
            ps = tuple(p.substitute(assignment) for p in self.poly)
            if any(p.is_constant() and p.const for p in ps):
                return True
            ps = tuple(p for p in ps if not (p.is_constant() and not p.const))
            if not ps:
                return False
            return Constraint("!=0", ps)
        p = self.poly.substitute(assignment)
        if p.is_constant():
            return _decide(self.kind, p.const)
        return Constraint(self.kind, p)

    def holds(self, assignment: Mapping) -> bool:
        r = self.substitute(assignment)
        if r is True or r is False:
            return r
        raise KeyError(f"assignment leaves variables {sorted(self.variables())} free")

    def __str__(self):
        if self.kind == "!=0":
            return "(" + ", ".join(map(repr, self.poly)) + ") != 0"
        if self.kind == "|.|=1":
            return f"1 = |{self.poly!r}|"
        op = {"=0": "=", ">=0": "<=", ">0": "<", "<=0": ">=", "<0": ">"}[self.kind]
        return f"0 {op} {self.poly!r}"

    def to_json(self):
        if self.kind == "!=0":
            return {"kind": self.kind, "poly": [p.to_json() for p in self.poly]}
        return {"kind": self.kind, "poly": self.poly.to_json()}


def _decide(kind, c: FieldElement) -> bool:
    sg = sign(c)
    return {
        "=0": sg == 0,
        ">=0": sg >= 0,
        ">0": sg > 0,
        "<=0": sg <= 0,
        "<0": sg < 0,
        "|.|=1": abs(c) == ONE,
    }[kind]


class ConstraintSystem:
    """An ordered, duplicate-free list of constraints."""

    def __init__(self, constraints: Iterable[Constraint] = (), variables=None):
        seen = set()
        out = []
        for c in constraints:
            key = c.canonical()
            if key not in seen:
                seen.add(key)
                out.append(c)
        self.constraints = tuple(out)
        vs = set(variables or ())
        for c in self.constraints:
            vs |= c.variables()
        self.variables = tuple(sorted(vs))

    def __iter__(self):
        return iter(self.constraints)

    def __len__(self):
        return len(self.constraints)

    def __bool__(self):
        return bool(self.constraints)

    def __or__(self, more):
        more = more.constraints if isinstance(more, ConstraintSystem) else tuple(more)
        return ConstraintSystem(self.constraints + more, self.variables)

    def canonical_set(self) -> frozenset:
        return frozenset(c.canonical() for c in self.constraints)

    def __eq__(self, other):
        return isinstance(other, ConstraintSystem) and self.canonical_set() == other.canonical_set()

    def __hash__(self):
        return hash(self.canonical_set())

    def substitute(self, assignment: Mapping) -> "ConstraintSystem":
        """Drops constraints that become true; raises if one becomes false."""
        out = []
        for c in self.constraints:
            r = c.substitute(assignment)
            if r is False:
                raise ValueError(f"assignment violates {c}")
            if r is not True:
                out.append(r)
        return ConstraintSystem(out)

    def __repr__(self):
        return "ConstraintSystem[" + "; ".join(map(str, self.constraints)) + "]"


# -- the solver --------------------------------------------------------------


def _split(constraints):
    """Branches of (eqs, ineqs, diseqs) with |.|=1 expanded."""
    eqs, ineqs, dis, absl = [], [], [], []
    for c in constraints:
        k, p = c.kind, c.poly
        if k == "=0":
            eqs.append(p)
        elif k == ">=0":
            ineqs.append((p, False))
        elif k == ">0":
            ineqs.append((p, True))
        elif k == "<=0":
            ineqs.append((-p, False))
        elif k == "<0":
            ineqs.append((-p, True))
        elif k == "!=0":
            dis.append(c.poly)
        else:
            absl.append(p)
    for signs in itertools.product((1, -1), repeat=len(absl)):
        extra = [p - s for p, s in zip(absl, signs)]
        yield eqs + extra, ineqs, dis


def _eliminate_equalities(eqs, ineqs, dis):
    """Solve the equalities one variable at a time.

    Returns (substitution, ineqs, dis) or None when inconsistent.  The
    substitution maps pivot variables to polys in the remaining ones.
    """
    subst = {}
    pending = list(eqs)
    while pending:
        p = pending.pop()
        if subst:
            p = p.substitute(subst)
        if p.is_constant():
            if p.const:
                return None
            continue
        v, c = p.terms[0]
        expr = (p - LinearPoly.var(v, c)) * (-c.inverse())
        new = {v: expr}
        subst = {u: e.substitute(new) for u, e in subst.items()}
        subst[v] = expr
    if subst:
        ineqs = [(p.substitute(subst), s) for p, s in ineqs]
        dis = [tuple(q.substitute(subst) for q in vec) for vec in dis]
    return subst, ineqs, dis


def _normalize_ineqs(ineqs):
    """Check constant rows; scale and deduplicate the rest.  None if a
    constant row fails."""
    best = {}
    for p, strict in ineqs:
        if p.is_constant():
            sg = sign(p.const)
            if sg < 0 or (sg == 0 and strict):
                return None
            continue
        q = _scale_to_unit(p)
        best[q] = best.get(q, False) or strict
    return list(best.items())


def _fm_feasible(ineqs) -> bool:
    rows = _normalize_ineqs(ineqs)
    while rows is not None:
        if not rows:
            return True
        variables = sorted({v for p, _ in rows for v in p.variables()})
        best_v, best_cost = None, None
        for v in variables:
            pos = sum(1 for p, _ in rows if sign(p.coef(v)) > 0)
            neg = sum(1 for p, _ in rows if sign(p.coef(v)) < 0)
            cost = pos * neg - pos - neg
            if best_cost is None or cost < best_cost:
                best_v, best_cost = v, cost
        v = best_v
        pos, neg, rest = [], [], []
        for p, s in rows:
            c = p.coef(v)
            sg = sign(c) if c else 0
            (pos if sg > 0 else neg if sg < 0 else rest).append((p, s, c))
        new = [(p, s) for p, s, _ in rest]
        for (p1, s1, c1), (p2, s2, c2) in itertools.product(pos, neg):
            combo = p1 * (-c2) + p2 * c1
            new.append((combo, s1 or s2))
        rows = _normalize_ineqs(new)
    return False


def _diseq_ok(ineqs, vec) -> bool:
    """Whether the region {ineqs} leaves the set {vec = 0}."""
    for q in vec:
        if q.is_constant():
            if q.const:
                return True
            continue
        if _fm_feasible(ineqs + [(q, True)]) or _fm_feasible(ineqs + [(-q, True)]):
            return True
    return False


def _branch_feasible(eqs, ineqs, dis) -> bool:
    red = _eliminate_equalities(eqs, ineqs, dis)
    if red is None:
        return False
    _, ineqs, dis = red
    if not _fm_feasible(ineqs):
        return False
    return all(_diseq_ok(ineqs, vec) for vec in dis)


def is_feasible(cs) -> bool:
    cons = cs.constraints if isinstance(cs, ConstraintSystem) else tuple(cs)
    return any(_branch_feasible(e, i, d) for e, i, d in _split(cons))


def _branch_points(eqs, ineqs, dis, variables):
    """None if empty, INFINITE if positive-dimensional, else [point].

    Implicit equalities (inequalities that cannot hold strictly) are
    promoted to equalities until none remain; the region is then a point
    exactly when no variable is left free.
    """
    eqs = list(eqs)
    while True:
        red = _eliminate_equalities(eqs, ineqs, dis)
        if red is None:
            return None
        subst, rest, dvec = red
        if not _fm_feasible(rest):
            return None
        implicit = next(
            (p for p, strict in rest
             if not strict and not p.is_constant() and not _fm_feasible(rest + [(p, True)])),
            None,
        )
        if implicit is None:
            break
        eqs.append(implicit)
    free = [v for v in variables if v not in subst]
    if free or any(not e.is_constant() for e in subst.values()):
        if all(_diseq_ok(rest, vec) for vec in dvec):
            return INFINITE
        return None
    point = {v: e.const for v, e in subst.items()}
    for vec in dis:
        if all(not q.substitute(point).const for q in vec):
            return None
    return [point]


def solutions_if_finite(cs, variables=None):
    """All solutions when there are finitely many (a list of assignments in
    a canonical order), ``INFINITE`` otherwise."""
    cons = cs.constraints if isinstance(cs, ConstraintSystem) else tuple(cs)
    vs = set(variables or ())
    if isinstance(cs, ConstraintSystem):
        vs |= set(cs.variables)
    for c in cons:
        vs |= c.variables()
    variables = sorted(vs)
    points = []
    for e, i, d in _split(cons):
        got = _branch_points(e, i, d, variables)
        if got is INFINITE:
            return INFINITE
        if got:
            for pt in got:
                if pt not in points:
                    points.append(pt)
    points.sort(key=lambda pt: [(float(pt[v]), pt[v].coords()) for v in variables])
    return points


def _negations(c: Constraint):
    k, p = c.kind, c.poly
    if k == "=0":
        return [Constraint(">0", p), Constraint("<0", p)]
    if k == ">=0":
        return [Constraint("<0", p)]
    if k == ">0":
        return [Constraint("<=0", p)]
    if k == "<=0":
        return [Constraint(">0", p)]
    if k == "<0":
        return [Constraint(">=0", p)]
    if k == "!=0":
        return [ConstraintSystem([Constraint("=0", q) for q in p])]
    raise ValueError("cannot negate an absolute-value constraint")


def entails(cs, extra: Constraint) -> bool:
    """True iff every solution of ``cs`` satisfies ``extra``."""
    cons = cs.constraints if isinstance(cs, ConstraintSystem) else tuple(cs)
    for neg in _negations(extra):
        more = neg.constraints if isinstance(neg, ConstraintSystem) else (neg,)
        if is_feasible(cons + tuple(more)):
            return False
    return True
