"""Braid systems: a word pair, a symbolic linear map and constraints.

The map sigma sends each simple root of its domain J to a column vector in
the simple-root basis of V.  Entries are FieldElements, or LinearPolys in the
variables x_s (keyed by generator label) once ``down`` has introduced them.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Iterable, Mapping

from .coxeter import TwistedSystem, _det, alternating
from .feasibility import (
    INFINITE,
    Constraint,
    ConstraintSystem,
    is_feasible,
    solutions_if_finite,
)
from .involutions import (
    WordRelation,
    braid_relations,
    involution_of_word,
    m_theta,
)
from .numfield import INF, ONE, ZERO, FieldElement, LinearPoly, evaluate, sign
from .rewriting import RelationIndex, _NotReduced, element_class

__all__ = [
    "BraidSystem",
    "root_system_pair",
    "down",
    "asc",
    "des",
    "hdes",
    "substitute",
    "is_valid",
    "solutions",
    "is_redundant",
    "is_trivial",
    "descent_set",
    "sigma_relations",
    "sigma_class_endings",
    "NotConstant",
]


class NotConstant(ValueError):
    pass


def _norm(e):
    if isinstance(e, LinearPoly) and e.is_constant():
        return e.const
    return e


def _is_const_vec(col) -> bool:
    return all(isinstance(e, FieldElement) for e in col)


def _root_sign(col) -> int:
    """+1 / -1 for a nonzero constant vector with one sign, 0 otherwise."""
    pos = neg = False
    for e in col:
        sg = sign(e)
        if sg > 0:
            pos = True
        elif sg < 0:
            neg = True
    if pos and not neg:
        return 1
    if neg and not pos:
        return -1
    return 0


def _fmt_vec(system, col) -> str:
    parts = []
    for g, e in zip(system.generators, col):
        if isinstance(e, FieldElement) and not e:
            continue
        if isinstance(e, FieldElement):
            c = repr(e)
            parts.append(f"{'' if e == ONE else '-' if e == -ONE else c + '*'}a{g}")
        else:
            parts.append(f"({e!r})*a{g}")
    return " + ".join(parts) if parts else "0"


class BraidSystem:
    """``({left, right}, sigma, C)`` over a twisted Coxeter system."""

    __slots__ = ("system", "left", "right", "sigma", "constraints", "_key")

    def __init__(self, system: TwistedSystem, left, right, sigma: Mapping, constraints=()):
        left, right = tuple(left), tuple(right)
        if len(left) != len(right):
            raise ValueError("braid system words must have the same length")
        self.system = system
        self.left = left
        self.right = right
        rank = system.rank
        self.sigma = {
            s: tuple(_norm(e) for e in sigma[s]) for s in sorted(sigma, key=rank.__getitem__)
        }
        cs = constraints if isinstance(constraints, ConstraintSystem) else ConstraintSystem(constraints)
        self.constraints = cs
        self._key = None

    # -- basic data -------------------------------------------------------

    @property
    def domain(self) -> tuple:
        return tuple(self.sigma)

    def boundary(self) -> list:
        return self.system.sort(self.system.boundary(self.sigma))

    def column(self, s) -> tuple:
        return self.sigma[s]

    def is_constant(self) -> bool:
        return not self.constraints and all(_is_const_vec(c) for c in self.sigma.values())

    def variables(self) -> tuple:
        vs = set(self.constraints.variables)
        for col in self.sigma.values():
            for e in col:
                if isinstance(e, LinearPoly):
                    vs.update(e.variables())
        return tuple(sorted(vs))

    def key(self):
        """Identity of a constant system: words and map."""
        if self._key is None:
            self._key = (self.left, self.right, tuple(self.sigma.items()), self.constraints.canonical_set())
        return self._key

    def __eq__(self, other):
        return isinstance(other, BraidSystem) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def relation(self) -> WordRelation:
        return WordRelation(self.left, self.right, "prefix")

    def __str__(self):
        lines = [f"s | {self.left}", f"t | {self.right}"]
        for s, col in self.sigma.items():
            lines.append(f"  a{s} -> {_fmt_vec(self.system, col)}")
        for c in self.constraints:
            lines.append(f"  {c}")
        return "\n".join(lines)

    __repr__ = __str__

    def to_json(self) -> dict:
        return {
            "s": list(self.left),
            "t": list(self.right),
            "domain": list(self.domain),
            "sigma": {
                str(s): [e.to_json() if isinstance(e, FieldElement) else {"poly": e.to_json()} for e in col]
                for s, col in self.sigma.items()
            },
            "sigma_text": {str(s): _fmt_vec(self.system, col) for s, col in self.sigma.items()},
            "constraints": [str(c) for c in self.constraints],
        }


def root_system_pair(system: TwistedSystem, s, t, theta: str) -> BraidSystem:
    """The root B^theta_{s,t}; ``theta`` is ``"id"`` or ``"swap"``."""
    m = system.m(s, t)
    th = {s: s, t: t} if theta == "id" else {s: t, t: s}
    mt = m_theta(s, t, th, m)
    left = alternating(s, t, mt)[::-1]
    right = alternating(t, s, mt)[::-1]
    sigma = {
        s: system.simple_root(system.star(th[s])),
        t: system.simple_root(system.star(th[t])),
    }
    return BraidSystem(system, left, right, sigma)


# -- the five operations ----------------------------------------------------


def down(b: BraidSystem, r) -> BraidSystem:
    """B down r: a fresh column -sum x_s a_s for r, with the constraints
    x_s >= 0, the form equations against J, and |det| = 1 when {r} u J = S."""
    system = b.system
    if not b.is_constant():
        raise NotConstant("down needs a constant braid system")
    J = b.domain
    if r not in system.boundary(J):
        raise ValueError(f"{r} is not in the boundary of {J}")
    col = tuple(LinearPoly.var(g, -ONE) for g in system.generators)
    cons = [Constraint.ge(LinearPoly.var(g)) for g in system.generators]
    for s in J:
        lhs = system.form_of(b.sigma[s], col)
        cons.append(Constraint.eq(lhs, system.bilinear(r, s)))
    sigma = dict(b.sigma)
    sigma[r] = col
    if set(J) | {r} == set(system.generators):
        cons.append(Constraint.abs_one(_det_linear(system, sigma, r)))
    return BraidSystem(system, b.left, b.right, sigma, cons)


def _det_linear(system, sigma, r):
    """det of the square map, linear in the variables of column r."""
    gens = system.generators
    j = system.index[r]
    mat_cols = [sigma[g] for g in gens]
    total = LinearPoly()
    n = len(gens)
    for i in range(n):
        e = mat_cols[j][i]
        if isinstance(e, FieldElement) and not e:
            continue
        minor = [
            [mat_cols[c][row] for c in range(n) if c != j]
            for row in range(n) if row != i
        ]
        cof = _det(minor) if minor else ONE
        if (i + j) % 2:
            cof = -cof
        total = total + (e * cof if isinstance(e, LinearPoly) else LinearPoly(e * cof))
    return total


def _reflect_map(system, r, sigma):
    return {s: system.reflect(r, col) for s, col in sigma.items()}


def _sign_constraints(col, kind):
    out = []
    for e in col:
        if isinstance(e, FieldElement):
            ok = sign(e) >= 0 if kind == ">=0" else sign(e) <= 0
            if ok:
                continue
        out.append(Constraint(kind, e))
    return out


def asc(r, b: BraidSystem) -> BraidSystem:
    cons = list(b.constraints) + _sign_constraints(b.sigma[r], ">=0")
    return BraidSystem(b.system, b.left, b.right, b.sigma, cons)


def des(r, b: BraidSystem) -> BraidSystem:
    system = b.system
    target = tuple(-c for c in system.simple_root(system.star(r)))
    cons = list(b.constraints)
    for e, want in zip(b.sigma[r], target):
        if isinstance(e, FieldElement) and e == want:
            continue
        cons.append(Constraint.eq(e, want))
    sigma = _reflect_map(system, system.star(r), b.sigma)
    return BraidSystem(system, (r,) + b.left, (r,) + b.right, sigma, cons)


def hdes(r, b: BraidSystem) -> BraidSystem:
    system = b.system
    col_r = b.sigma[r]
    target = tuple(-c for c in system.simple_root(system.star(r)))
    cons = list(b.constraints)
    if not (_is_const_vec(col_r) and col_r != target):
        cons.append(Constraint.vector_ne(col_r, target))
    cons += _sign_constraints(col_r, "<=0")
    inner = {}
    for s, col in b.sigma.items():
        c = system.bilinear(r, s) * -2
        if s == r:
            inner[s] = tuple(-e for e in col)
        elif c:
            inner[s] = tuple(a + e * c for a, e in zip(col, col_r))
        else:
            inner[s] = col
    sigma = _reflect_map(system, system.star(r), inner)
    return BraidSystem(system, (r,) + b.left, (r,) + b.right, sigma, cons)


def substitute(b: BraidSystem, psi: Mapping) -> BraidSystem:
    sigma = {
        s: tuple(e if isinstance(e, FieldElement) else e.substitute(psi) for e in col)
        for s, col in b.sigma.items()
    }
    cons = b.constraints.substitute(psi)
    return BraidSystem(b.system, b.left, b.right, sigma, cons)


# -- predicates ---------------------------------------------------------------


def descent_set(b: BraidSystem) -> list:
    return [s for s, col in b.sigma.items() if _is_const_vec(col) and _root_sign(col) < 0]


def _sign_branches(b: BraidSystem):
    """Constraint lists, one per feasible sign pattern of the variable
    columns; None when some constant column is not root-like."""
    options = []
    base = list(b.constraints)
    for s, col in b.sigma.items():
        if _is_const_vec(col):
            if _root_sign(col) == 0:
                return None
            continue
        total = LinearPoly()
        for e in col:
            total = total + e
        pos = [Constraint.ge(e) for e in col if not isinstance(e, FieldElement)] + [Constraint.gt(total)]
        neg = [Constraint.le(e) for e in col if not isinstance(e, FieldElement)] + [Constraint.lt(total)]
        pos += [Constraint.ge(e) for e in col if isinstance(e, FieldElement) and sign(e) < 0]
        neg += [Constraint.le(e) for e in col if isinstance(e, FieldElement) and sign(e) > 0]
        live = [opt for opt in (pos, neg) if is_feasible(base + opt)]
        if not live:
            return []
        options.append(live)
    return [sum(combo, []) for combo in itertools.product(*options)]


def has_solution(b: BraidSystem) -> bool:
    branches = _sign_branches(b)
    if not branches:
        return False
    base = list(b.constraints)
    return any(is_feasible(base + br) for br in branches)


def solutions(b: BraidSystem):
    """Root-preserving solutions: a sorted list, or INFINITE."""
    branches = _sign_branches(b)
    if not branches:
        return []
    base = list(b.constraints)
    variables = b.variables()
    points = []
    for br in branches:
        got = solutions_if_finite(base + br, variables)
        if got == INFINITE:
            return INFINITE
        for pt in got:
            if pt not in points:
                points.append(pt)
    points.sort(key=lambda pt: [(float(pt[v]), pt[v].coords()) for v in variables])
    return points


def is_valid(b: BraidSystem) -> bool:
    system = b.system
    if not (system.is_reduced(b.left) and system.is_reduced(b.right)):
        return False
    return has_solution(b)


def sigma_relations(b: BraidSystem) -> set[WordRelation]:
    system = b.system
    simple = {system.simple_root(g): g for g in system.generators}
    out = set()
    J = b.domain
    for r, s in itertools.combinations(J, 2):
        u, v = simple.get(b.sigma[r]), simple.get(b.sigma[s])
        if u is None or v is None:
            continue
        th = {r: system.star(u), s: system.star(v)}
        if {th[r], th[s]} != {r, s}:
            continue
        m = system.m(r, s)
        if m == INF:
            continue
        mt = m_theta(r, s, th, m)
        if mt < m:
            for t in J:
                out.add(WordRelation(alternating(r, s, mt) + (t,), alternating(s, r, mt) + (t,), "prefix"))
    return out


def sigma_class_endings(b: BraidSystem, word) -> set:
    """Last letters over the sigma-equivalence class of ``word``."""
    system = b.system
    idx = RelationIndex(braid_relations(system) | sigma_relations(b))
    word = tuple(word)
    if not word:
        return set()
    if system.is_reduced(word):
        try:
            v = system.element(word)
            cls = element_class(v, idx)
            out = set()
            for u in cls:
                out |= u.right_descents()
            return out
        except _NotReduced:
            pass
    seen = {word}
    queue = deque([word])
    while queue:
        u = queue.popleft()
        for w in idx.neighbors(u):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return {w[-1] for w in seen}


def is_redundant(b: BraidSystem) -> bool:
    system = b.system
    if not b.left:
        return False
    s, t = b.left[-1], b.right[-1]
    q = system.m(s, t) if s != t else 1
    ends_s = sigma_class_endings(b, b.left)
    ends_t = sigma_class_endings(b, b.right)
    if ends_s & ends_t:
        return True
    for a in ends_s:
        for c in ends_t:
            m = system.m(a, c)
            if q < m < INF:
                return True
    return False


def is_trivial(b: BraidSystem) -> bool:
    system = b.system
    for s, col in b.sigma.items():
        if col != system.simple_root(s):
            return False
    za = involution_of_word(system, b.left)
    zb = involution_of_word(system, b.right)
    return za is not None and zb is not None and za.element == zb.element
