"""Twisted involutions, involution words, Hecke words and relation families."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .coxeter import GroupElement, TwistedSystem, alternating
from .numfield import INF

__all__ = [
    "TwistedInvolution",
    "WordRelation",
    "twisted_identity",
    "invol_demazure_step",
    "down_step",
    "involution_of_word",
    "is_involution_word",
    "enumerate_involution_words",
    "atoms",
    "twisted_involutions",
    "reduced_words",
    "m_theta",
    "classify_pair",
    "braid_relations",
    "half_braid_relations",
    "generalized_half_braid_relations",
    "hat_braid_relations",
    "exceptional_relations",
    "mixed_relations",
    "enumerate_hecke_words",
    "hecke_involution",
    "UnboundedEnumeration",
]


class UnboundedEnumeration(ValueError):
    pass


@dataclass(frozen=True)
class TwistedInvolution:
    element: GroupElement
    hat_length: int

    @property
    def system(self) -> TwistedSystem:
        return self.element.system

    @property
    def length(self) -> int:
        return self.element.length

    def descents(self) -> frozenset:
        return self.element.right_descents()

    def __repr__(self):
        return f"TwistedInvolution({self.element.reduced_word()}, hat={self.hat_length})"


def twisted_identity(system: TwistedSystem) -> TwistedInvolution:
    return TwistedInvolution(system.identity(), 0)


def _up(y: GroupElement, s) -> GroupElement:
    # s* o y o s for s not a right descent of y
    sysm = y.system
    if y.root(s) == sysm.simple_root(sysm.star(s)):
        return y.right(s)
    return y.right(s).left(sysm.star(s))


def invol_demazure_step(y: TwistedInvolution, s) -> TwistedInvolution:
    """The twisted involution s* o y o s.

    When s is already a right descent of y this is y itself.
    """
    if y.element.is_right_descent(s):
        return y
    return TwistedInvolution(_up(y.element, s), y.hat_length + 1)


def down_step(z: TwistedInvolution, s) -> TwistedInvolution:
    """The unique v < z with s* o v o s = z, for s a right descent of z."""
    w = z.element
    if not w.is_right_descent(s):
        raise ValueError(f"{s} is not a right descent")
    sysm = w.system
    if w.root(s) == tuple(-c for c in sysm.simple_root(sysm.star(s))):
        v = w.right(s)
    else:
        v = w.right(s).left(sysm.star(s))
    return TwistedInvolution(v, z.hat_length - 1)


def involution_of_word(system: TwistedSystem, word: Iterable, start=None):
    """The twisted involution of an involution word, or None when the word
    is not an involution word (some letter is a descent when appended)."""
    y = twisted_identity(system) if start is None else start
    for s in word:
        if y.element.is_right_descent(s):
            return None
        y = TwistedInvolution(_up(y.element, s), y.hat_length + 1)
    return y


def is_involution_word(system: TwistedSystem, word) -> bool:
    return involution_of_word(system, word) is not None


def _word_table(z: TwistedInvolution, memo: dict) -> frozenset:
    key = z.element
    got = memo.get(key)
    if got is not None:
        return got
    if z.hat_length == 0:
        out = frozenset([()])
    else:
        acc = set()
        for s in z.system.order:
            if z.element.is_right_descent(s):
                for w in _word_table(down_step(z, s), memo):
                    acc.add(w + (s,))
        out = frozenset(acc)
    memo[key] = out
    return out


def enumerate_involution_words(z: TwistedInvolution, memo: dict | None = None) -> frozenset:
    """All involution words of z, by downward recursion on right descents.

    The recursion always terminates since each step lowers the hat length.
    """
    return _word_table(z, {} if memo is None else memo)


def atoms(z: TwistedInvolution, memo: dict | None = None) -> frozenset:
    """The elements v with l(v) = hat_length(z) whose reduced words are the
    involution words of z."""
    memo = {} if memo is None else memo

    def rec(x: TwistedInvolution):
        got = memo.get(x.element)
        if got is not None:
            return got
        if x.hat_length == 0:
            out = frozenset([x.system.identity()])
        else:
            acc = set()
            for s in x.system.order:
                if x.element.is_right_descent(s):
                    for a in rec(down_step(x, s)):
                        acc.add(a.right(s))
            out = frozenset(acc)
        memo[x.element] = out
        return out

    return rec(z)


def twisted_involutions(system: TwistedSystem, max_hat: int | None = None) -> list[TwistedInvolution]:
    """All twisted involutions, by breadth-first up-steps, ordered by hat length."""
    if max_hat is None and not system.is_finite():
        raise UnboundedEnumeration("infinite group: supply a hat-length bound")
    start = twisted_identity(system)
    seen = {start.element}
    out = [start]
    layer = [start]
    k = 0
    while layer and (max_hat is None or k < max_hat):
        nxt = []
        for y in layer:
            for s in system.order:
                if not y.element.is_right_descent(s):
                    z = TwistedInvolution(_up(y.element, s), y.hat_length + 1)
                    if z.element not in seen:
                        seen.add(z.element)
                        nxt.append(z)
        out.extend(nxt)
        layer = nxt
        k += 1
    return out


def reduced_words(w: GroupElement, memo: dict | None = None) -> frozenset:
    memo = {} if memo is None else memo

    def rec(x):
        got = memo.get(x)
        if got is not None:
            return got
        if x.length == 0:
            out = frozenset([()])
        else:
            out = frozenset(
                u + (s,)
                for s in x.system.order
                if x.is_right_descent(s)
                for u in rec(x.right(s))
            )
        memo[x] = out
        return out

    return rec(w)


# -- the theta map ---------------------------------------------------------


def m_theta(s, t, theta, m) -> float | int:
    """The four-branch value for a map theta on {s, t} (a dict; values
    outside {s, t} or None mean theta leaves the pair) and m = m(s, t)."""
    if m == INF:
        return INF
    ts, tt = theta.get(s), theta.get(t)
    if m % 2 == 1 and {ts, tt} == {s, t}:
        return (m + 1) // 2
    if m % 2 == 0 and ts == s and tt == t:
        return m // 2 + 1
    if m % 2 == 0 and ts == t and tt == s:
        return m // 2
    return m


def theta_of(y: GroupElement, s):
    """(y s y^-1)* when it is a simple generator, else None."""
    sysm = y.system
    col = y.root(s)
    nz = [i for i, c in enumerate(col) if c]
    if len(nz) == 1 and abs(col[nz[0]]) == 1:
        return sysm.star(sysm.generators[nz[0]])
    return None


def classify_pair(y: TwistedInvolution, s, t):
    """Case tag (1), (2) or (3) for the pair {s, t} above y, with m_theta and
    the element z carrying both alternating extensions."""
    sysm = y.system
    m = sysm.m(s, t)
    if m == INF:
        raise ValueError("m(s,t) must be finite")
    if y.element.is_right_descent(s) or y.element.is_right_descent(t):
        raise ValueError("s and t must not be right descents of y")
    theta = {s: theta_of(y.element, s), t: theta_of(y.element, t)}
    mt = m_theta(s, t, theta, m)
    z1 = involution_of_word(sysm, alternating(s, t, mt)[::-1], y)
    z2 = involution_of_word(sysm, alternating(t, s, mt)[::-1], y)
    assert z1 is not None and z2 is not None and z1.element == z2.element
    gap = z1.length - y.length
    tag = {2 * m: 1, m: 2, 2 * m - 1: 3}[gap]
    return tag, z1, mt


# -- relations -------------------------------------------------------------

MODES = ("anywhere", "prefix", "exact")


@dataclass(frozen=True, order=True)
class WordRelation:
    """A symmetric word relation.

    ``prefix`` relations rewrite a leading factor, ``anywhere`` relations any
    factor, and ``exact`` relations the whole word.
    """

    left: tuple
    right: tuple
    mode: str = "prefix"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode}")
        a, b = tuple(self.left), tuple(self.right)
        if self.mode == "anywhere" and len(a) != len(b):
            raise ValueError("anywhere relations need equal lengths")
        if (len(b), b) < (len(a), a):
            a, b = b, a
        object.__setattr__(self, "left", a)
        object.__setattr__(self, "right", b)

    def to_json(self):
        return {"left": list(self.left), "right": list(self.right), "mode": self.mode}

    @classmethod
    def from_json(cls, d):
        return cls(tuple(d["left"]), tuple(d["right"]), d.get("mode", "prefix"))

    def relabel(self, phi) -> "WordRelation":
        return WordRelation(tuple(phi[x] for x in self.left), tuple(phi[x] for x in self.right), self.mode)

    def __str__(self):
        dash = {"prefix": ",---", "anywhere": "", "exact": ""}[self.mode]
        fl = "---," if self.mode == "anywhere" else ""
        fr = ",---" if self.mode == "anywhere" else dash
        a = ",".join(map(str, self.left))
        b = ",".join(map(str, self.right))
        return f"({fl}{a}{fr}) ~ ({fl}{b}{fr})"


def braid_relations(system: TwistedSystem) -> set[WordRelation]:
    out = set()
    for s, t in itertools.combinations(system.generators, 2):
        m = system.m(s, t)
        if m != INF:
            out.add(WordRelation(alternating(s, t, m), alternating(t, s, m), "anywhere"))
    return out


def half_braid_relations(system: TwistedSystem) -> set[WordRelation]:
    out = set()
    for s, t in itertools.combinations(system.generators, 2):
        m = system.m(s, t)
        if m == INF:
            continue
        mt = m_theta(s, t, {s: system.star(s), t: system.star(t)}, m)
        if mt < m:
            out.add(WordRelation(alternating(s, t, mt), alternating(t, s, mt), "prefix"))
    return out


def hat_braid_relations(system: TwistedSystem) -> set[WordRelation]:
    return braid_relations(system) | half_braid_relations(system)


def generalized_half_braid_relations(system: TwistedSystem, max_hat: int | None = None,
                                     p: int | None = None, q: int | None = None) -> set[WordRelation]:
    """The set A: for y in I_*, s, t outside Des_R(y) and r in R^(y), the
    prefix relation (r, ..,s,t,s) ~ (r, ..,t,s,t) of m_theta(s,t) letters.

    ``p`` and ``q`` select A_{p,q}: total prefix length p, m(s,t) = q."""
    out = set()
    memo = {}
    for y in twisted_involutions(system, max_hat):
        if p is not None and y.hat_length >= p:
            continue
        for s, t in itertools.combinations(system.generators, 2):
            m = system.m(s, t)
            if m == INF or (q is not None and m != q):
                continue
            if y.element.is_right_descent(s) or y.element.is_right_descent(t):
                continue
            theta = {s: theta_of(y.element, s), t: theta_of(y.element, t)}
            mt = m_theta(s, t, theta, m)
            if p is not None and y.hat_length + mt != p:
                continue
            a, b = alternating(s, t, mt)[::-1], alternating(t, s, mt)[::-1]
            for r in enumerate_involution_words(y, memo):
                out.add(WordRelation(r + a, r + b, "prefix"))
    return out


# Exceptional patterns: vertex names, edges (other pairs commute), the two
# sides of the relation, and which vertices are swapped by the twist.
_PATTERNS = {
    "2A3": (("x", "a", "b"), {("a", "x"): 3, ("x", "b"): 3},
            ("x", "a", "b", "x"), ("x", "a", "x", "b"), {"a": "b", "b": "a", "x": "x"}),
    "B3": (("x", "a", "b"), {("a", "x"): 3, ("x", "b"): 4},
           ("x", "a", "b", "x", "a", "b"), ("a", "b", "x", "a", "b", "x"), None),
    "H3": (("x", "a", "b"), {("a", "x"): 3, ("x", "b"): 5},
           ("x", "a", "b") * 3, ("a", "b", "x") * 3, None),
    "D4": (("x", "a", "b", "c"), {("x", "a"): 3, ("x", "b"): 3, ("x", "c"): 3},
           ("x", "a", "b", "c") * 2, ("a", "b", "c", "x") * 2, None),
}


def _pattern_copies(system: TwistedSystem, names, edges, twist):
    want = {}
    for u, v in itertools.permutations(names, 2):
        want[(u, v)] = edges.get((u, v), edges.get((v, u), 2))
    for image in itertools.permutations(system.generators, len(names)):
        phi = dict(zip(names, image))
        if any(system.m(phi[u], phi[v]) != m for (u, v), m in want.items()):
            continue
        if twist is None:
            if any(system.star(g) != g for g in image):
                continue
        elif any(system.star(phi[u]) != phi[twist[u]] for u in names):
            continue
        yield phi


def exceptional_relations(system: TwistedSystem, kinds=("2A3", "B3", "H3", "D4")) -> set[WordRelation]:
    """One prefix relation per labelled induced copy of each pattern."""
    out = set()
    for kind in kinds:
        names, edges, left, right, twist = _PATTERNS[kind]
        for phi in _pattern_copies(system, names, edges, twist):
            out.add(WordRelation(tuple(phi[c] for c in left), tuple(phi[c] for c in right), "prefix"))
    return out


# -- Hecke words -----------------------------------------------------------


def hecke_involution(system: TwistedSystem, word) -> TwistedInvolution:
    """(v^-1)* o v for the element v of a word, as a running Demazure chain."""
    y = twisted_identity(system)
    for s in word:
        y = invol_demazure_step(y, s)
    return y


def _elements_with_z(system, bound):
    """BFS over v (l(v) <= bound) carrying z(v) = (v^-1)* o v."""
    e = system.identity()
    table = {e: twisted_identity(system)}
    layer = [e]
    for _ in range(bound):
        nxt = []
        for v in layer:
            zv = table[v]
            for s in system.order:
                if not v.is_right_descent(s):
                    w = v.right(s)
                    if w not in table:
                        table[w] = invol_demazure_step(zv, s)
                        nxt.append(w)
        layer = nxt
        if not layer:
            break
    return table


def enumerate_hecke_words(z: TwistedInvolution, bound: int | None = None) -> frozenset:
    """Reduced words of every v with (v^-1)* o v = z and l(v) <= bound."""
    system = z.system
    if bound is None:
        if not system.is_finite():
            raise UnboundedEnumeration("infinite group: supply a length bound")
        bound = system.longest_element().length
    table = _elements_with_z(system, bound)
    memo = {}
    out = set()
    for v, zv in table.items():
        if zv.element == z.element:
            out |= reduced_words(v, memo)
    return frozenset(out)


def mixed_relations(system: TwistedSystem, bound: int) -> set[WordRelation]:
    """The Hecke relations: for m_*(s,t) <= n < m(s,t) and every reduced word
    r of v with l(sv) = l(tv) > l(v), l(v) <= bound,

        (t,s,t,..[n], r) ~ (s,t,s,..[n], r) ~ (s,t,s,t,..[n+1], r).

    These are whole-word relations; the inner braid relations are separate.
    """
    out = set()
    elems = system.elements(bound)
    memo = {}
    for s, t in itertools.permutations(system.generators, 2):
        m = system.m(s, t)
        if m == INF:
            continue
        mt = m_theta(s, t, {s: system.star(s), t: system.star(t)}, m)
        if mt >= m:
            continue
        for v in elems:
            if v.is_left_descent(s) or v.is_left_descent(t):
                continue
            for r in reduced_words(v, memo):
                for n in range(mt, m):
                    a = alternating(t, s, n) + r
                    b = alternating(s, t, n) + r
                    c = alternating(s, t, n + 1) + r
                    out.add(WordRelation(a, b, "exact"))
                    out.add(WordRelation(b, c, "exact"))
    return out
