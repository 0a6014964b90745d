"""Word rewriting: neighbours, equivalence classes, spanning and implication.

When a relation set consists of all braid relations plus prefix relations
with equal-length sides, classes of reduced words are unions of whole sets
R(v), so the search can run on group elements instead of words.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .coxeter import GroupElement, TwistedSystem
from .involutions import (
    WordRelation,
    atoms,
    braid_relations,
    involution_of_word,
    reduced_words,
)

__all__ = [
    "RelationIndex",
    "ClassOverflow",
    "NotCoInvolutionWords",
    "neighbors",
    "equivalence_class",
    "element_class",
    "spans",
    "spans_involution_words",
    "implies",
    "Implication",
    "canonical_words",
    "monotone_chain",
    "failing_involutions",
]

DEFAULT_LIMIT = 2_000_000


class ClassOverflow(RuntimeError):
    """The class outgrew the budget; ``partial`` holds what was found."""

    def __init__(self, partial, limit):
        super().__init__(f"equivalence class exceeded {limit} members")
        self.partial = partial
        self.limit = limit


class NotCoInvolutionWords(ValueError):
    pass


class _NotReduced(Exception):
    pass


class RelationIndex:
    """Relations bucketed by mode and side for fast matching."""

    def __init__(self, rels: Iterable[WordRelation]):
        self.relations = frozenset(rels)
        self.table = {"anywhere": {}, "prefix": {}, "exact": {}}
        for rel in self.relations:
            t = self.table[rel.mode]
            t.setdefault(rel.left, set()).add(rel.right)
            t.setdefault(rel.right, set()).add(rel.left)
        self.lengths = {
            mode: sorted({len(k) for k in t}) for mode, t in self.table.items()
        }

    def __iter__(self):
        return iter(self.relations)

    def __len__(self):
        return len(self.relations)

    def neighbors(self, w: tuple) -> set:
        out = set()
        n = len(w)
        any_t = self.table["anywhere"]
        for L in self.lengths["anywhere"]:
            for i in range(n - L + 1):
                for other in any_t.get(w[i:i + L], ()):
                    out.add(w[:i] + other + w[i + L:])
        pre_t = self.table["prefix"]
        for L in self.lengths["prefix"]:
            if L > n:
                break
            for other in pre_t.get(w[:L], ()):
                out.add(other + w[L:])
        for other in self.table["exact"].get(w, ()):
            out.add(other)
        out.discard(w)
        return out

    def element_ready(self, system: TwistedSystem) -> bool:
        """Whether classes of reduced words can be computed on elements."""
        if self.table["exact"]:
            return False
        braid = braid_relations(system)
        anywhere = {r for r in self.relations if r.mode == "anywhere"}
        if anywhere != braid:
            return False
        return all(len(a) == len(b) for a, b in self._prefix_pairs())

    def _prefix_pairs(self):
        for a, others in self.table["prefix"].items():
            for b in others:
                yield a, b

    def prefix_pairs(self):
        return sorted(self._prefix_pairs())


def _as_index(rels) -> RelationIndex:
    return rels if isinstance(rels, RelationIndex) else RelationIndex(rels)


def neighbors(w, rels) -> set:
    """All single-step rewrites of ``w``."""
    return _as_index(rels).neighbors(tuple(w))


def equivalence_class(w, rels, limit: int = DEFAULT_LIMIT) -> frozenset:
    """Breadth-first closure of ``w`` under the relations."""
    idx = _as_index(rels)
    w = tuple(w)
    seen = {w}
    queue = deque([w])
    while queue:
        u = queue.popleft()
        for v in idx.neighbors(u):
            if v not in seen:
                seen.add(v)
                if len(seen) > limit:
                    raise ClassOverflow(frozenset(seen), limit)
                queue.append(v)
    return frozenset(seen)


def _peel(v: GroupElement, prefix) -> GroupElement | None:
    # u with v = prefix * u and lengths adding, else None
    u = v
    for p in prefix:
        if not u.is_left_descent(p):
            return None
        u = u.left(p)
    return u


def _attach(u: GroupElement, prefix) -> GroupElement:
    for p in reversed(prefix):
        if u.is_left_descent(p):
            raise _NotReduced
        u = u.left(p)
    return u


def element_class(v: GroupElement, rels, limit: int = DEFAULT_LIMIT, target=None) -> frozenset:
    """The elements whose reduced words form the class of any reduced word
    of ``v``; requires an element-ready relation set.  Stops early once
    ``target`` is reached."""
    idx = _as_index(rels)
    pairs = idx.prefix_pairs()
    seen = {v}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for p, q in pairs:
            if len(p) > u.length:
                continue
            rest = _peel(u, p)
            if rest is None:
                continue
            w = _attach(rest, q)
            if w not in seen:
                seen.add(w)
                if target is not None and w == target:
                    return frozenset(seen)
                if len(seen) > limit:
                    raise ClassOverflow(frozenset(seen), limit)
                queue.append(w)
    return frozenset(seen)


def canonical_words(words, system: TwistedSystem | None = None) -> list:
    if system is None:
        return sorted(words, key=lambda w: (len(w), w))
    rank = system.rank
    return sorted(words, key=lambda w: (len(w), [rank[x] for x in w]))


def spans(words, rels, limit: int = DEFAULT_LIMIT) -> bool:
    """True when ``words`` is one class that every rewrite stays inside."""
    words = frozenset(tuple(w) for w in words)
    if not words:
        raise ValueError("spans needs a nonempty word set")
    start = min(words, key=lambda w: (len(w), w))
    try:
        cls = equivalence_class(start, rels, limit)
    except ClassOverflow:
        return False
    return cls == words


def spans_involution_words(z, rels, limit: int = DEFAULT_LIMIT, memo=None) -> bool:
    """``spans`` applied to the involution words of z, on atoms when possible."""
    idx = _as_index(rels)
    system = z.system
    if idx.element_ready(system):
        ats = atoms(z, memo)
        start = min(ats, key=lambda a: a.reduced_word())
        try:
            cls = element_class(start, idx, limit)
        except (_NotReduced, ClassOverflow):
            return False
        return cls == ats
    from .involutions import enumerate_involution_words

    return spans(enumerate_involution_words(z), idx, limit)


def _element(system, word) -> GroupElement:
    g = system.identity()
    for s in word:
        if g.is_right_descent(s):
            raise _NotReduced
        g = g.right(s)
    return g


def connected(system: TwistedSystem, a, b, rels, limit: int = DEFAULT_LIMIT) -> bool:
    """Whether b lies in the class of a."""
    idx = _as_index(rels)
    a, b = tuple(a), tuple(b)
    if a == b:
        return True
    if idx.element_ready(system):
        try:
            va, vb = _element(system, a), _element(system, b)
            if va == vb:
                return True
            return vb in element_class(va, idx, limit, target=vb)
        except _NotReduced:
            pass
    seen = {a}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        for v in idx.neighbors(u):
            if v == b:
                return True
            if v not in seen:
                seen.add(v)
                if len(seen) > limit:
                    raise ClassOverflow(frozenset(seen), limit)
                queue.append(v)
    return False


@dataclass
class Implication:
    holds: bool
    depth: int
    checked: int = 0
    witness: tuple | None = field(default=None)

    def __bool__(self):
        return self.holds


def implies(base, target: WordRelation, system: TwistedSystem, depth: int = 2,
            limit: int = DEFAULT_LIMIT) -> Implication:
    """Bounded check of ``base => target``.

    The two sides of ``target`` must be involution words of one z.  For every
    extension e by up-steps of length at most ``depth`` the words p+e and
    q+e are tested for connection under ``base``.
    """
    idx = _as_index(base)
    p, q = target.left, target.right
    zp = involution_of_word(system, p)
    zq = involution_of_word(system, q)
    if zp is None or zq is None or zp.element != zq.element:
        raise NotCoInvolutionWords(f"{p} and {q} are not involution words of one element")
    checked = 0
    stack = [((), zp)]
    while stack:
        ext, z = stack.pop()
        checked += 1
        if not connected(system, p + ext, q + ext, idx, limit):
            return Implication(False, depth, checked, ext)
        if len(ext) < depth:
            for s in reversed(system.order):
                if not z.element.is_right_descent(s):
                    stack.append((ext + (s,), involution_of_word(system, (s,), z)))
    return Implication(True, depth, checked)


def monotone_chain(w, rels, accept, limit: int = DEFAULT_LIMIT):
    """A shortest rewrite chain from ``w`` to a word satisfying ``accept``
    along which lengths never increase, or None."""
    idx = _as_index(rels)
    w = tuple(w)
    parent = {w: None}
    queue = deque([w])
    while queue:
        u = queue.popleft()
        if accept(u):
            chain = []
            while u is not None:
                chain.append(u)
                u = parent[u]
            return chain[::-1]
        for v in idx.neighbors(u):
            if len(v) <= len(u) and v not in parent:
                parent[v] = u
                if len(parent) > limit:
                    raise ClassOverflow(frozenset(parent), limit)
                queue.append(v)
    return None


def failing_involutions(system: TwistedSystem, rels, max_hat: int | None = None, memo=None) -> list:
    """Twisted involutions (up to ``max_hat``) whose involution words the
    relations do not span."""
    from .involutions import twisted_involutions

    idx = _as_index(rels)
    memo = {} if memo is None else memo
    return [z for z in twisted_involutions(system, max_hat) if not spans_involution_words(z, idx, memo=memo)]
