"""Tree expansion, descent elimination and forests of braid systems."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .braidsys import (
    BraidSystem,
    asc,
    des,
    descent_set,
    down,
    hdes,
    is_redundant,
    is_trivial,
    is_valid,
    root_system_pair,
    solutions,
    substitute,
)
from .coxeter import TwistedSystem
from .feasibility import INFINITE, Constraint, is_feasible
from .involutions import WordRelation, hat_braid_relations
from .numfield import ONE, ZERO, FieldElement, LinearPoly, sign
from .rewriting import implies

__all__ = [
    "ForestFailure",
    "NonFiniteTree",
    "BudgetExceeded",
    "SystemTree",
    "PeriodicWitness",
    "Forest",
    "expand_tree",
    "eliminate_descents",
    "detect_periodicity",
    "build_forest",
    "build_forests",
    "extract_relations",
    "minimize",
    "relation_key",
]

DEFAULT_BUDGET = 200
TREE_LIMIT = 20_000


class ForestFailure(RuntimeError):
    """Algorithm 3 could not complete; ``system`` is the offending vertex."""

    def __init__(self, message, system=None):
        super().__init__(message)
        self.system = system


class NonFiniteTree(ForestFailure):
    pass


class BudgetExceeded(ForestFailure):
    pass


# -- Algorithm 1 ---------------------------------------------------------------


@dataclass
class SystemTree:
    system: BraidSystem
    op: str = "root"
    children: list = field(default_factory=list)
    tag: str | None = None

    def leaves(self):
        if not self.children:
            yield self
        for c in self.children:
            yield from c.leaves()

    def constant_leaves(self) -> list:
        return [v.system for v in self.leaves() if v.tag == "constant"]

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)


def _entry_descent(b: BraidSystem, s):
    """'unconditional', 'conditional' or None for the column of s."""
    base = list(b.constraints)
    found = None
    for e in b.sigma[s]:
        if isinstance(e, FieldElement):
            if sign(e) < 0:
                return "unconditional"
            continue
        if not is_feasible(base + [Constraint.ge(e)]):
            return "unconditional"
        if found is None and not is_feasible(base + [Constraint.gt(e)]):
            # entries forced to vanish say nothing about the sign of the column
            if is_feasible(base + [Constraint.lt(e)]):
                found = "conditional"
    return found


def expand_tree(b0: BraidSystem, r, limit: int = TREE_LIMIT) -> SystemTree:
    """The tree T(b0 down r)."""
    root = SystemTree(down(b0, r), "down")
    stack = [root]
    count = 1
    while stack:
        node = stack.pop()
        b = node.system
        if b.is_constant():
            node.tag = "constant"
            continue
        if not is_valid(b):
            node.tag = "invalid"
            continue
        if is_redundant(b):
            node.tag = "redundant"
            continue
        sols = solutions(b)
        if sols != INFINITE:
            node.tag = "solved"
            node.children = [SystemTree(substitute(b, psi), "subst") for psi in sols]
        else:
            kinds = {s: _entry_descent(b, s) for s in b.domain}
            unc = [s for s in b.domain if kinds[s] == "unconditional"]
            cond = [s for s in b.domain if kinds[s] == "conditional"]
            if unc:
                s = unc[0]
                node.children = [SystemTree(des(s, b), "des"), SystemTree(hdes(s, b), "hdes")]
            elif cond:
                s = cond[0]
                node.children = [
                    SystemTree(asc(s, b), "asc"),
                    SystemTree(des(s, b), "des"),
                    SystemTree(hdes(s, b), "hdes"),
                ]
            else:
                node.tag = "exhausted"
                raise NonFiniteTree(f"no descent detectable below {b0.left}/{b0.right} down {r}", b)
            node.tag = "split"
        count += len(node.children)
        if count > limit:
            raise NonFiniteTree(f"tree for down {r} exceeded {limit} vertices", b)
        stack.extend(reversed(node.children))
    return root


# -- descent periodicity ---------------------------------------------------------


class NPoly:
    """A polynomial in n with field coefficients, lowest degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, NPoly):
            return self.c == other.c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        if not isinstance(other, NPoly):
            other = NPoly([other])
        a, b = self.c, other.c
        n = max(len(a), len(b))
        return NPoly([(a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return NPoly([-x for x in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        if isinstance(k, NPoly):
            raise TypeError("NPoly products are not needed")
        return NPoly([x * k for x in self.c])

    __rmul__ = __mul__

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __call__(self, n):
        acc = ZERO
        for x in reversed(self.c):
            acc = acc * n + x
        return acc

    def shift(self) -> "NPoly":
        """n -> n + 1."""
        out = [ZERO] * len(self.c)
        for k, a in enumerate(self.c):
            binom = 1
            for i in range(k + 1):
                out[i] = out[i] + a * binom
                binom = binom * (k - i) // (i + 1)
        return NPoly(out)

    def root_bound(self) -> int:
        """Every real root lies in [-N, N]."""
        if len(self.c) <= 1:
            return 0
        lead = abs(float(self.c[-1]))
        return math.ceil(1 + max(abs(float(x)) / lead for x in self.c[:-1])) + 1

    def __repr__(self):
        return " + ".join(f"{x!r}*n^{k}" for k, x in enumerate(self.c)) or "0"


def _interpolate(samples) -> NPoly:
    """The polynomial of degree < len(samples) through (k, samples[k])."""
    q = len(samples)
    diffs = [list(samples)]
    for _ in range(1, q):
        prev = diffs[-1]
        diffs.append([prev[i + 1] - prev[i] for i in range(len(prev) - 1)])
    out = NPoly()
    basis = NPoly([ONE])  # binomial(n, k) in monomial form
    for k in range(q):
        out = out + basis * diffs[k][0]
        # basis <- basis * (n - k) / (k + 1)
        shifted = [ZERO] + list(basis.c)
        scaled = [x * (-k) for x in basis.c] + [ZERO]
        basis = NPoly([(a + b) / (k + 1) for a, b in zip(shifted, scaled)])
    return out


def _common_natural_root(polys) -> bool:
    """Whether all polys vanish at some n in N."""
    polys = [p for p in polys if p]
    if not polys:
        return True
    pivot = min(polys, key=lambda p: p.degree)
    if pivot.degree == 0:
        return False
    for n in range(pivot.root_bound() + 1):
        if all(not p(n) for p in polys):
            return True
    return False


def _nonpositive_everywhere(p: NPoly) -> bool:
    if not p:
        return True
    if sign(p.c[-1]) > 0:
        return False
    return all(sign(p(n)) <= 0 for n in range(p.root_bound() + 1))


@dataclass
class PeriodicWitness:
    p: int
    q: int
    cycle: tuple
    interpolants: list  # per j: {s: tuple of NPoly}
    index: int


def _apply_bullet(system, lam, r, hat):
    """lam . r with lam a map of NPoly columns."""
    rs = system.star(r)
    if not hat:
        return {s: system.reflect(rs, col) for s, col in lam.items()}
    col_r = lam[r]
    out = {}
    for s, col in lam.items():
        c = system.bilinear(r, s) * -2
        if s == r:
            inner = tuple(-e for e in col)
        elif c:
            inner = tuple(a + e * c for a, e in zip(col, col_r))
        else:
            inner = col
        out[s] = system.reflect(rs, inner)
    return out


def _try_witness(history, i, p, q, cycle):
    b = history[i]
    system = b.system
    domain = b.domain
    lams = []
    for j in range(1, p + 1):
        samples = [history[i - p * q + j + n * p] for n in range(q)]
        if any(h.domain != domain for h in samples):
            return None
        lam = {}
        for s in domain:
            lam[s] = tuple(
                _interpolate([h.sigma[s][k] for h in samples]) for k in range(system.n)
            )
        lams.append(lam)
    # step ii
    hats = []
    for j in range(1, p + 1):
        beta = cycle[j % p]  # r_{j+1}, with r_{p+1} = r_1
        if beta not in domain:
            return None
        vec = lams[j - 1][beta]
        if not all(_nonpositive_everywhere(e) for e in vec):
            return None
        if _common_natural_root(vec):
            return None
        star = system.simple_root(system.star(beta))
        gap = [e + x for e, x in zip(vec, star)]
        if not any(gap):
            hats.append(False)
        elif _common_natural_root(gap):
            return None
        else:
            hats.append(True)
    # step iii
    shifted = lambda lam: {s: tuple(e.shift() for e in col) for s, col in lam.items()}
    if shifted(lams[0]) != _apply_bullet(system, lams[p - 1], cycle[0], hats[p - 1]):
        return None
    for j in range(2, p + 1):
        if shifted(lams[j - 1]) != _apply_bullet(system, shifted(lams[j - 2]), cycle[j - 1], hats[j - 2]):
            return None
    return PeriodicWitness(p, q, cycle, lams, i)


def detect_periodicity(history, i: int | None = None, max_q: int = 8, max_p: int | None = None):
    """A PeriodicWitness for history[i], or None.

    Candidates (p, q) are tried in lexicographic order subject to pq <= i
    and q <= max_q; ``max_p`` optionally caps the period length.
    """
    if i is None:
        i = len(history) - 1
    b = history[i]
    word_s, word_t = b.left, b.right
    top = i // 2 if max_p is None else min(max_p, i // 2)
    for p in range(1, top + 1):
        block = word_s[:p]
        if len(block) < p or word_t[:p] != block:
            continue
        cycle = tuple(reversed(block))  # (r_1, ..., r_p)
        for q in range(2, max_q + 1):
            if p * q > i:
                break
            span = block * q
            if word_s[:p * q] != span or word_t[:p * q] != span:
                break
            w = _try_witness(history, i, p, q, cycle)
            if w is not None:
                return w
    return None


# -- Algorithm 2 ---------------------------------------------------------------


@dataclass
class Elimination:
    output: BraidSystem | None
    reason: str
    history: list
    witness: PeriodicWitness | None = None


def _strip(b: BraidSystem) -> BraidSystem:
    return BraidSystem(b.system, b.left, b.right, b.sigma)


def eliminate_descents(b: BraidSystem, budget: int = DEFAULT_BUDGET, trace: bool = False):
    """Algorithm 2: the output system, or None.  With ``trace`` an
    Elimination record is returned instead."""
    if not b.is_constant():
        raise ValueError("eliminate_descents needs a constant braid system")
    system = b.system
    history = [b]
    i = 0
    while True:
        cur = history[i]
        result = None
        if not is_valid(cur):
            result = Elimination(None, "invalid", history)
        elif is_redundant(cur):
            result = Elimination(None, "redundant", history)
        else:
            w = detect_periodicity(history, i)
            if w is not None:
                result = Elimination(None, "descent-periodic", history, w)
            else:
                ds = descent_set(cur)
                if not ds:
                    result = Elimination(cur, "output", history)
        if result is not None:
            return result if trace else result.output
        if i >= budget:
            raise BudgetExceeded(f"descent elimination ran {budget} steps without settling", cur)
        r = ds[0]
        target = tuple(-c for c in system.simple_root(system.star(r)))
        step = des if cur.sigma[r] == target else hdes
        history.append(_strip(step(r, cur)))
        i += 1


# -- Algorithm 3 ---------------------------------------------------------------


@dataclass
class Vertex:
    id: int
    system: BraidSystem
    parent: int | None
    via: object = None
    children: list = field(default_factory=list)
    trivial: bool = False
    leaf_reason: str | None = None


@dataclass
class Forest:
    system: TwistedSystem
    s: object
    t: object
    vertices: list
    roots: list

    def trivial_vertices(self):
        return [v for v in self.vertices if v.trivial]

    def to_json(self) -> dict:
        return {
            "system": self.system.to_json(),
            "pair": [self.s, self.t],
            "roots": list(self.roots),
            "vertices": [
                {
                    "id": v.id,
                    "parent": v.parent,
                    "via": v.via,
                    "children": v.children,
                    "trivial": v.trivial,
                    "leaf": v.leaf_reason,
                    "braid_system": v.system.to_json(),
                }
                for v in self.vertices
            ],
            "relations": [r.to_json() for r in sorted(extract_relations(self), key=relation_key(self.system))],
        }


def _children_of(b: BraidSystem, budget: int):
    system = b.system
    found = []
    for r in b.boundary():
        tree = expand_tree(b, r)
        for leaf in tree.constant_leaves():
            out = eliminate_descents(leaf, budget)
            if out is not None:
                found.append((r, out))
    rank = system.rank
    found.sort(key=lambda x: (rank[x[0]], [rank[a] for a in x[1].left], [rank[a] for a in x[1].right]))
    seen = set()
    unique = []
    for r, out in found:
        if out not in seen:
            seen.add(out)
            unique.append((r, out))
    return unique


def build_forest(system: TwistedSystem, s, t, budget: int = DEFAULT_BUDGET) -> Forest:
    """Algorithm 3 for the pair (s, t)."""
    m = system.m(s, t)
    if s == t or not 2 < m < math.inf:
        raise ValueError(f"need 2 < m(s,t) < inf, got m({s},{t}) = {m}")
    vertices = []
    roots = []
    for theta in ("id", "swap"):
        v = Vertex(len(vertices), root_system_pair(system, s, t, theta), None, theta)
        vertices.append(v)
        roots.append(v.id)
    queue = list(roots)
    while queue:
        vid = queue.pop(0)
        v = vertices[vid]
        v.trivial = is_trivial(v.system)
        if not v.system.boundary():
            v.leaf_reason = "full-boundary"
            continue
        kids = _children_of(v.system, budget)
        if not kids:
            v.leaf_reason = "no-output"
        for r, out in kids:
            c = Vertex(len(vertices), out, vid, r)
            vertices.append(c)
            v.children.append(c.id)
            queue.append(c.id)
    return Forest(system, s, t, vertices, roots)


def _forest_job(args):
    system, s, t, budget = args
    return build_forest(system, s, t, budget)


def build_forests(system: TwistedSystem, pairs, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> list:
    """Forests for several pairs, in the given order."""
    work = [(system, s, t, budget) for s, t in pairs]
    if jobs <= 1 or len(work) <= 1:
        return [_forest_job(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_forest_job, work))


def extract_relations(forest: Forest) -> set[WordRelation]:
    return {v.system.relation() for v in forest.trivial_vertices()}


def relation_key(system: TwistedSystem):
    rank = system.rank
    return lambda r: (len(r.left), [rank[a] for a in r.left], [rank[a] for a in r.right])


def minimize(rels, system: TwistedSystem, base=None, depth: int = 2) -> list:
    """Greedy minimal subset M with base u M => rels, disjoint from base.

    The sweep tries to drop the canonically largest relations first, so the
    survivors are as short and early as possible."""
    if base is None:
        base = hat_braid_relations(system)
    base = set(base)
    todo = sorted((r for r in set(rels) if r not in base), key=relation_key(system))
    todo = [r for r in todo if not implies(base, r, system, depth)]
    keep = list(todo)
    for r in reversed(todo):
        rest = [x for x in keep if x != r]
        if implies(base | set(rest), r, system, depth):
            keep = rest
    return keep
