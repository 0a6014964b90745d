"""Twisted Coxeter systems and their geometric representation.

Group elements are exact matrices acting on the span of the simple roots;
two elements are equal exactly when their matrices are.  Generators are
integer labels (``0..n`` for affine types, ``1..n`` otherwise).
"""

from __future__ import annotations

import itertools
import json
import re
from typing import Iterable, Mapping, Sequence

from .numfield import INF, ONE, ZERO, FieldElement, make_cos, sign

__all__ = [
    "TwistedSystem",
    "GroupElement",
    "preset",
    "product_system",
    "system_from_json",
    "standard_automorphisms",
    "diagram_automorphisms",
    "alternating",
    "apply_generator",
    "InvalidSystem",
]

Word = tuple

SUPPORTED_M = (2, 3, 4, 5, 6, INF)


class InvalidSystem(ValueError):
    pass


def alternating(s, t, m: int) -> tuple:
    """The word (s, t, s, ...) with m letters."""
    return tuple(s if i % 2 == 0 else t for i in range(m))


def _parse_m(x):
    if x is None or x == "inf" or x == "∞" or x == INF or x == 0:
        return INF
    return int(x)


class TwistedSystem:
    """A Coxeter matrix with a diagram involution and a total order."""

    def __init__(self, generators, coxmat, twist=None, order=None, name=None):
        gens = tuple(generators)
        if len(set(gens)) != len(gens):
            raise InvalidSystem("duplicate generator labels")
        n = len(gens)
        self.generators = gens
        self.n = n
        self.index = {g: i for i, g in enumerate(gens)}
        if isinstance(coxmat, Mapping):
            mat = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
            for (a, b), m in coxmat.items():
                i, j = self.index[a], self.index[b]
                mat[i][j] = mat[j][i] = _parse_m(m)
        else:
            mat = [[_parse_m(x) if i != j else int(x) for j, x in enumerate(row)]
                   for i, row in enumerate(coxmat)]
        if len(mat) != n or any(len(r) != n for r in mat):
            raise InvalidSystem("Coxeter matrix has the wrong shape")
        for i in range(n):
            if mat[i][i] != 1:
                raise InvalidSystem("Coxeter matrix must have 1 on the diagonal")
            for j in range(n):
                if mat[i][j] != mat[j][i]:
                    raise InvalidSystem("Coxeter matrix must be symmetric")
                if i != j and mat[i][j] not in SUPPORTED_M:
                    raise InvalidSystem(
                        f"m({gens[i]},{gens[j]})={mat[i][j]} unsupported: "
                        "field does not contain cos(pi/m); use m in 2..6 or inf"
                    )
        self.coxmat = tuple(tuple(r) for r in mat)
        if twist is None:
            tw = {g: g for g in gens}
        elif isinstance(twist, Mapping):
            tw = {g: twist.get(g, g) for g in gens}
        else:
            tw = dict(zip(gens, twist))
        for g in gens:
            if tw[g] not in self.index:
                raise InvalidSystem(f"twist sends {g} outside the generators")
            if tw[tw[g]] != g:
                raise InvalidSystem("twist is not an involution")
        for a in gens:
            for b in gens:
                if self.m(tw[a], tw[b]) != self.m(a, b):
                    raise InvalidSystem("twist is not an automorphism of the Coxeter diagram")
        self.twist = tw
        self._tw_idx = tuple(self.index[tw[g]] for g in gens)
        if order is None:
            order = gens
        order = tuple(order)
        if sorted(order, key=self.index.get) != list(gens) or len(order) != n:
            raise InvalidSystem("order must list every generator exactly once")
        self.order = order
        self.rank = {g: i for i, g in enumerate(order)}
        self.name = name or f"custom({n})"
        self.form = tuple(
            tuple(make_cos(self.coxmat[i][j]) for j in range(n)) for i in range(n)
        )
        # -2 (a_i, a_j), with the zero entries dropped per row
        self._refl = tuple(
            tuple((j, self.form[i][j] * -2) for j in range(n) if j != i and self.form[i][j])
            for i in range(n)
        )
        self._identity = None
        self._simple_cache = {}

    # -- structure --------------------------------------------------------

    def m(self, s, t):
        return self.coxmat[self.index[s]][self.index[t]]

    def star(self, s):
        return self.twist[s]

    def bilinear(self, s, t) -> FieldElement:
        return self.form[self.index[s]][self.index[t]]

    def sort(self, gens: Iterable) -> list:
        return sorted(gens, key=self.rank.__getitem__)

    def boundary(self, J: Iterable, within: Iterable | None = None) -> frozenset:
        """Generators outside ``J`` joined to ``J`` by an edge with m > 2."""
        J = set(J)
        pool = self.generators if within is None else within
        return frozenset(
            s for s in pool if s not in J and any(self.m(s, t) > 2 for t in J)
        )

    def edges(self):
        for a, b in itertools.combinations(self.generators, 2):
            if self.m(a, b) != 2:
                yield a, b, self.m(a, b)

    def components(self) -> list[frozenset]:
        seen, comps = set(), []
        for g in self.generators:
            if g in seen:
                continue
            comp, stack = set(), [g]
            while stack:
                u = stack.pop()
                if u in comp:
                    continue
                comp.add(u)
                stack.extend(v for v in self.generators if v != u and self.m(u, v) != 2)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def with_order(self, order) -> "TwistedSystem":
        return TwistedSystem(self.generators, self.coxmat, self.twist, order, self.name)

    def with_twist(self, twist, name=None) -> "TwistedSystem":
        return TwistedSystem(self.generators, self.coxmat, twist, self.order, name or self.name)

    def is_finite(self) -> bool:
        """Positive definiteness of the bilinear form (Sylvester's criterion)."""
        n = self.n
        for k in range(1, n + 1):
            if sign(_det([list(r[:k]) for r in self.form[:k]])) <= 0:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "generators": list(self.generators),
            "m": [["inf" if x == INF else x for x in row] for row in self.coxmat],
            "twist": [self.twist[g] for g in self.generators],
            "order": list(self.order),
        }

    def __eq__(self, other):
        return (
            isinstance(other, TwistedSystem)
            and self.generators == other.generators
            and self.coxmat == other.coxmat
            and self.twist == other.twist
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.generators, self.coxmat, tuple(self.twist.items()), self.order))

    def __repr__(self):
        return f"TwistedSystem({self.name})"

    # -- vectors ----------------------------------------------------------

    def simple_root(self, s) -> tuple:
        v = self._simple_cache.get(s)
        if v is None:
            i = self.index[s]
            v = tuple(ONE if j == i else ZERO for j in range(self.n))
            self._simple_cache[s] = v
        return v

    def reflect(self, s, vec: Sequence) -> tuple:
        """s acting on a coordinate vector (entries may be polynomials)."""
        i = self.index[s]
        acc = vec[i] * -1
        for j, c in self._refl[i]:
            if vec[j]:
                acc = acc + vec[j] * c
        out = list(vec)
        out[i] = acc
        return tuple(out)

    def form_of(self, u: Sequence, v: Sequence):
        """(u, v) for coordinate vectors; entries may be linear polynomials
        provided at most one side is non-constant."""
        total = ZERO
        for i in range(self.n):
            if not u[i]:
                continue
            row = self.form[i]
            for j in range(self.n):
                if v[j] and row[j]:
                    total = u[i] * v[j] * row[j] + total
        return total

    def twist_vector(self, vec: Sequence) -> tuple:
        """Apply the linear extension of the twist: a_s -> a_{s*}."""
        out = [None] * self.n
        for i, j in enumerate(self._tw_idx):
            out[j] = vec[i]
        return tuple(out)

    # -- group elements ---------------------------------------------------

    def identity(self) -> "GroupElement":
        if self._identity is None:
            cols = tuple(self.simple_root(g) for g in self.generators)
            self._identity = GroupElement(self, cols, cols, 0)
        return self._identity

    def element(self, word: Iterable) -> "GroupElement":
        g = self.identity()
        for s in word:
            g = g.right(s)
        return g

    def generator(self, s) -> "GroupElement":
        return self.identity().right(s)

    def is_reduced(self, word: Iterable) -> bool:
        g = self.identity()
        for s in word:
            if g.is_right_descent(s):
                return False
            g = g.right(s)
        return True

    def demazure(self, v: "GroupElement", w: "GroupElement") -> "GroupElement":
        out = v
        for s in w.reduced_word():
            if not out.is_right_descent(s):
                out = out.right(s)
        return out

    def demazure_word(self, word: Iterable, start: "GroupElement | None" = None):
        out = self.identity() if start is None else start
        for s in word:
            if not out.is_right_descent(s):
                out = out.right(s)
        return out

    def elements(self, max_length: int | None = None) -> list["GroupElement"]:
        """Breadth-first enumeration by length (all of W when finite)."""
        if max_length is None and not self.is_finite():
            raise ValueError("infinite group: supply max_length")
        e = self.identity()
        seen = {e}
        layer = [e]
        out = [e]
        k = 0
        while layer and (max_length is None or k < max_length):
            nxt = []
            for g in layer:
                for s in self.order:
                    if not g.is_right_descent(s):
                        h = g.right(s)
                        if h not in seen:
                            seen.add(h)
                            nxt.append(h)
            out.extend(nxt)
            layer = nxt
            k += 1
        return out

    def longest_element(self) -> "GroupElement":
        g = self.identity()
        while True:
            for s in self.order:
                if not g.is_right_descent(s):
                    g = g.right(s)
                    break
            else:
                return g


def _det(mat):
    """Determinant by fraction-free elimination over the field."""
    n = len(mat)
    a = [list(r) for r in mat]
    det = ONE
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c]
        inv = a[c][c].inverse()
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


class GroupElement:
    """An element of W as its matrix on the simple-root basis.

    ``cols[j]`` is the image of the j-th simple root; ``inv`` holds the
    columns of the inverse.  The length is carried along incrementally.
    """

    __slots__ = ("system", "cols", "inv", "length", "_hash")

    def __init__(self, system, cols, inv, length):
        self.system = system
        self.cols = cols
        self.inv = inv
        self.length = length
        self._hash = None

    # descents: a root is negative iff its first nonzero coordinate is
    @staticmethod
    def _negative_root(col) -> bool:
        for c in col:
            if c:
                return sign(c) < 0
        raise ValueError("zero column")

    def is_right_descent(self, s) -> bool:
        return self._negative_root(self.cols[self.system.index[s]])

    def is_left_descent(self, s) -> bool:
        return self._negative_root(self.inv[self.system.index[s]])

    def right_descents(self) -> frozenset:
        return frozenset(s for s in self.system.generators if self.is_right_descent(s))

    def left_descents(self) -> frozenset:
        return frozenset(s for s in self.system.generators if self.is_left_descent(s))

    def apply(self, vec: Sequence) -> tuple:
        n = self.system.n
        out = [ZERO] * n
        for j, x in enumerate(vec):
            if x:
                col = self.cols[j]
                for i in range(n):
                    if col[i]:
                        out[i] = out[i] + col[i] * x
        return tuple(out)

    def root(self, s) -> tuple:
        """w(alpha_s)."""
        return self.cols[self.system.index[s]]

    def _mul_cols_right(self, cols, s):
        sysm = self.system
        i = sysm.index[s]
        ci = cols[i]
        new = list(cols)
        new[i] = tuple(-x for x in ci)
        for j, c in sysm._refl[i]:
            # col_j(g s) = col_j(g) + c * col_i(g) with c = -2 (a_i, a_j)
            new[j] = tuple(a + b * c if b else a for a, b in zip(cols[j], ci))
        return tuple(new)

    def _mul_cols_left(self, cols, s):
        sysm = self.system
        return tuple(sysm.reflect(s, col) for col in cols)

    def right(self, s) -> "GroupElement":
        """The product w s."""
        up = not self.is_right_descent(s)
        return GroupElement(
            self.system,
            self._mul_cols_right(self.cols, s),
            self._mul_cols_left(self.inv, s),
            self.length + (1 if up else -1),
        )

    def left(self, s) -> "GroupElement":
        """The product s w."""
        up = not self.is_left_descent(s)
        return GroupElement(
            self.system,
            self._mul_cols_left(self.cols, s),
            self._mul_cols_right(self.inv, s),
            self.length + (1 if up else -1),
        )

    def times(self, other: "GroupElement") -> "GroupElement":
        g = self
        for s in other.reduced_word():
            g = g.right(s)
        return g

    def inverse(self) -> "GroupElement":
        return GroupElement(self.system, self.inv, self.cols, self.length)

    def twisted(self) -> "GroupElement":
        """The image w* under the diagram involution."""
        sysm = self.system
        tw = sysm._tw_idx

        def conj(cols):
            out = [None] * sysm.n
            for j, col in enumerate(cols):
                out[tw[j]] = sysm.twist_vector(col)
            return tuple(out)

        return GroupElement(sysm, conj(self.cols), conj(self.inv), self.length)

    def is_twisted_involution(self) -> bool:
        return self.twisted().cols == self.inv

    def reduced_word(self) -> tuple:
        word = []
        g = self
        order = self.system.order
        while g.length > 0:
            for s in order:
                if g.is_right_descent(s):
                    word.append(s)
                    g = g.right(s)
                    break
            else:  # pragma: no cover - length bookkeeping broken
                raise RuntimeError("positive length without a descent")
        return tuple(reversed(word))

    def restrict(self, J: Iterable) -> dict:
        """The columns w(alpha_s) for s in J."""
        return {s: self.root(s) for s in J}

    def key(self):
        return self.cols

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.cols == other.cols

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.cols)
        return self._hash

    def __repr__(self):
        return f"<{self.system.name} element {self.reduced_word()}>"


def apply_generator(g: GroupElement, s, side: str = "right") -> GroupElement:
    """g s or s g."""
    if side == "right":
        return g.right(s)
    if side == "left":
        return g.left(s)
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


# -- presets ---------------------------------------------------------------


def _chain(labels, weights=None):
    edges = {}
    for k, (a, b) in enumerate(zip(labels, labels[1:])):
        edges[(a, b)] = 3 if weights is None else weights[k]
    return edges


def _finite_edges(letter: str, n: int):
    """Generators and edges for the finite types."""
    L = list(range(1, n + 1))
    if letter == "A":
        if n < 1:
            raise InvalidSystem("A_n needs n >= 1")
        return L, _chain(L)
    if letter in ("B", "C"):
        if n < 2:
            raise InvalidSystem(f"{letter}_n needs n >= 2")
        e = _chain(L)
        e[(n - 1, n)] = 4
        return L, e
    if letter == "D":
        if n < 4:
            raise InvalidSystem("D_n needs n >= 4")
        e = _chain(L[:-1])
        e[(n - 2, n)] = 3
        return L, e
    if letter == "E":
        if n not in (6, 7, 8):
            raise InvalidSystem("E_n needs n in {6,7,8}")
        e = {(1, 3): 3, (3, 4): 3, (2, 4): 3}
        e.update(_chain(list(range(4, n + 1))))
        return L, e
    if letter == "F":
        if n != 4:
            raise InvalidSystem("F_n needs n = 4")
        return L, {(1, 2): 3, (2, 3): 4, (3, 4): 3}
    if letter == "G":
        if n != 2:
            raise InvalidSystem("G_n needs n = 2")
        return L, {(1, 2): 6}
    if letter == "H":
        if n not in (2, 3, 4):
            raise InvalidSystem("H_n needs n in {2,3,4}")
        e = _chain(L)
        e[(1, 2)] = 5
        return L, e
    raise InvalidSystem(f"unknown finite type {letter}")


def _affine_edges(letter: str, n: int):
    L = list(range(0, n + 1))
    if letter == "A":
        if n < 2:
            raise InvalidSystem("affine A_n needs n >= 2 (m=inf in rank 2 is I2(inf))")
        e = _chain(L)
        e[(n, 0)] = 3
        return L, e
    if letter == "B":
        if n < 3:
            raise InvalidSystem("affine B_n needs n >= 3")
        e = {(0, 2): 3}
        e.update(_chain(L[1:]))
        e[(n - 1, n)] = 4
        return L, e
    if letter == "C":
        if n < 2:
            raise InvalidSystem("affine C_n needs n >= 2")
        e = _chain(L)
        e[(0, 1)] = 4
        e[(n - 1, n)] = 4
        return L, e
    if letter == "D":
        if n < 4:
            raise InvalidSystem("affine D_n needs n >= 4")
        e = {(0, 2): 3}
        e.update(_chain(L[1:n]))
        e[(n - 2, n)] = 3
        return L, e
    if letter == "E":
        if n not in (6, 7, 8):
            raise InvalidSystem("affine E_n needs n in {6,7,8}")
        _, e = _finite_edges("E", n)
        e[{6: (0, 2), 7: (0, 1), 8: (8, 0)}[n]] = 3
        return L, e
    if letter == "F":
        if n != 4:
            raise InvalidSystem("affine F_n needs n = 4")
        return L, {(0, 1): 3, (1, 2): 3, (2, 3): 4, (3, 4): 3}
    if letter == "G":
        if n != 2:
            raise InvalidSystem("affine G_n needs n = 2")
        return L, {(0, 1): 3, (1, 2): 6}
    raise InvalidSystem(f"unknown affine type {letter}")


def _named_twist(letter, n, affine, twist, gens):
    if twist in (None, "id", "identity"):
        return {g: g for g in gens}
    if isinstance(twist, Mapping):
        return dict(twist)
    if isinstance(twist, str) and re.fullmatch(r"\s*\d+-\d+(\s*,\s*\d+-\d+)*\s*", twist):
        tw = {g: g for g in gens}
        for pair in twist.split(","):
            a, b = (int(x) for x in pair.strip().split("-"))
            tw[a], tw[b] = b, a
        return tw
    if affine:
        N = n + 1
        if twist == "reverse":
            return {i: (n - i) % N for i in gens}
        if letter == "A" and twist == "reflect":
            return {i: (-i) % N for i in gens}
        if letter == "A" and twist == "rotate":
            if N % 2:
                raise InvalidSystem("rotation by half needs an even number of nodes")
            return {i: (i + N // 2) % N for i in gens}
        if letter in ("B", "D") and twist == "swap":
            tw = {g: g for g in gens}
            tw[0], tw[1] = 1, 0
            return tw
    else:
        if twist in ("reverse", "swap"):
            if letter == "A" or (letter == "I"):
                return {i: n + 1 - i for i in gens}
            if letter == "D":
                tw = {g: g for g in gens}
                tw[n - 1], tw[n] = n, n - 1
                return tw
            if letter == "E" and n == 6:
                return {1: 6, 6: 1, 3: 5, 5: 3, 2: 2, 4: 4}
            if letter == "F" and twist == "reverse":
                raise InvalidSystem("F4 diagram reversal does not preserve edge weights")
    raise InvalidSystem(f"unknown twist {twist!r} for this type")


def product_system(letter: str, n: int, order=None) -> TwistedSystem:
    """The system 2(X_n x X_n): two copies with s_i* = s~_i, s~_i labelled n+i."""
    gens, edges = _finite_edges(letter, n)
    all_gens = gens + [g + n for g in gens]
    e = dict(edges)
    e.update({(a + n, b + n): m for (a, b), m in edges.items()})
    tw = {g: g + n for g in gens}
    tw.update({g + n: g for g in gens})
    return TwistedSystem(all_gens, e, tw, order, name=f"2({letter}{n}x{letter}{n})")


_NAME_RE = re.compile(
    r"^\s*(?P<aff>~|affine-|tilde-)?(?P<letter>[A-HI])(?P<aff2>~)?_?(?P<rank>\d+)"
    r"(\((?P<m>\d+|inf|∞)\))?\s*$"
)
_PROD_RE = re.compile(r"^\s*2\(\s*(?P<l1>[ABD])_?(?P<n1>\d+)\s*[x×]\s*(?P<l2>[ABD])_?(?P<n2>\d+)\s*\)\s*$")


def preset(name: str, rank: int | None = None, twist="id", order=None) -> TwistedSystem:
    """Named twisted Coxeter system.

    ``name`` is e.g. ``"A3"``, ``"B5"``, ``"~C4"`` / ``"affine-C"`` (with
    ``rank``), ``"I2(5)"`` or ``"2(A2xA2)"``.  ``twist`` is ``"id"``, a
    named diagram involution (``"reverse"``, ``"swap"``, ``"reflect"``,
    ``"rotate"``), a pair list like ``"1-3,4-5"`` or a mapping.
    """
    pm = _PROD_RE.match(name)
    if pm:
        if pm["l1"] != pm["l2"] or pm["n1"] != pm["n2"]:
            raise InvalidSystem("product presets need two equal factors")
        sys_ = product_system(pm["l1"], int(pm["n1"]), order)
        if twist not in (None, "id", "swap", "reverse"):
            sys_ = sys_.with_twist(_named_twist(None, None, False, twist, sys_.generators))
        return sys_
    if rank is not None and not any(ch.isdigit() for ch in name):
        name = f"{name}{rank}"
    mm = _NAME_RE.match(name)
    if not mm:
        raise InvalidSystem(f"cannot parse type {name!r}")
    letter = mm["letter"]
    n = int(mm["rank"])
    affine = bool(mm["aff"] or mm["aff2"])
    if letter == "I":
        if n != 2 or mm["m"] is None:
            raise InvalidSystem("dihedral types are written I2(m)")
        m = _parse_m(mm["m"])
        gens, edges = [1, 2], {(1, 2): m}
        label = f"I2({'inf' if m == INF else m})"
    else:
        gens, edges = (_affine_edges if affine else _finite_edges)(letter, n)
        label = f"{'~' if affine else ''}{letter}{n}"
    tw = _named_twist(letter, n if letter != "I" else 1, affine, twist, gens)
    if letter == "I" and twist not in (None, "id", "identity") and not isinstance(twist, Mapping):
        tw = {1: 2, 2: 1}
    tname = "" if all(tw[g] == g for g in gens) else f"[{twist if isinstance(twist, str) else 'twisted'}]"
    return TwistedSystem(gens, edges, tw, order, name=label + tname)


def system_from_json(data) -> TwistedSystem:
    """Build from ``{"generators", "m", "twist", "order"}`` (a dict or JSON text)."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    gens = data["generators"]
    mat = data["m"]
    twist = data.get("twist")
    order = data.get("order")
    return TwistedSystem(gens, mat, twist, order, name=data.get("name"))


# -- diagram automorphisms -------------------------------------------------


def diagram_automorphisms(system: TwistedSystem) -> list[dict]:
    """All permutations of the generators preserving the Coxeter matrix."""
    gens = list(system.order)
    out = []

    def extend(assign):
        k = len(assign)
        if k == len(gens):
            out.append(dict(assign))
            return
        g = gens[k]
        used = set(assign.values())
        for h in gens:
            if h in used:
                continue
            if all(system.m(g, a) == system.m(h, assign[a]) for a in assign):
                assign[g] = h
                extend(assign)
                del assign[g]

    extend({})
    return out


def standard_automorphisms(system: TwistedSystem) -> list[dict]:
    """One diagram involution from each conjugacy class of involutive
    diagram automorphisms (the identity first)."""
    autos = diagram_automorphisms(system)
    gens = system.order

    def as_tuple(p):
        return tuple(p[g] for g in gens)

    invols = [p for p in autos if all(p[p[g]] == g for g in gens)]
    seen = set()
    reps = []
    for p in sorted(invols, key=lambda p: (sum(p[g] != g for g in gens), as_tuple(p))):
        t = as_tuple(p)
        if t in seen:
            continue
        cls = set()
        for g in autos:
            ginv = {v: k for k, v in g.items()}
            conj = {x: g[p[ginv[x]]] for x in gens}
            cls.add(as_tuple(conj))
        seen |= cls
        reps.append(p)
    return reps
