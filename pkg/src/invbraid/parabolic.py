"""Bounded Coxeter systems, parabolic configurations and covering data."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .coxeter import InvalidSystem, TwistedSystem, preset
from .engine import Forest, build_forest, extract_relations
from .numfield import FieldElement

__all__ = [
    "BoundedSystem",
    "ParabolicConfig",
    "is_parabolic_config",
    "find_bounded_embedding",
    "covering_report",
    "load_catalog",
    "catalog_config",
    "covering_cases",
    "case_target",
    "case_configs",
]


@dataclass(frozen=True)
class BoundedSystem:
    """A twisted system with a window J; J must be twist-stable and J together
    with its boundary must exhaust S."""

    system: TwistedSystem
    J: frozenset

    def __post_init__(self):
        J = frozenset(self.J)
        object.__setattr__(self, "J", J)
        sys_ = self.system
        if not J <= set(sys_.generators):
            raise InvalidSystem(f"{sorted(J)} is not a subset of the generators")
        if {sys_.star(j) for j in J} != J:
            raise InvalidSystem(f"J = {sorted(J)} is not stable under the twist")
        if self.boundary | J != set(sys_.generators):
            raise InvalidSystem("J and its boundary must cover every generator")

    @property
    def boundary(self) -> frozenset:
        return self.system.boundary(self.J)


@dataclass
class ParabolicConfig:
    bounded: BoundedSystem
    s: object
    t: object
    name: str = ""
    forest: Forest | None = field(default=None, repr=False)
    failures: list = field(default_factory=list, repr=False)

    @property
    def system(self) -> TwistedSystem:
        return self.bounded.system

    @property
    def J(self) -> frozenset:
        return self.bounded.J

    def relations(self):
        if self.forest is None:
            raise ValueError("forest not built; call is_parabolic_config first")
        return extract_relations(self.forest)


def _support(col) -> set:
    return {i for i, e in enumerate(col) if e}


def is_parabolic_config(bounded: BoundedSystem, s, t, budget: int = 200, name: str = ""):
    """(ok, config): builds the forest and checks every vertex domain K for
    boundary(K) u K <= J and sigma(V_K) <= V_J."""
    cfg = ParabolicConfig(bounded, s, t, name)
    system = bounded.system
    forest = build_forest(system, s, t, budget)
    cfg.forest = forest
    allowed = {system.index[j] for j in bounded.J}
    for v in forest.vertices:
        K = set(v.system.domain)
        if not (system.boundary(K) | K) <= bounded.J:
            cfg.failures.append((v.id, "domain leaves J"))
            continue
        if any(not _support(col) <= allowed for col in v.system.sigma.values()):
            cfg.failures.append((v.id, "image leaves V_J"))
    return not cfg.failures, cfg


def _search_order(system: TwistedSystem, s, t):
    order = [s, t]
    seen = {s, t}
    i = 0
    while len(order) < system.n:
        if i < len(order):
            g = order[i]
            i += 1
            nbrs = [h for h in system.generators if h != g and system.m(g, h) != 2]
            nbrs.append(system.star(g))
        else:
            nbrs = [h for h in system.generators if h not in seen][:1]
        for h in nbrs:
            if h not in seen:
                seen.add(h)
                order.append(h)
    return order


def find_bounded_embedding(config, target: TwistedSystem, s2, t2, order_preserving: bool = False):
    """A map phi: S -> S' with phi(s) = s2, phi(t) = t2 extending to a
    bounded embedding, or None."""
    bounded = config.bounded if isinstance(config, ParabolicConfig) else config[0]
    s, t = (config.s, config.t) if isinstance(config, ParabolicConfig) else config[1:]
    src = bounded.system
    if src.n > target.n:
        return None
    order = _search_order(src, s, t)
    phi = {}
    used = set()
    rank2 = target.rank

    def fits(g, v):
        if v in used:
            return False
        for h, w in phi.items():
            if target.m(v, w) != src.m(g, h):
                return False
        gs = src.star(g)
        if gs == g and target.star(v) != v:
            return False
        if gs in phi and target.star(v) != phi[gs]:
            return False
        if order_preserving:
            for h, w in phi.items():
                if (src.rank[g] < src.rank[h]) != (rank2[v] < rank2[w]):
                    return False
        return True

    def candidates(g):
        gs = src.star(g)
        if gs in phi:
            return [target.star(phi[gs])]
        for h in src.generators:
            if h in phi and src.m(g, h) != 2:
                w = phi[h]
                return [v for v in target.order if v != w and target.m(v, w) == src.m(g, h)]
        return list(target.order)

    def boundary_ok():
        image_J = {phi[j] for j in bounded.J}
        return target.boundary(image_J) == {phi[b] for b in bounded.boundary}

    def extend(k):
        if k == len(order):
            return boundary_ok()
        g = order[k]
        forced = {s: s2, t: t2}.get(g)
        for v in ([forced] if forced is not None else candidates(g)):
            if fits(g, v):
                phi[g] = v
                used.add(v)
                if extend(k + 1):
                    return True
                del phi[g]
                used.discard(v)
        return False

    if extend(0):
        return {g: phi[g] for g in src.generators}
    return None


def _target_pairs(target: TwistedSystem):
    for a in target.order:
        for b in target.order:
            if target.rank[a] < target.rank[b] and 2 < target.m(a, b) < math.inf:
                yield a, b


def covering_report(target: TwistedSystem, catalog) -> dict:
    """{(s', t'): (config name, phi) or None} for pairs with 2 < m < inf."""
    report = {}
    for a, b in _target_pairs(target):
        hit = None
        for cfg in catalog:
            for x, y in ((a, b), (b, a)):
                phi = find_bounded_embedding(cfg, target, x, y)
                if phi is not None:
                    hit = (cfg.name, phi)
                    break
            if hit:
                break
        report[(a, b)] = hit
    return report


# -- catalog data ------------------------------------------------------------


@lru_cache(maxsize=1)
def load_catalog() -> dict:
    text = resources.files("invbraid").joinpath("data/catalog.json").read_text()
    return json.loads(text)


def _config_system(entry) -> TwistedSystem:
    return preset(entry["type"], twist=entry["twist"])


def catalog_config(name: str) -> ParabolicConfig:
    for entry in load_catalog()["configurations"]:
        if entry["name"] == name:
            bounded = BoundedSystem(_config_system(entry), frozenset(entry["J"]))
            s, t = entry["pair"]
            return ParabolicConfig(bounded, s, t, name)
    raise KeyError(f"no catalog configuration named {name!r}")


def covering_cases() -> list:
    return load_catalog()["covering"]


def case_target(case: dict, n: int, twist: str | None = None) -> TwistedSystem:
    """The affine system of a covering case at rank n."""
    twist = twist or case["twists"][0]
    letter = case["family"].lstrip("~")
    if twist == "last":
        twist = f"{n - 1}-{n}"
    elif twist == "0-1+last":
        twist = f"0-1,{n - 1}-{n}"
    return preset(f"~{letter}{n}", twist=twist)


def case_configs(case: dict, n: int) -> list:
    names = list(case["configurations"])
    extra = case.get("by_parity")
    if extra:
        names += extra["odd" if n % 2 else "even"]
    return [catalog_config(x) for x in names]
