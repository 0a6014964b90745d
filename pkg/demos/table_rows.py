"""Recover the minimal extra relation for a few parabolic configurations.

Each configuration takes seconds to a minute; pass names on the command line
to pick a subset, e.g. ``python3 demos/table_rows.py B5 A8``.
"""

import sys
import time

from invbraid.engine import build_forest, extract_relations, minimize
from invbraid.involutions import hat_braid_relations
from invbraid.parabolic import catalog_config

names = sys.argv[1:] or ["A5", "A6", "B5", "2A9"]
for name in names:
    cfg = catalog_config(name)
    t0 = time.perf_counter()
    f = build_forest(cfg.system, cfg.s, cfg.t)
    R = extract_relations(f)
    kept = minimize(R, cfg.system, hat_braid_relations(cfg.system))
    dt = time.perf_counter() - t0
    print(f"{name:>6}  pair ({cfg.s},{cfg.t})  |R| = {len(R):3}  ({dt:.1f}s)")
    for r in kept:
        print(f"        {r}")
