"""Walk through the A3 forest for the pair (s1, s2), step by step."""

from invbraid.braidsys import down, root_system_pair, solutions, substitute
from invbraid.coxeter import preset
from invbraid.engine import build_forest, eliminate_descents, extract_relations


def show(label, bs):
    print(f"  {label}: {bs.left} ~ {bs.right}")
    for s, col in sorted(bs.sigma.items()):
        print(f"      sigma(alpha_{s}) = ({', '.join(str(x) for x in col)})")


S = preset("A3")
for twist in ("id", "swap"):
    print(f"root system for (s1, s2), twist {twist}")
    b = root_system_pair(S, 1, 2, twist)
    d = down(b, 3)
    print("  constraints after down at s3:")
    for c in d.constraints:
        print(f"      {c}")
    for psi in solutions(d):
        print("  solution:", {k: str(v) for k, v in psi.items()})
        rec = eliminate_descents(substitute(d, psi), trace=True)
        for i, step in enumerate(rec.history):
            show(f"step {i}", step)
        print("  result:", rec.reason)

f = build_forest(S, 1, 2)
print(f"\nforest: {len(f.vertices)} vertices, relations:")
for r in sorted(map(str, extract_relations(f))):
    print("  ", r)
