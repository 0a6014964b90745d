"""Which catalog configuration covers each braid pair of an affine system."""

from invbraid.parabolic import case_configs, case_target, covering_cases, covering_report

for case in covering_cases():
    n = case["covered_from"]
    for twist in case["twists"]:
        target = case_target(case, n, twist)
        report = covering_report(target, case_configs(case, n))
        missing = [p for p, hit in report.items() if hit is None]
        used = sorted({hit[0] for hit in report.values() if hit})
        status = "covered" if not missing else f"missing {missing}"
        print(f"({case['case']}) {target.name}: {len(report)} pairs, {status}; uses {', '.join(used)}")
