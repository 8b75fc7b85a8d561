#!/usr/bin/env python3
"""What-if exploration: compare scenarios, then run the network backward.

Forward: compare the no-evidence baseline against the KC1 measurements.
Backward: demand a 10 person-hour average change effort and let the network
say what the indicators would have to look like.
"""

from qualnet.ingestion import maintainability_case
from qualnet.network import compile_network
from qualnet.reporting import render_comparison, render_goal_seek
from qualnet.scenarios import compare, goal_seek, run_scenario

bundle = maintainability_case()
compiled = compile_network(bundle.network)

baseline = run_scenario(compiled, bundle.scenario("prior"), "change_effort")
variant = run_scenario(compiled, bundle.scenario("kc1"), "change_effort")

print("== baseline vs KC1 ==")
print(f"baseline mean: {baseline.target_summary.mean:.2f}")
print(f"KC1 mean:      {variant.target_summary.mean:.2f}")
print()
print(render_comparison(compare(baseline, variant)))

print()
print("== goal-seek: what would a 10 person-hour average require? ==")
report = goal_seek(compiled, "change_effort", 10.0,
                   ["comment_ratio", "avg_cyclomatic_complexity", "avg_module_size"])
print(render_goal_seek(report))
print()
print("reading: aim for a comment ratio around "
      f"{report.reports['comment_ratio']['mean']:.2f}, keep average cyclomatic "
      f"complexity near {report.reports['avg_cyclomatic_complexity']['mean']:.1f}, "
      f"and modules around {report.reports['avg_module_size']['mean']:.0f} LOC.")
