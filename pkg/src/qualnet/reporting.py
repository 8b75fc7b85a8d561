"""Human-readable renderings of engine outputs.

Machine-readable output lives in :mod:`qualnet.formats`; these functions
produce the text tables and bar histograms shown on the terminal.
"""

from __future__ import annotations

BAR_WIDTH = 40


def _bar(p: float) -> str:
    return "#" * int(round(p * BAR_WIDTH))


def render_posterior(compiled, posterior, nodes=None) -> str:
    lines = []
    for node_id in compiled.order:
        if nodes is not None and node_id not in nodes:
            continue
        lines.append(f"{node_id}:")
        for state, p in zip(compiled.states(node_id), posterior.marginals[node_id]):
            lines.append(f"  {state:>16}  {p:8.4f}  {_bar(p)}")
        if node_id in posterior.summaries:
            s = posterior.summaries[node_id]
            mode = compiled.states(node_id)[s.mode_bin]
            tied = " (tie, lower bin)" if s.mode_tied else ""
            lines.append(f"  mean={s.mean:.4f}  sd={s.sd:.4f}  mode={mode}{tied}")
        lines.append("")
    return "\n".join(lines)


def render_scenario_result(compiled, result) -> str:
    lines = [f"scenario: {result.scenario}", f"target: {result.target}"]
    if result.target_summary is not None:
        s = result.target_summary
        lines.append(f"target mean={s.mean:.4f}  sd={s.sd:.4f}")
    lines.append("")
    lines.append(render_posterior(compiled, result.posterior))
    return "\n".join(lines)


def render_comparison(comparison) -> str:
    lines = [f"comparison: {comparison.second} - {comparison.first}",
             f"{'node':<28} {'d(mean)':>10} {'d(sd)':>10}"]
    for node_id, delta in comparison.deltas.items():
        if delta.mean is None:
            continue
        lines.append(f"{node_id:<28} {delta.mean:>+10.4f} {delta.sd:>+10.4f}")
    lines.append("")
    lines.append("largest state shifts:")
    for node_id, delta in comparison.deltas.items():
        biggest = max(abs(x) for x in delta.vector)
        lines.append(f"  {node_id:<26} max |d(p)| = {biggest:.4f}")
    return "\n".join(lines)


def render_goal_seek(report) -> str:
    lines = [f"goal-seek: {report.target} = {report.desired}",
             f"{'node':<28} {'mean':>10} {'sd':>10} {'mode':>10}"]
    for node_id, rep in report.reports.items():
        if "mean" in rep:
            lines.append(f"{node_id:<28} {rep['mean']:>10.4f} {rep['sd']:>10.4f} {rep['mode_bin']:>10}")
        else:
            lines.append(f"{node_id:<28} {'-':>10} {'-':>10} {rep['mode_state']:>10}")
    return "\n".join(lines)


def render_sensitivity(report) -> str:
    lines = [f"sensitivity of {report.target}",
             f"{'rank':<5} {'node':<28} {'swing':>12} {'low':>12} {'high':>12}"]
    for rank, e in enumerate(report.entries, start=1):
        lines.append(f"{rank:<5} {e.node:<28} {e.swing:>12.6f} {e.low:>12.6f} {e.high:>12.6f}")
    return "\n".join(lines)


def render_validation(report) -> str:
    if report.ok:
        return "0 findings"
    lines = [f"{len(report.findings)} finding(s):"]
    for f in report.findings:
        lines.append(f"  [{f.rule}] {f.message}")
    return "\n".join(lines)


def render_gqm_trace(trace: dict) -> str:
    return "\n".join([
        f"goal:      {trace['goal']}",
        f"question:  {trace['question']}",
        f"metric:    {trace['metric']}",
        f"activity:  {trace['target_activity']}",
        f"indicator: {trace['target_indicator']}",
    ])


def render_scenario_table(names, summaries) -> str:
    """Observations-and-results table for a batch of scenarios, one column each."""
    lines = [("{:<30}" + "{:>12}" * len(names)).format("", *names)]
    rows = {}
    for name in names:
        for label, value in summaries[name].items():
            rows.setdefault(label, {})[name] = value
    for label, by_name in rows.items():
        cells = [f"{by_name.get(n, float('nan')):.3f}" if by_name.get(n) is not None else "-"
                 for n in names]
        lines.append(("{:<30}" + "{:>12}" * len(names)).format(label, *cells))
    return "\n".join(lines)
