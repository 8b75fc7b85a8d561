"""What-if scenarios on a compiled network: runs, comparisons, goal-seeking,
and one-way sensitivity sweeps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .inference import Posterior, Summary, infer
from .network import CompiledNetwork, Interval, Ranked


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    name: str
    observations: dict  # node id -> state name or numeric value

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("scenario name must be non-empty")


@dataclass(frozen=True)
class ScenarioResult:
    scenario: str
    posterior: Posterior
    target: str
    target_summary: Optional[Summary]


def run_scenario(compiled: CompiledNetwork, scenario: Scenario, target: str) -> ScenarioResult:
    """Posterior under the scenario's observations, with the target summarized."""
    if target not in compiled.kinds:
        raise ScenarioError(f"unknown target node {target!r}")
    posterior = infer(compiled, scenario.observations)
    summary = posterior.summaries.get(target)
    return ScenarioResult(scenario=scenario.name, posterior=posterior, target=target, target_summary=summary)


@dataclass(frozen=True)
class ComparisonDelta:
    vector: np.ndarray
    mean: Optional[float] = None
    sd: Optional[float] = None


@dataclass(frozen=True)
class Comparison:
    first: str
    second: str
    deltas: dict  # node id -> ComparisonDelta, second minus first


def compare(a: ScenarioResult, b: ScenarioResult) -> Comparison:
    """Per-node difference document, second minus first; antisymmetric."""
    if a.posterior.fingerprint != b.posterior.fingerprint:
        raise ScenarioError("scenario results come from different networks")
    deltas = {}
    for node_id, vec_a in a.posterior.marginals.items():
        vec_b = b.posterior.marginals[node_id]
        sum_a = a.posterior.summaries.get(node_id)
        sum_b = b.posterior.summaries.get(node_id)
        deltas[node_id] = ComparisonDelta(
            vector=vec_b - vec_a,
            mean=(sum_b.mean - sum_a.mean) if sum_a and sum_b else None,
            sd=(sum_b.sd - sum_a.sd) if sum_a and sum_b else None,
        )
    return Comparison(first=a.scenario, second=b.scenario, deltas=deltas)


@dataclass(frozen=True)
class GoalSeekReport:
    target: str
    desired: object
    reports: dict  # node id -> {"mean", "sd", "mode_bin"} or {"mode_state", "vector"}


def goal_seek(
    compiled: CompiledNetwork,
    target: str,
    desired,
    report_nodes,
) -> GoalSeekReport:
    """Pin the target to a desired value and read the report nodes backward.

    For interval report nodes the posterior mean/sd/mode are returned; ranked
    nodes report their state distribution and mode.
    """
    if target not in compiled.kinds:
        raise ScenarioError(f"unknown target node {target!r}")
    for node_id in report_nodes:
        if node_id not in compiled.kinds:
            raise ScenarioError(f"unknown report node {node_id!r}")
    posterior = infer(compiled, {target: desired})
    reports = {}
    for node_id in report_nodes:
        vec = posterior.marginals[node_id]
        kind = compiled.kinds[node_id]
        if isinstance(kind, Interval):
            s = posterior.summaries[node_id]
            reports[node_id] = {"mean": s.mean, "sd": s.sd, "mode_bin": s.mode_bin}
        else:
            reports[node_id] = {
                "vector": vec,
                "mode_state": kind.states[int(np.argmax(vec))],
            }
    return GoalSeekReport(target=target, desired=desired, reports=reports)


@dataclass(frozen=True)
class SensitivityEntry:
    node: str
    swing: float
    low: float
    high: float


@dataclass(frozen=True)
class SensitivityReport:
    target: str
    entries: tuple  # SensitivityEntry, descending by swing


def _sweep_values(kind) -> list:
    """Evidence values to sweep: every state for ranked nodes, decile bin
    midpoints for interval nodes."""
    if isinstance(kind, Ranked):
        return list(kind.states)
    mids = kind.midpoints()
    if len(mids) <= 10:
        return [float(m) for m in mids]
    idx = np.unique(np.round(np.linspace(0, len(mids) - 1, 10)).astype(int))
    return [float(mids[i]) for i in idx]


def sensitivity(compiled: CompiledNetwork, target: str, candidates) -> SensitivityReport:
    """One-way sweep: each candidate is observed alone at each of its sweep
    values; swing is the range of the resulting target posterior means."""
    if target not in compiled.kinds:
        raise ScenarioError(f"unknown target node {target!r}")
    if not isinstance(compiled.kinds[target], Interval):
        raise ScenarioError("sensitivity target must be an interval node")
    entries = []
    for cand in candidates:
        if cand not in compiled.kinds:
            raise ScenarioError(f"unknown candidate node {cand!r}")
        if cand == target:
            raise ScenarioError("candidate must differ from the target")
        means = []
        for value in _sweep_values(compiled.kinds[cand]):
            posterior = infer(compiled, {cand: value})
            means.append(posterior.summaries[target].mean)
        entries.append(SensitivityEntry(node=cand, swing=max(means) - min(means),
                                        low=min(means), high=max(means)))
    entries.sort(key=lambda e: (-e.swing, e.node))
    return SensitivityReport(target=target, entries=tuple(entries))
