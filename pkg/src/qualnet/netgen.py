"""Derivation of a Bayesian network from a quality model and an assessment goal.

The derivation runs in four steps: pick the target activity from the goal,
walk its sub-activity tree collecting impacting facts, attach one indicator
node to every fact (plus the goal's own activity indicator), and finally
synthesize node probability tables.  Activity and fact nodes become ranked
nodes whose tables follow the weighted-mean TNormal construction; indicator
nodes carry the partitioned or arithmetic expressions supplied per indicator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import abqm
from .network import (
    DEFAULT_MIDPOINTS,
    DEFAULT_STATES,
    Arithmetic,
    BayesianNetwork,
    Interval,
    NodeSpec,
    Partitioned,
    Ranked,
    Uniform,
    WeightedMean,
    topological_order,
)


class DerivationError(ValueError):
    """The goal/selection cannot be turned into a well-formed network."""


@dataclass(frozen=True)
class IndicatorSpec:
    """A measurable metric attached to a fact or activity node.

    ``polarity`` says whether larger measured values signal a higher state of
    the attached node ("direct") or a lower one ("inverse"); the table itself
    already encodes the direction, polarity is what monotonicity checks and
    goal-seek reporting read.
    """

    id: str
    name: str
    attached_to: str
    scale: tuple  # strictly increasing bin edges
    unit: str = ""
    polarity: str = "direct"  # "direct" | "inverse"
    npt: Optional[object] = None  # dict state -> Distribution, or Arithmetic

    def __post_init__(self) -> None:
        edges = list(self.scale)
        if len(edges) < 2 or edges != sorted(edges) or len(set(edges)) != len(edges):
            raise ValueError(f"indicator {self.id!r}: scale edges must be strictly increasing")
        if self.polarity not in ("direct", "inverse"):
            raise ValueError(f"indicator {self.id!r}: polarity must be direct or inverse")


@dataclass(frozen=True)
class GoalSpec:
    """GQM triple plus the activity it binds to and that activity's indicator."""

    goal: str
    question: str
    target_activity: str
    activity_indicator: IndicatorSpec


@dataclass(frozen=True)
class Selection:
    """Explicit pruning of the quality model to what data is available for."""

    activities: tuple
    facts: tuple


@dataclass(frozen=True)
class NPTConfig:
    ranked_states: tuple = DEFAULT_STATES
    state_midpoints: tuple = DEFAULT_MIDPOINTS
    activity_variance: float = 0.001
    fact_prior: str = "uniform"
    impact_weights: dict = field(default_factory=dict)  # (fact, activity) -> weight

    def __post_init__(self) -> None:
        mids = list(self.state_midpoints)
        if mids != sorted(mids) or len(set(mids)) != len(mids):
            raise ValueError("state midpoints must be strictly increasing")
        if mids[0] < 0.0 or mids[-1] > 1.0:
            raise ValueError("state midpoints must lie inside [0, 1]")
        if self.activity_variance <= 0:
            raise ValueError("activity variance must be > 0")
        if self.fact_prior != "uniform":
            raise ValueError(f"unsupported fact prior {self.fact_prior!r}")
        for key, weight in self.impact_weights.items():
            if weight <= 0:
                raise ValueError(f"impact weight for {key} must be > 0")

    def weight(self, fact_id: str, activity_id: str) -> float:
        return self.impact_weights.get((fact_id, activity_id), 1.0)


@dataclass(frozen=True)
class TopologyNode:
    id: str
    kind: str  # "activity" | "fact" | "indicator"


@dataclass(frozen=True)
class NetworkTopology:
    nodes: tuple  # of TopologyNode
    edges: tuple  # of (from id, to id); direction = parent -> child in the BN
    target_activity: str
    target_indicator: str
    impact_signs: tuple = ()  # of ((fact id, activity id), "+" | "-")

    def node_ids(self, kind: Optional[str] = None) -> list:
        return [n.id for n in self.nodes if kind is None or n.kind == kind]

    def parents_of(self, node_id: str) -> list:
        return [a for a, b in self.edges if b == node_id]

    def sign_of(self, parent: str, child: str) -> str:
        for edge, sign in self.impact_signs:
            if edge == (parent, child):
                return sign
        return "+"


def derive_topology(
    model: abqm.QualityModel,
    goal: GoalSpec,
    selection: Selection,
    fact_indicators: dict,
) -> NetworkTopology:
    """Steps 1-3: nodes for the goal activity, its selected sub-activities and
    impacting facts, plus one indicator node per fact and the goal indicator.

    Edge directions: sub-activity -> super-activity, fact -> activity,
    fact/activity -> its indicator.
    """
    report = abqm.validate(model)
    if not report.ok:
        raise DerivationError(f"model does not validate: {[f.message for f in report.findings]}")

    target = goal.target_activity
    model.activity(target)  # KeyError on unknown target

    # activities: the target plus every selected activity in its sub-tree
    subtree = set()

    def walk(aid: str) -> None:
        subtree.add(aid)
        for child in model.activity_children(aid):
            walk(child.id)

    walk(target)
    for aid in selection.activities:
        model.activity(aid)
        if aid not in subtree:
            raise DerivationError(f"selected activity {aid!r} is outside the sub-tree of {target!r}")
    activities = [a for a in selection.activities]
    if target not in activities:
        activities.append(target)
    activity_set = set(activities)

    nodes = [TopologyNode(aid, "activity") for aid in sorted(activity_set)]
    edges = []
    for aid in sorted(activity_set):
        parent = model.activity(aid).parent
        if parent in activity_set:
            edges.append((aid, parent))

    # facts: each selected fact must impact some selected activity
    fact_edges = []
    for fid in selection.facts:
        model.fact(fid)
        touching = [imp for imp in model.impacts if imp.fact == fid and imp.activity in activity_set]
        if not touching:
            raise DerivationError(f"selected fact {fid!r} has no impact on any selected activity")
        for imp in touching:
            fact_edges.append((fid, imp.activity))
    nodes.extend(TopologyNode(fid, "fact") for fid in sorted(set(selection.facts)))
    edges.extend(sorted(set(fact_edges)))

    # indicators: one per fact (required) plus the goal's activity indicator
    for fid in sorted(set(selection.facts)):
        spec = fact_indicators.get(fid)
        if spec is None:
            raise DerivationError(f"fact {fid!r} has no indicator")
        nodes.append(TopologyNode(spec.id, "indicator"))
        edges.append((fid, spec.id))
    nodes.append(TopologyNode(goal.activity_indicator.id, "indicator"))
    edges.append((target, goal.activity_indicator.id))

    edge_set = set(edges)
    signs = tuple(((imp.fact, imp.activity), imp.sign) for imp in model.impacts
                  if (imp.fact, imp.activity) in edge_set)
    topo = NetworkTopology(
        nodes=tuple(nodes),
        edges=tuple(edges),
        target_activity=target,
        target_indicator=goal.activity_indicator.id,
        impact_signs=signs,
    )
    _check_acyclic(topo)
    return topo


def _check_acyclic(topo: NetworkTopology) -> None:
    probe = BayesianNetwork(nodes=tuple(
        NodeSpec(n.id, Ranked(("a", "b"), (0.25, 0.75)),
                 ExplicitProbe(tuple(topo.parents_of(n.id))))
        for n in topo.nodes
    ))
    topological_order(probe)


@dataclass(frozen=True)
class ExplicitProbe:
    """Expression stand-in carrying only a parent list, for acyclicity checks."""

    parents: tuple

    def parent_ids(self) -> tuple:
        return self.parents


def synthesize_network(
    topology: NetworkTopology,
    config: NPTConfig,
    indicators: dict,
) -> BayesianNetwork:
    """Step 4: attach an expression to every node of the topology.

    Parentless ranked nodes get uniform priors; ranked nodes with parents get
    the weighted-mean TNormal over parent midpoints, with negative impacts
    contributing (1 - midpoint); indicator nodes get their partitioned or
    arithmetic tables.
    """
    ranked = Ranked(config.ranked_states, config.state_midpoints)
    nodes = []
    for tnode in topology.nodes:
        parents = topology.parents_of(tnode.id)
        if tnode.kind == "indicator":
            spec = indicators.get(tnode.id)
            if spec is None:
                raise DerivationError(f"indicator node {tnode.id!r} has no indicator spec")
            if not parents:
                raise DerivationError(f"indicator node {tnode.id!r} has no attached fact or activity")
            kind = Interval(tuple(spec.scale), spec.unit)
            if isinstance(spec.npt, Arithmetic):
                expr = spec.npt
            elif isinstance(spec.npt, dict):
                expr = Partitioned(parent=parents[0], table=dict(spec.npt))
            else:
                raise DerivationError(f"indicator {tnode.id!r} needs a partitioned table or arithmetic npt")
            nodes.append(NodeSpec(tnode.id, kind, expr, group="indicator"))
            continue

        if not parents:
            nodes.append(NodeSpec(tnode.id, ranked, Uniform(), group=tnode.kind))
            continue

        triples = []
        for pid in sorted(parents):
            polarity = "negative" if topology.sign_of(pid, tnode.id) == "-" else "positive"
            triples.append((pid, config.weight(pid, tnode.id), polarity))
        expr = WeightedMean(parents=tuple(triples), variance=config.activity_variance)
        nodes.append(NodeSpec(tnode.id, ranked, expr, group=tnode.kind))

    return BayesianNetwork(nodes=tuple(nodes), target=topology.target_indicator)


def derive_network(
    model: abqm.QualityModel,
    goal: GoalSpec,
    selection: Selection,
    fact_indicators: dict,
    config: Optional[NPTConfig] = None,
) -> BayesianNetwork:
    """Full pipeline: topology derivation plus NPT synthesis."""
    config = config or NPTConfig()
    topo = derive_topology(model, goal, selection, fact_indicators)
    all_indicators = {spec.id: spec for spec in fact_indicators.values()}
    all_indicators[goal.activity_indicator.id] = goal.activity_indicator
    return synthesize_network(topo, config, all_indicators)


def gqm_trace(goal: GoalSpec) -> dict:
    """Goal -> question -> metric trace, with the node ids the goal binds to."""
    return {
        "goal": goal.goal,
        "question": goal.question,
        "metric": goal.activity_indicator.name,
        "target_activity": goal.target_activity,
        "target_indicator": goal.activity_indicator.id,
    }
