"""Network node specifications and compilation into conditional probability tables.

A :class:`BayesianNetwork` is a list of typed nodes, each carrying an
expression that generates its node probability table.  ``compile_network``
expands every expression into a dense CPT (one probability column per parent
state combination) and returns an immutable :class:`CompiledNetwork` ready for
exact inference.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .distributions import TNormal, discretize

DEFAULT_STATES = ("low", "medium", "high")
DEFAULT_MIDPOINTS = (1.0 / 6.0, 0.5, 5.0 / 6.0)

COLUMN_TOL = 1e-9


class NetworkError(ValueError):
    """Structural problem in a network definition (cycle, bad expression...)."""


@dataclass(frozen=True)
class Ranked:
    """Ordered discrete scale; midpoints are the numeric stand-ins on [0, 1]."""

    states: tuple = DEFAULT_STATES
    midpoints: tuple = DEFAULT_MIDPOINTS

    def __post_init__(self) -> None:
        if len(self.states) != len(self.midpoints) or len(self.states) < 2:
            raise ValueError("ranked kind needs >= 2 states with one midpoint each")
        mids = list(self.midpoints)
        if mids != sorted(mids) or len(set(mids)) != len(mids):
            raise ValueError("midpoints must be strictly increasing")
        if mids[0] < 0.0 or mids[-1] > 1.0:
            raise ValueError("midpoints must lie inside [0, 1]")

    @property
    def card(self) -> int:
        return len(self.states)

    def edges(self) -> np.ndarray:
        """Bin edges on [0, 1] centered between adjacent midpoints."""
        inner = [(a + b) / 2.0 for a, b in zip(self.midpoints, self.midpoints[1:])]
        return np.array([0.0, *inner, 1.0])


@dataclass(frozen=True)
class Interval:
    """Numeric scale split into bins by strictly increasing edges."""

    edges: tuple
    unit: str = ""

    def __post_init__(self) -> None:
        e = list(self.edges)
        if len(e) < 2 or e != sorted(e) or len(set(e)) != len(e):
            raise ValueError("interval edges must be strictly increasing, >= 2 values")

    @property
    def card(self) -> int:
        return len(self.edges) - 1

    def midpoints(self) -> np.ndarray:
        e = np.asarray(self.edges, dtype=float)
        return (e[:-1] + e[1:]) / 2.0


NodeKind = Union[Ranked, Interval]


@dataclass(frozen=True)
class Uniform:
    """Equal probability for every state or bin; used for parentless nodes."""


@dataclass(frozen=True)
class WeightedMean:
    """TNormal around the weighted average of ranked parent midpoints.

    ``parents`` holds (node id, weight, polarity) triples; a "negative"
    polarity parent contributes (1 - midpoint) so that it pushes the child in
    the opposite direction.
    """

    parents: tuple  # of (node_id, weight, polarity)
    variance: float = 0.001

    def __post_init__(self) -> None:
        if not self.parents:
            raise ValueError("WeightedMean needs at least one parent")
        for _, weight, polarity in self.parents:
            if weight <= 0:
                raise ValueError(f"weight must be > 0, got {weight}")
            if polarity not in ("positive", "negative"):
                raise ValueError(f"polarity must be positive/negative, got {polarity!r}")
        if self.variance <= 0:
            raise ValueError("variance must be > 0")

    def parent_ids(self) -> tuple:
        return tuple(p for p, _, _ in self.parents)


@dataclass(frozen=True)
class Partitioned:
    """One distribution per parent state, discretized over the child's bins."""

    parent: str
    table: dict  # parent state name -> Distribution

    def parent_ids(self) -> tuple:
        return (self.parent,)


@dataclass(frozen=True)
class Arithmetic:
    """Deterministic linear response to the parent midpoint plus TNormal noise."""

    parent: str
    offset: float
    scale: float
    variance: float

    def parent_ids(self) -> tuple:
        return (self.parent,)


@dataclass(frozen=True)
class ExplicitCPT:
    """Fully spelled-out table: one probability column per parent combination.

    ``table`` has shape (child_card, n_parent_combinations) with parent
    combinations enumerated in row-major order over ``parents``.
    """

    parents: tuple
    table: tuple  # nested tuples, rows = child states

    def parent_ids(self) -> tuple:
        return tuple(self.parents)


Expression = Union[Uniform, WeightedMean, Partitioned, Arithmetic, ExplicitCPT]


@dataclass(frozen=True)
class NodeSpec:
    id: str
    kind: NodeKind
    expression: Expression
    group: Optional[str] = None  # activity / fact / indicator, for UI grouping


def _parent_ids(expr: Expression) -> tuple:
    if isinstance(expr, Uniform):
        return ()
    return expr.parent_ids()


@dataclass(frozen=True)
class BayesianNetwork:
    nodes: tuple
    target: Optional[str] = None

    def __post_init__(self) -> None:
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise NetworkError(f"duplicate node ids: {dup}")

    def node(self, node_id: str) -> NodeSpec:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def parents(self, node_id: str) -> tuple:
        return _parent_ids(self.node(node_id).expression)


def topological_order(network: BayesianNetwork) -> list:
    """Node ids parents-first; raises NetworkError on cycles or dangling parents."""
    ids = [n.id for n in network.nodes]
    known = set(ids)
    deps = {}
    for n in network.nodes:
        parents = _parent_ids(n.expression)
        missing = [p for p in parents if p not in known]
        if missing:
            raise NetworkError(f"node {n.id!r} references unknown parents {missing}")
        deps[n.id] = set(parents)

    order: list = []
    ready = sorted(i for i in ids if not deps[i])
    deps = {i: set(d) for i, d in deps.items()}
    children = {i: [] for i in ids}
    for i in ids:
        for p in deps[i]:
            children[p].append(i)
    while ready:
        nxt = ready.pop(0)
        order.append(nxt)
        for child in children[nxt]:
            deps[child].discard(nxt)
            if not deps[child]:
                # keep insertion deterministic
                ready.append(child)
                ready.sort()
    if len(order) != len(ids):
        stuck = sorted(set(ids) - set(order))
        raise NetworkError(f"cycle detected involving nodes {stuck}")
    return order


@dataclass(frozen=True)
class CompiledNetwork:
    """Topologically ordered nodes with dense CPTs, immutable after compilation.

    ``cpts[i]`` has shape (*parent cards, child card); every column along the
    last axis sums to one within 1e-9.
    """

    order: tuple
    kinds: dict
    groups: dict
    parents: dict
    cpts: dict
    target: Optional[str] = None
    fingerprint: str = field(default="")

    def card(self, node_id: str) -> int:
        return self.kinds[node_id].card

    def states(self, node_id: str):
        kind = self.kinds[node_id]
        if isinstance(kind, Ranked):
            return list(kind.states)
        return [f"[{a:g}, {b:g})" for a, b in zip(kind.edges, kind.edges[1:])]

    def is_interval(self, node_id: str) -> bool:
        return isinstance(self.kinds[node_id], Interval)


def _child_edges(kind: NodeKind) -> np.ndarray:
    if isinstance(kind, Ranked):
        return kind.edges()
    return np.asarray(kind.edges, dtype=float)


def _ranked_midpoint(kind: NodeKind, state_index: int, polarity: str = "positive") -> float:
    if not isinstance(kind, Ranked):
        raise NetworkError("WeightedMean/Arithmetic parents must be ranked nodes")
    mid = kind.midpoints[state_index]
    return 1.0 - mid if polarity == "negative" else mid


def _compile_node(node: NodeSpec, kinds: dict) -> np.ndarray:
    expr = node.expression
    child_card = node.kind.card

    if isinstance(expr, Uniform):
        return np.full((child_card,), 1.0 / child_card)

    if isinstance(expr, WeightedMean):
        parent_kinds = [kinds[p] for p in expr.parent_ids()]
        cards = [k.card for k in parent_kinds]
        edges = _child_edges(node.kind)
        if not isinstance(node.kind, Ranked):
            raise NetworkError(f"WeightedMean child {node.id!r} must be a ranked node")
        total_weight = sum(w for _, w, _ in expr.parents)
        cpt = np.empty((*cards, child_card))
        for combo in itertools.product(*(range(c) for c in cards)):
            acc = 0.0
            for ((_, weight, polarity), kind, idx) in zip(expr.parents, parent_kinds, combo):
                acc += weight * _ranked_midpoint(kind, idx, polarity)
            mean = acc / total_weight
            cpt[combo] = discretize(TNormal(mean, expr.variance, 0.0, 1.0), edges)
        return cpt

    if isinstance(expr, Partitioned):
        parent_kind = kinds[expr.parent]
        if not isinstance(parent_kind, Ranked):
            raise NetworkError(f"Partitioned parent of {node.id!r} must be a ranked node")
        missing = [s for s in parent_kind.states if s not in expr.table]
        extra = [s for s in expr.table if s not in parent_kind.states]
        if missing or extra:
            raise NetworkError(
                f"Partitioned table of {node.id!r} must cover every parent state exactly "
                f"once (missing {missing}, unknown {extra})"
            )
        edges = _child_edges(node.kind)
        cpt = np.empty((parent_kind.card, child_card))
        for i, state in enumerate(parent_kind.states):
            cpt[i] = discretize(expr.table[state], edges)
        return cpt

    if isinstance(expr, Arithmetic):
        parent_kind = kinds[expr.parent]
        edges = _child_edges(node.kind)
        cpt = np.empty((parent_kind.card, child_card))
        for i in range(parent_kind.card):
            mean = expr.offset + expr.scale * _ranked_midpoint(parent_kind, i)
            cpt[i] = discretize(TNormal(mean, expr.variance, edges[0], edges[-1]), edges)
        return cpt

    if isinstance(expr, ExplicitCPT):
        cards = [kinds[p].card for p in expr.parents]
        table = np.asarray(expr.table, dtype=float)
        n_combos = int(np.prod(cards)) if cards else 1
        if table.shape != (child_card, n_combos):
            raise NetworkError(
                f"explicit CPT of {node.id!r} must have shape ({child_card}, {n_combos}), got {table.shape}"
            )
        sums = table.sum(axis=0)
        if np.any(np.abs(sums - 1.0) > COLUMN_TOL):
            raise NetworkError(f"explicit CPT of {node.id!r} has columns not summing to 1: {sums}")
        # columns indexed row-major over parents -> reshape to (*cards, child)
        return table.T.reshape(*cards, child_card)

    raise NetworkError(f"unknown expression type {type(expr).__name__}")


def compile_network(network: BayesianNetwork) -> CompiledNetwork:
    """Expand every node expression into a CPT; verifies acyclicity and columns."""
    order = topological_order(network)
    kinds = {n.id: n.kind for n in network.nodes}
    groups = {n.id: n.group for n in network.nodes}
    parents = {n.id: _parent_ids(n.expression) for n in network.nodes}
    cpts = {}
    for node in network.nodes:
        cpt = _compile_node(node, kinds)
        sums = cpt.sum(axis=-1)
        if np.any(np.abs(sums - 1.0) > COLUMN_TOL):
            raise NetworkError(f"CPT of {node.id!r} has columns not summing to 1")
        cpts[node.id] = cpt
    fingerprint = "|".join(f"{i}:{kinds[i].card}" for i in order)
    return CompiledNetwork(
        order=tuple(order),
        kinds=kinds,
        groups=groups,
        parents=parents,
        cpts=cpts,
        target=network.target,
        fingerprint=fingerprint,
    )
