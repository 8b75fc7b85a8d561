"""Independent oracles the engine is checked against.

Everything here works from first principles: full joint enumeration by array
broadcasting (no factor algebra, no elimination orders) and adaptive
quadrature over raw densities (no closed forms).  Keep it that way, or the
oracle stops being independent.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from qualnet.distributions import Exponential, TNormal
from qualnet.inference import resolve_evidence
from qualnet.network import BayesianNetwork, ExplicitCPT, NodeSpec, Ranked


def joint_array(compiled, evidence=None) -> np.ndarray:
    """Full joint table over all nodes in compiled.order, evidence applied."""
    order = list(compiled.order)
    axes = {n: i for i, n in enumerate(order)}
    cards = [compiled.card(n) for n in order]
    joint = np.ones(cards)
    for n in order:
        scope = (*compiled.parents[n], n)
        cpt = compiled.cpts[n]
        by_axis = sorted(range(len(scope)), key=lambda i: axes[scope[i]])
        t = np.transpose(cpt, by_axis)
        shape = [1] * len(order)
        for i in by_axis:
            shape[axes[scope[i]]] = cpt.shape[i]
        joint = joint * t.reshape(shape)
    for node, idx in (resolve_evidence(compiled, evidence or {})).items():
        mask = np.zeros(cards[axes[node]])
        mask[idx] = 1.0
        shape = [1] * len(order)
        shape[axes[node]] = len(mask)
        joint = joint * mask.reshape(shape)
    return joint


def enum_marginals(compiled, evidence=None) -> dict:
    joint = joint_array(compiled, evidence)
    total = joint.sum()
    if total <= 0:
        raise ZeroDivisionError("evidence has probability zero")
    out = {}
    for i, node in enumerate(compiled.order):
        other = tuple(j for j in range(joint.ndim) if j != i)
        out[node] = joint.sum(axis=other) / total
    return out


def enum_max_probability(compiled, evidence=None) -> float:
    return float(joint_array(compiled, evidence).max())


def random_network(rng: np.random.Generator, max_nodes: int = 12, max_states: int = 8,
                   joint_cap: int = 300_000) -> BayesianNetwork:
    """Random DAG with random CPT columns; joint size capped for enumeration."""
    n = int(rng.integers(3, max_nodes + 1))
    cards = []
    prod = 1
    for _ in range(n):
        card = int(rng.integers(2, max_states + 1))
        if prod * card > joint_cap:
            card = 2
        cards.append(card)
        prod *= card
    nodes = []
    for i in range(n):
        n_parents = int(rng.integers(0, min(i, 3) + 1))
        parents = sorted(rng.choice(i, size=n_parents, replace=False).tolist()) if n_parents else []
        parent_ids = tuple(f"n{j}" for j in parents)
        combos = int(np.prod([cards[j] for j in parents])) if parents else 1
        raw = rng.uniform(0.05, 1.0, size=(cards[i], combos))
        table = raw / raw.sum(axis=0)
        states = tuple(f"s{k}" for k in range(cards[i]))
        midpoints = tuple((k + 1) / (cards[i] + 1) for k in range(cards[i]))
        nodes.append(NodeSpec(
            f"n{i}", Ranked(states, midpoints),
            ExplicitCPT(parents=parent_ids, table=tuple(map(tuple, table))),
        ))
    return BayesianNetwork(nodes=tuple(nodes))


def random_evidence(rng: np.random.Generator, network: BayesianNetwork) -> dict:
    evidence = {}
    for node in network.nodes:
        if rng.uniform() < 0.25:
            evidence[node.id] = node.kind.states[int(rng.integers(node.kind.card))]
    return evidence


def _pdf(dist, x: float) -> float:
    if isinstance(dist, TNormal):
        if x < dist.lower or x > dist.upper:
            return 0.0
        sd = math.sqrt(dist.variance)
        return math.exp(-0.5 * ((x - dist.mean) / sd) ** 2) / (sd * math.sqrt(2 * math.pi))
    if isinstance(dist, Exponential):
        if x < max(dist.lower, 0.0) or x > dist.upper:
            return 0.0
        return math.exp(-x / dist.mean) / dist.mean
    raise TypeError(type(dist).__name__)


def quad_masses(dist, edges) -> np.ndarray:
    """Bin masses by adaptive quadrature over the raw (unnormalized) density."""
    masses = []
    for a, b in zip(edges, edges[1:]):
        val, _ = integrate.quad(lambda x: _pdf(dist, x), a, b, epsabs=1e-13, limit=200)
        masses.append(val)
    masses = np.array(masses)
    return masses / masses.sum()


def quad_tnormal_moments(dist: TNormal) -> dict:
    z, _ = integrate.quad(lambda x: _pdf(dist, x), dist.lower, dist.upper, epsabs=1e-13, limit=200)
    m1, _ = integrate.quad(lambda x: x * _pdf(dist, x), dist.lower, dist.upper, epsabs=1e-13, limit=200)
    m2, _ = integrate.quad(lambda x: x * x * _pdf(dist, x), dist.lower, dist.upper, epsabs=1e-13, limit=200)
    mean = m1 / z
    return {"mean": mean, "variance": m2 / z - mean * mean}
