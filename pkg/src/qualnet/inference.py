"""Exact inference on compiled networks.

Marginals come from variable elimination with a min-fill ordering, so both
forward inference (observe indicators, read off activity predictions) and
backward inference (pin a target, read off the indicators) fall out of the
same machinery.  ``mpe`` runs the max-product variant with backtracking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .distributions import bin_index
from .network import CompiledNetwork, Interval, Ranked


class EvidenceError(ValueError):
    """Evidence references an unknown node, state, or out-of-range value."""


class ImpossibleEvidenceError(ValueError):
    """The observed combination has probability zero under the network."""


@dataclass(frozen=True)
class Factor:
    vars: tuple
    table: np.ndarray


def resolve_evidence(compiled: CompiledNetwork, evidence: dict) -> dict:
    """Map raw observations (state names / numeric values) to state indices."""
    resolved = {}
    for node_id, value in evidence.items():
        if node_id not in compiled.kinds:
            raise EvidenceError(f"unknown node {node_id!r}")
        kind = compiled.kinds[node_id]
        if isinstance(kind, Ranked):
            if value not in kind.states:
                raise EvidenceError(f"unknown state {value!r} for ranked node {node_id!r} (states: {kind.states})")
            resolved[node_id] = kind.states.index(value)
        else:
            try:
                numeric = float(value)
            except (TypeError, ValueError):
                raise EvidenceError(f"interval node {node_id!r} needs a numeric observation, got {value!r}")
            try:
                resolved[node_id] = bin_index(np.asarray(kind.edges), numeric)
            except ValueError as exc:
                raise EvidenceError(f"observation for {node_id!r}: {exc}")
    return resolved


def _reduced_factors(compiled: CompiledNetwork, resolved: dict) -> list:
    factors = []
    for node_id in compiled.order:
        scope = (*compiled.parents[node_id], node_id)
        table = compiled.cpts[node_id]
        keep_vars = []
        index = []
        for v in scope:
            if v in resolved:
                index.append(resolved[v])
            else:
                index.append(slice(None))
                keep_vars.append(v)
        factors.append(Factor(tuple(keep_vars), np.asarray(table[tuple(index)], dtype=float)))
    return factors


def _multiply(a: Factor, b: Factor) -> Factor:
    merged = list(a.vars) + [v for v in b.vars if v not in a.vars]
    ta = a.table.reshape(a.table.shape + (1,) * (len(merged) - len(a.vars)))
    # permute b's axes into merged order, then pad with singleton axes
    axis_order = sorted(range(len(b.vars)), key=lambda i: merged.index(b.vars[i]))
    tb = np.transpose(b.table, axis_order) if b.vars else b.table
    sorted_bvars = [b.vars[i] for i in axis_order]
    shape = []
    k = 0
    for v in merged:
        if k < len(sorted_bvars) and sorted_bvars[k] == v:
            shape.append(tb.shape[k])
            k += 1
        else:
            shape.append(1)
    tb = tb.reshape(shape)
    return Factor(tuple(merged), ta * tb)


def _min_fill_order(factors: list, eliminate: set) -> list:
    """Greedy min-fill elimination order; ties broken by node id for determinism."""
    neighbors = {}
    for f in factors:
        for v in f.vars:
            neighbors.setdefault(v, set()).update(u for u in f.vars if u != v)
    remaining = {v for v in eliminate if v in neighbors}
    order = []
    while remaining:
        best = None
        for v in sorted(remaining):
            nbrs = [u for u in neighbors.get(v, ()) if u != v]
            fill = 0
            for i in range(len(nbrs)):
                for j in range(i + 1, len(nbrs)):
                    if nbrs[j] not in neighbors.get(nbrs[i], ()):
                        fill += 1
            if best is None or fill < best[0]:
                best = (fill, v)
        _, chosen = best
        order.append(chosen)
        remaining.discard(chosen)
        nbrs = [u for u in neighbors.get(chosen, ()) if u != chosen]
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                neighbors[nbrs[i]].add(nbrs[j])
                neighbors[nbrs[j]].add(nbrs[i])
        for u in nbrs:
            neighbors[u].discard(chosen)
        neighbors.pop(chosen, None)
    # variables not appearing in any factor scope can be eliminated trivially
    order.extend(sorted(v for v in eliminate if v not in set(order)))
    return order


def _eliminate(factors: list, order: list, use_max: bool = False):
    """Sum-product (or max-product) elimination; returns remaining factors.

    With ``use_max`` the per-variable argmax tables are returned as well, for
    MPE backtracking.
    """
    factors = list(factors)
    argmax_records = []
    for var in order:
        related = [f for f in factors if var in f.vars]
        if not related:
            continue
        product = related[0]
        for f in related[1:]:
            product = _multiply(product, f)
        axis = product.vars.index(var)
        rest = tuple(v for v in product.vars if v != var)
        if use_max:
            argmax_records.append((var, rest, np.argmax(product.table, axis=axis)))
            new_table = np.max(product.table, axis=axis)
        else:
            new_table = np.sum(product.table, axis=axis)
        factors = [f for f in factors if var not in f.vars]
        factors.append(Factor(rest, new_table))
    if use_max:
        return factors, argmax_records
    return factors


def _scalar_product(factors: list) -> float:
    out = 1.0
    for f in factors:
        if f.table.ndim != 0:  # pragma: no cover - full elimination leaves scalars
            raise RuntimeError(f"residual factor over {f.vars} after full elimination")
        out *= float(f.table)
    return out


@dataclass(frozen=True)
class Summary:
    mean: float
    sd: float
    mode_bin: int
    mode_tied: bool = False


@dataclass(frozen=True)
class Posterior:
    """Per-node posterior vectors plus summaries for interval nodes."""

    marginals: dict
    summaries: dict
    fingerprint: str

    def vector(self, node_id: str) -> np.ndarray:
        return self.marginals[node_id]

    def summary(self, node_id: str) -> Summary:
        return self.summaries[node_id]


def summarize(vector: np.ndarray, kind: Interval) -> Summary:
    """Mean / sd / mode-bin of an interval-node posterior from bin midpoints."""
    if not isinstance(kind, Interval):
        raise TypeError("summaries are only defined for interval nodes")
    mids = kind.midpoints()
    vec = np.asarray(vector, dtype=float)
    mean = float(np.dot(vec, mids))
    var = float(np.dot(vec, mids**2) - mean**2)
    sd = math.sqrt(max(var, 0.0))
    mode = int(np.argmax(vec))
    tied = bool(np.sum(np.isclose(vec, vec[mode], rtol=0.0, atol=1e-12)) > 1)
    return Summary(mean=mean, sd=sd, mode_bin=mode, mode_tied=tied)


def infer(compiled: CompiledNetwork, evidence: Optional[dict] = None) -> Posterior:
    """Exact posterior marginals for every node given the evidence."""
    resolved = resolve_evidence(compiled, evidence or {})
    base = _reduced_factors(compiled, resolved)

    # probability of the evidence itself; also the normalization constant
    z = _scalar_product(_eliminate(base, _min_fill_order(base, {v for f in base for v in f.vars})))
    if z <= 0.0 or math.isnan(z):
        raise ImpossibleEvidenceError(f"evidence {dict(evidence or {})} has probability zero")

    marginals = {}
    for node_id in compiled.order:
        card = compiled.card(node_id)
        if node_id in resolved:
            vec = np.zeros(card)
            vec[resolved[node_id]] = 1.0
        else:
            others = {v for f in base for v in f.vars} - {node_id}
            remaining = _eliminate(base, _min_fill_order(base, others))
            vec = np.ones(card)
            for f in remaining:
                if f.vars == (node_id,):
                    vec = vec * f.table
                elif f.vars == ():
                    vec = vec * float(f.table)
                else:  # pragma: no cover - elimination always reduces to query scope
                    raise RuntimeError(f"unexpected residual factor over {f.vars}")
            total = vec.sum()
            if total <= 0.0:
                raise ImpossibleEvidenceError(f"evidence {dict(evidence or {})} has probability zero")
            vec = vec / total
        marginals[node_id] = vec

    summaries = {
        node_id: summarize(marginals[node_id], kind)
        for node_id, kind in compiled.kinds.items()
        if isinstance(kind, Interval)
    }
    return Posterior(marginals=marginals, summaries=summaries, fingerprint=compiled.fingerprint)


def mpe(compiled: CompiledNetwork, evidence: Optional[dict] = None) -> dict:
    """Most probable full assignment consistent with the evidence.

    Max-product elimination with backtracking; ties resolve to the lowest
    state index at each elimination step.
    """
    resolved = resolve_evidence(compiled, evidence or {})
    base = _reduced_factors(compiled, resolved)
    free = {v for f in base for v in f.vars}
    order = _min_fill_order(base, free)
    remaining, records = _eliminate(base, order, use_max=True)
    best = _scalar_product(remaining)
    if best <= 0.0 or math.isnan(best):
        raise ImpossibleEvidenceError(f"evidence {dict(evidence or {})} has probability zero")

    assignment_idx = dict(resolved)
    for var, rest, argmax_table in reversed(records):
        idx = tuple(assignment_idx[v] for v in rest)
        assignment_idx[var] = int(argmax_table[idx] if rest else argmax_table)

    out = {}
    for node_id in compiled.order:
        kind = compiled.kinds[node_id]
        idx = assignment_idx[node_id]
        out[node_id] = kind.states[idx] if isinstance(kind, Ranked) else compiled.states(node_id)[idx]
    return out


def joint_probability(compiled: CompiledNetwork, assignment: dict) -> float:
    """Probability of one full assignment (state names / bin labels)."""
    idx = {}
    for node_id in compiled.order:
        kind = compiled.kinds[node_id]
        states = kind.states if isinstance(kind, Ranked) else compiled.states(node_id)
        idx[node_id] = list(states).index(assignment[node_id])
    p = 1.0
    for node_id in compiled.order:
        coords = tuple(idx[v] for v in (*compiled.parents[node_id], node_id))
        p *= float(compiled.cpts[node_id][coords])
    return p
