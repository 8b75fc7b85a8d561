"""Versioned document formats.

All documents are canonical JSON: fixed key order, two-space indent, one
trailing newline.  Serializing twice yields identical bytes, and every parser
rejects unknown fields so files cannot silently drift from the schema.

Formats: ``abqm-v1`` quality models, ``goal-v1`` goal documents, ``bnet-v1``
networks, ``scen-v1`` scenarios, plus posterior/report exports and the
delimiter-separated matrix view.
"""

from __future__ import annotations

import csv
import io
import json

from .abqm import Activity, Attribute, Entity, Fact, Impact, QualityModel
from .distributions import Distribution, Exponential, PointMass, TNormal, UniformContinuous
from .inference import Posterior
from .netgen import GoalSpec, IndicatorSpec, NPTConfig, Selection
from .network import (
    Arithmetic,
    BayesianNetwork,
    CompiledNetwork,
    ExplicitCPT,
    Interval,
    NodeSpec,
    Partitioned,
    Ranked,
    Uniform,
    WeightedMean,
)


class ParseError(ValueError):
    """Malformed document; carries a human-readable position when available."""


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _loads(text: str, expected_format: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(doc, dict):
        raise ParseError("document root must be an object")
    if doc.get("format") != expected_format:
        raise ParseError(f"expected format {expected_format!r}, got {doc.get('format')!r}")
    return doc


def _take(obj: dict, context: str, required, optional=()) -> dict:
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise ParseError(f"{context}: unknown fields {unknown}")
    missing = sorted(set(required) - set(obj))
    if missing:
        raise ParseError(f"{context}: missing fields {missing}")
    return obj


def _floats(values) -> list:
    return [float(v) for v in values]


# ---------------------------------------------------------------------------
# abqm-v1 quality models
# ---------------------------------------------------------------------------

def serialize_model(model: QualityModel) -> str:
    def entity(e: Entity) -> dict:
        d = {"id": e.id, "name": e.name}
        if e.parent is not None:
            d["parent"] = e.parent
            d["relation"] = e.relation
        return d

    def attribute(a: Attribute) -> dict:
        d = {"id": a.id, "name": a.name}
        if a.description:
            d["description"] = a.description
        return d

    def fact(f: Fact) -> dict:
        d = {"id": f.id, "entity": f.entity, "attribute": f.attribute}
        if f.description:
            d["description"] = f.description
        if f.assessment_note:
            d["assessment_note"] = f.assessment_note
        return d

    def activity(a: Activity) -> dict:
        d = {"id": a.id, "name": a.name}
        if a.parent is not None:
            d["parent"] = a.parent
        return d

    def impact(i: Impact) -> dict:
        d = {"fact": i.fact, "activity": i.activity, "sign": i.sign}
        if i.justification:
            d["justification"] = i.justification
        return d

    return dumps({
        "format": "abqm-v1",
        "entities": [entity(e) for e in model.entities],
        "attributes": [attribute(a) for a in model.attributes],
        "facts": [fact(f) for f in model.facts],
        "activities": [activity(a) for a in model.activities],
        "impacts": [impact(i) for i in model.impacts],
    })


def parse_model(text: str) -> QualityModel:
    doc = _loads(text, "abqm-v1")
    _take(doc, "model", ["format", "entities", "attributes", "facts", "activities", "impacts"])

    entities = []
    for raw in doc["entities"]:
        _take(raw, f"entity {raw.get('id')!r}", ["id", "name"], ["parent", "relation"])
        entities.append(Entity(raw["id"], raw["name"], raw.get("parent"), raw.get("relation")))
    attributes = []
    for raw in doc["attributes"]:
        _take(raw, f"attribute {raw.get('id')!r}", ["id", "name"], ["description"])
        attributes.append(Attribute(raw["id"], raw["name"], raw.get("description", "")))
    facts = []
    for raw in doc["facts"]:
        _take(raw, f"fact {raw.get('id')!r}", ["id", "entity", "attribute"],
              ["description", "assessment_note"])
        facts.append(Fact(raw["id"], raw["entity"], raw["attribute"],
                          raw.get("description", ""), raw.get("assessment_note", "")))
    activities = []
    for raw in doc["activities"]:
        _take(raw, f"activity {raw.get('id')!r}", ["id", "name"], ["parent"])
        activities.append(Activity(raw["id"], raw["name"], raw.get("parent")))
    impacts = []
    for raw in doc["impacts"]:
        _take(raw, "impact", ["fact", "activity", "sign"], ["justification"])
        impacts.append(Impact(raw["fact"], raw["activity"], raw["sign"], raw.get("justification", "")))

    model = QualityModel(tuple(entities), tuple(attributes), tuple(facts),
                         tuple(activities), tuple(impacts))
    _check_model_references(model)
    return model


def _check_model_references(model: QualityModel) -> None:
    """Duplicate ids and dangling references are parse errors, not findings."""
    for label, items in (("entity", model.entities), ("attribute", model.attributes),
                         ("fact", model.facts), ("activity", model.activities)):
        ids = [i.id for i in items]
        dups = sorted({i for i in ids if ids.count(i) > 1})
        if dups:
            raise ParseError(f"duplicate {label} id(s): {dups}")
    entity_ids = {e.id for e in model.entities}
    attribute_ids = {a.id for a in model.attributes}
    fact_ids = {f.id for f in model.facts}
    activity_ids = {a.id for a in model.activities}
    for e in model.entities:
        if e.parent is not None and e.parent not in entity_ids:
            raise ParseError(f"entity {e.id!r} references unknown parent {e.parent!r}")
    for a in model.activities:
        if a.parent is not None and a.parent not in activity_ids:
            raise ParseError(f"activity {a.id!r} references unknown parent {a.parent!r}")
    for f in model.facts:
        if f.entity not in entity_ids:
            raise ParseError(f"fact {f.id!r} references unknown entity {f.entity!r}")
        if f.attribute not in attribute_ids:
            raise ParseError(f"fact {f.id!r} references unknown attribute {f.attribute!r}")
    for imp in model.impacts:
        if imp.fact not in fact_ids:
            raise ParseError(f"impact references unknown fact {imp.fact!r}")
        if imp.activity not in activity_ids:
            raise ParseError(f"impact references unknown activity {imp.activity!r}")


# ---------------------------------------------------------------------------
# distributions and indicators (shared by goal-v1 and bnet-v1)
# ---------------------------------------------------------------------------

def _distribution_doc(dist: Distribution) -> dict:
    if isinstance(dist, TNormal):
        return {"type": "tnormal", "mean": dist.mean, "variance": dist.variance,
                "lower": dist.lower, "upper": dist.upper}
    if isinstance(dist, Exponential):
        return {"type": "exponential", "mean": dist.mean, "lower": dist.lower, "upper": dist.upper}
    if isinstance(dist, PointMass):
        return {"type": "point", "value": dist.value}
    if isinstance(dist, UniformContinuous):
        return {"type": "uniform", "lower": dist.lower, "upper": dist.upper}
    raise TypeError(f"unknown distribution {type(dist).__name__}")


def _parse_distribution(raw: dict) -> Distribution:
    kind = raw.get("type")
    if kind == "tnormal":
        _take(raw, "tnormal", ["type", "mean", "variance", "lower", "upper"])
        return TNormal(float(raw["mean"]), float(raw["variance"]), float(raw["lower"]), float(raw["upper"]))
    if kind == "exponential":
        _take(raw, "exponential", ["type", "mean", "lower", "upper"])
        return Exponential(float(raw["mean"]), float(raw["lower"]), float(raw["upper"]))
    if kind == "point":
        _take(raw, "point", ["type", "value"])
        return PointMass(float(raw["value"]))
    if kind == "uniform":
        _take(raw, "uniform", ["type", "lower", "upper"])
        return UniformContinuous(float(raw["lower"]), float(raw["upper"]))
    raise ParseError(f"unknown distribution type {kind!r}")


def _indicator_doc(spec: IndicatorSpec) -> dict:
    if isinstance(spec.npt, Arithmetic):
        npt = {"type": "arithmetic", "offset": spec.npt.offset, "scale": spec.npt.scale,
               "variance": spec.npt.variance}
    elif isinstance(spec.npt, dict):
        npt = {"type": "partitioned",
               "table": {state: _distribution_doc(d) for state, d in spec.npt.items()}}
    else:
        raise TypeError(f"indicator {spec.id!r} has unsupported npt {type(spec.npt).__name__}")
    return {"id": spec.id, "name": spec.name, "attached_to": spec.attached_to,
            "scale": _floats(spec.scale), "unit": spec.unit, "polarity": spec.polarity,
            "npt": npt}


def _parse_indicator(raw: dict) -> IndicatorSpec:
    _take(raw, f"indicator {raw.get('id')!r}",
          ["id", "name", "attached_to", "scale", "unit", "polarity", "npt"])
    npt_raw = raw["npt"]
    if npt_raw.get("type") == "arithmetic":
        _take(npt_raw, "arithmetic npt", ["type", "offset", "scale", "variance"])
        npt = Arithmetic(parent=raw["attached_to"], offset=float(npt_raw["offset"]),
                         scale=float(npt_raw["scale"]), variance=float(npt_raw["variance"]))
    elif npt_raw.get("type") == "partitioned":
        _take(npt_raw, "partitioned npt", ["type", "table"])
        npt = {state: _parse_distribution(d) for state, d in npt_raw["table"].items()}
    else:
        raise ParseError(f"indicator {raw.get('id')!r}: unknown npt type {npt_raw.get('type')!r}")
    return IndicatorSpec(
        id=raw["id"], name=raw["name"], attached_to=raw["attached_to"],
        scale=tuple(_floats(raw["scale"])), unit=raw["unit"], polarity=raw["polarity"], npt=npt,
    )


# ---------------------------------------------------------------------------
# goal-v1 goal documents
# ---------------------------------------------------------------------------

def serialize_goal_document(goal: GoalSpec, selection: Selection,
                            fact_indicators: dict, config: NPTConfig) -> str:
    return dumps({
        "format": "goal-v1",
        "goal": goal.goal,
        "question": goal.question,
        "target_activity": goal.target_activity,
        "activity_indicator": _indicator_doc(goal.activity_indicator),
        "selection": {
            "activities": list(selection.activities),
            "facts": list(selection.facts),
        },
        "fact_indicators": {fid: _indicator_doc(spec)
                            for fid, spec in sorted(fact_indicators.items())},
        "npt_config": {
            "ranked_states": list(config.ranked_states),
            "state_midpoints": _floats(config.state_midpoints),
            "activity_variance": config.activity_variance,
            "fact_prior": config.fact_prior,
            "impact_weights": [
                {"fact": fact, "activity": activity, "weight": weight}
                for (fact, activity), weight in sorted(config.impact_weights.items())
            ],
        },
    })


def parse_goal_document(text: str):
    doc = _loads(text, "goal-v1")
    _take(doc, "goal document",
          ["format", "goal", "question", "target_activity", "activity_indicator",
           "selection", "fact_indicators", "npt_config"])
    sel_raw = _take(doc["selection"], "selection", ["activities", "facts"])
    cfg_raw = _take(doc["npt_config"], "npt_config",
                    ["ranked_states", "state_midpoints", "activity_variance",
                     "fact_prior", "impact_weights"])
    goal = GoalSpec(
        goal=doc["goal"], question=doc["question"], target_activity=doc["target_activity"],
        activity_indicator=_parse_indicator(doc["activity_indicator"]),
    )
    selection = Selection(activities=tuple(sel_raw["activities"]), facts=tuple(sel_raw["facts"]))
    fact_indicators = {fid: _parse_indicator(raw) for fid, raw in doc["fact_indicators"].items()}
    config = NPTConfig(
        ranked_states=tuple(cfg_raw["ranked_states"]),
        state_midpoints=tuple(_floats(cfg_raw["state_midpoints"])),
        activity_variance=float(cfg_raw["activity_variance"]),
        fact_prior=cfg_raw["fact_prior"],
        impact_weights={(w["fact"], w["activity"]): float(w["weight"])
                        for w in cfg_raw["impact_weights"]},
    )
    return goal, selection, fact_indicators, config


# ---------------------------------------------------------------------------
# bnet-v1 networks
# ---------------------------------------------------------------------------

def _kind_doc(kind) -> dict:
    if isinstance(kind, Ranked):
        return {"type": "ranked", "states": list(kind.states), "midpoints": _floats(kind.midpoints)}
    return {"type": "interval", "edges": _floats(kind.edges), "unit": kind.unit}


def _parse_kind(raw: dict):
    if raw.get("type") == "ranked":
        _take(raw, "ranked kind", ["type", "states", "midpoints"])
        return Ranked(tuple(raw["states"]), tuple(_floats(raw["midpoints"])))
    if raw.get("type") == "interval":
        _take(raw, "interval kind", ["type", "edges", "unit"])
        return Interval(tuple(_floats(raw["edges"])), raw["unit"])
    raise ParseError(f"unknown node kind {raw.get('type')!r}")


def _expression_doc(expr) -> dict:
    if isinstance(expr, Uniform):
        return {"type": "uniform"}
    if isinstance(expr, WeightedMean):
        return {"type": "weighted_mean",
                "parents": [{"node": n, "weight": w, "polarity": p} for n, w, p in expr.parents],
                "variance": expr.variance}
    if isinstance(expr, Partitioned):
        return {"type": "partitioned", "parent": expr.parent,
                "table": {state: _distribution_doc(d) for state, d in expr.table.items()}}
    if isinstance(expr, Arithmetic):
        return {"type": "arithmetic", "parent": expr.parent, "offset": expr.offset,
                "scale": expr.scale, "variance": expr.variance}
    if isinstance(expr, ExplicitCPT):
        return {"type": "explicit", "parents": list(expr.parents),
                "table": [list(row) for row in expr.table]}
    raise TypeError(f"unknown expression {type(expr).__name__}")


def _parse_expression(raw: dict):
    kind = raw.get("type")
    if kind == "uniform":
        _take(raw, "uniform expression", ["type"])
        return Uniform()
    if kind == "weighted_mean":
        _take(raw, "weighted_mean expression", ["type", "parents", "variance"])
        parents = tuple((p["node"], float(p["weight"]), p["polarity"]) for p in raw["parents"])
        return WeightedMean(parents=parents, variance=float(raw["variance"]))
    if kind == "partitioned":
        _take(raw, "partitioned expression", ["type", "parent", "table"])
        return Partitioned(parent=raw["parent"],
                           table={state: _parse_distribution(d) for state, d in raw["table"].items()})
    if kind == "arithmetic":
        _take(raw, "arithmetic expression", ["type", "parent", "offset", "scale", "variance"])
        return Arithmetic(parent=raw["parent"], offset=float(raw["offset"]),
                          scale=float(raw["scale"]), variance=float(raw["variance"]))
    if kind == "explicit":
        _take(raw, "explicit expression", ["type", "parents", "table"])
        return ExplicitCPT(parents=tuple(raw["parents"]),
                           table=tuple(tuple(float(x) for x in row) for row in raw["table"]))
    raise ParseError(f"unknown expression type {kind!r}")


def serialize_network(network: BayesianNetwork) -> str:
    doc = {"format": "bnet-v1"}
    if network.target is not None:
        doc["target"] = network.target
    doc["nodes"] = [
        {"id": n.id, "group": n.group, "kind": _kind_doc(n.kind),
         "expression": _expression_doc(n.expression)}
        for n in network.nodes
    ]
    return dumps(doc)


def parse_network(text: str) -> BayesianNetwork:
    doc = _loads(text, "bnet-v1")
    _take(doc, "network", ["format", "nodes"], ["target"])
    nodes = []
    for raw in doc["nodes"]:
        _take(raw, f"node {raw.get('id')!r}", ["id", "group", "kind", "expression"])
        nodes.append(NodeSpec(
            id=raw["id"], kind=_parse_kind(raw["kind"]),
            expression=_parse_expression(raw["expression"]), group=raw["group"],
        ))
    return BayesianNetwork(nodes=tuple(nodes), target=doc.get("target"))


# ---------------------------------------------------------------------------
# scen-v1 scenarios
# ---------------------------------------------------------------------------

def serialize_scenario(scenario) -> str:
    return dumps({
        "format": "scen-v1",
        "name": scenario.name,
        "observations": [{"node": node, "value": value}
                         for node, value in scenario.observations.items()],
    })


def parse_scenario(text: str):
    from .scenarios import Scenario

    doc = _loads(text, "scen-v1")
    _take(doc, "scenario", ["format", "name", "observations"])
    observations = {}
    for raw in doc["observations"]:
        _take(raw, "observation", ["node", "value"])
        value = raw["value"]
        observations[raw["node"]] = value if isinstance(value, str) else float(value)
    return Scenario(name=doc["name"], observations=observations)


# ---------------------------------------------------------------------------
# result exports
# ---------------------------------------------------------------------------

def posterior_doc(compiled: CompiledNetwork, posterior: Posterior) -> dict:
    nodes = []
    for node_id in compiled.order:
        entry = {"id": node_id, "states": compiled.states(node_id),
                 "probabilities": _floats(posterior.marginals[node_id])}
        if node_id in posterior.summaries:
            s = posterior.summaries[node_id]
            entry["summary"] = {"mean": s.mean, "sd": s.sd,
                                "mode_bin": s.mode_bin, "mode_tied": s.mode_tied}
        nodes.append(entry)
    return {"format": "posterior-v1", "nodes": nodes}


def serialize_posterior(compiled: CompiledNetwork, posterior: Posterior) -> str:
    return dumps(posterior_doc(compiled, posterior))


def scenario_result_doc(compiled: CompiledNetwork, result) -> dict:
    doc = {"format": "scenresult-v1", "scenario": result.scenario, "target": result.target}
    if result.target_summary is not None:
        s = result.target_summary
        doc["summary"] = {"mean": s.mean, "sd": s.sd, "mode_bin": s.mode_bin,
                          "mode_tied": s.mode_tied}
    doc["posterior"] = posterior_doc(compiled, result.posterior)
    return doc


def comparison_doc(comparison) -> dict:
    deltas = []
    for node_id, delta in comparison.deltas.items():
        entry = {"id": node_id, "probabilities": _floats(delta.vector)}
        if delta.mean is not None:
            entry["mean"] = delta.mean
            entry["sd"] = delta.sd
        deltas.append(entry)
    return {"format": "compare-v1", "first": comparison.first, "second": comparison.second,
            "deltas": deltas}


def goal_seek_doc(report) -> dict:
    nodes = []
    for node_id, rep in report.reports.items():
        entry = {"id": node_id}
        if "mean" in rep:
            entry.update({"mean": rep["mean"], "sd": rep["sd"], "mode_bin": rep["mode_bin"]})
        else:
            entry.update({"probabilities": _floats(rep["vector"]), "mode_state": rep["mode_state"]})
        nodes.append(entry)
    return {"format": "goalseek-v1", "target": report.target, "desired": report.desired,
            "nodes": nodes}


def sensitivity_doc(report) -> dict:
    return {"format": "sensitivity-v1", "target": report.target,
            "entries": [{"node": e.node, "swing": e.swing, "low": e.low, "high": e.high}
                        for e in report.entries]}


def matrix_csv(rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerows(rows)
    return out.getvalue()


def _csv(rows) -> str:
    out = io.StringIO()
    csv.writer(out, lineterminator="\n").writerows(rows)
    return out.getvalue()


def sensitivity_csv(report) -> str:
    rows = [["rank", "node", "swing", "low", "high"]]
    rows.extend([i, e.node, e.swing, e.low, e.high]
                for i, e in enumerate(report.entries, start=1))
    return _csv(rows)


def comparison_csv(comparison) -> str:
    rows = [["node", "delta_mean", "delta_sd", "max_abs_delta_p"]]
    for node_id, delta in comparison.deltas.items():
        rows.append([node_id,
                     "" if delta.mean is None else delta.mean,
                     "" if delta.sd is None else delta.sd,
                     max(abs(float(x)) for x in delta.vector)])
    return _csv(rows)


def goal_seek_csv(report) -> str:
    rows = [["node", "mean", "sd", "mode"]]
    for node_id, rep in report.reports.items():
        if "mean" in rep:
            rows.append([node_id, rep["mean"], rep["sd"], rep["mode_bin"]])
        else:
            rows.append([node_id, "", "", rep["mode_state"]])
    return _csv(rows)
