"""Activity-based quality models: facts, activities, signed impacts.

A quality model holds two rooted trees (entities and activities), a set of
facts (entity + attribute pairs), and signed impacts from facts onto
activities.  Models are immutable; every operation returns fresh values, so
they are safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional


class ModelError(ValueError):
    """A quality model failed a hard precondition (e.g. does not validate)."""


@dataclass(frozen=True)
class Entity:
    id: str
    name: str
    parent: Optional[str] = None
    relation: Optional[str] = None  # "part-of" | "is-a", present iff parent is

    def __post_init__(self) -> None:
        if (self.parent is None) != (self.relation is None):
            raise ValueError(f"entity {self.id!r}: relation must be present iff parent is")
        if self.relation is not None and self.relation not in ("part-of", "is-a"):
            raise ValueError(f"entity {self.id!r}: relation must be part-of or is-a")


@dataclass(frozen=True)
class Attribute:
    id: str
    name: str
    description: str = ""


@dataclass(frozen=True)
class Fact:
    """An assessable (entity, attribute) pair, e.g. [module | extent]."""

    id: str
    entity: str
    attribute: str
    description: str = ""
    assessment_note: str = ""


@dataclass(frozen=True)
class Activity:
    id: str
    name: str
    parent: Optional[str] = None


@dataclass(frozen=True)
class Impact:
    fact: str
    activity: str
    sign: str  # "+" | "-"
    justification: str = ""

    def __post_init__(self) -> None:
        if self.sign not in ("+", "-"):
            raise ValueError(f"impact sign must be '+' or '-', got {self.sign!r}")


@dataclass(frozen=True)
class QualityModel:
    entities: tuple = ()
    attributes: tuple = ()
    facts: tuple = ()
    activities: tuple = ()
    impacts: tuple = ()

    def entity(self, entity_id: str) -> Entity:
        return _by_id(self.entities, entity_id, "entity")

    def fact(self, fact_id: str) -> Fact:
        return _by_id(self.facts, fact_id, "fact")

    def activity(self, activity_id: str) -> Activity:
        return _by_id(self.activities, activity_id, "activity")

    def activity_children(self, activity_id: str) -> list:
        return [a for a in self.activities if a.parent == activity_id]

    def impacts_on(self, activity_id: str) -> list:
        return [i for i in self.impacts if i.activity == activity_id]


def _by_id(items, item_id, label):
    for item in items:
        if item.id == item_id:
            return item
    raise KeyError(f"unknown {label} {item_id!r}")


@dataclass(frozen=True)
class Finding:
    rule: str
    ids: tuple
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.findings


def _duplicates(ids) -> list:
    seen, dups = set(), []
    for i in ids:
        if i in seen and i not in dups:
            dups.append(i)
        seen.add(i)
    return dups


def _tree_findings(items, label: str) -> list:
    """Single root, existing parents, no cycles, all nodes reach the root."""
    findings = []
    by_id = {item.id: item for item in items}
    roots = [item.id for item in items if item.parent is None]
    if items and len(roots) != 1:
        findings.append(Finding(f"{label}-single-root", tuple(sorted(roots)),
                                f"{label} graph must have exactly one root, found {len(roots)}"))
    for item in items:
        if item.parent is not None and item.parent not in by_id:
            findings.append(Finding(f"{label}-dangling-parent", (item.id, item.parent),
                                    f"{label} {item.id!r} references missing parent {item.parent!r}"))
    for item in items:
        seen = []
        cur = item
        while cur.parent is not None and cur.parent in by_id:
            if cur.id in seen:
                cycle = tuple(seen[seen.index(cur.id):])
                if not any(f.rule == f"{label}-cycle" and set(f.ids) == set(cycle) for f in findings):
                    findings.append(Finding(f"{label}-cycle", cycle,
                                            f"{label} parent chain loops through {cycle}"))
                break
            seen.append(cur.id)
            cur = by_id[cur.parent]
    return findings


def validate(model: QualityModel) -> ValidationReport:
    """Check every structural invariant; findings are data, not exceptions."""
    findings = []

    for label, items in (("entity", model.entities), ("attribute", model.attributes),
                         ("fact", model.facts), ("activity", model.activities)):
        for dup in _duplicates([i.id for i in items]):
            findings.append(Finding(f"{label}-duplicate-id", (dup,), f"duplicate {label} id {dup!r}"))

    findings.extend(_tree_findings(model.entities, "entity"))
    findings.extend(_tree_findings(model.activities, "activity"))

    entity_ids = {e.id for e in model.entities}
    attribute_ids = {a.id for a in model.attributes}
    fact_ids = {f.id for f in model.facts}
    activity_ids = {a.id for a in model.activities}

    for f in model.facts:
        if f.entity not in entity_ids:
            findings.append(Finding("fact-dangling-entity", (f.id, f.entity),
                                    f"fact {f.id!r} references missing entity {f.entity!r}"))
        if f.attribute not in attribute_ids:
            findings.append(Finding("fact-dangling-attribute", (f.id, f.attribute),
                                    f"fact {f.id!r} references missing attribute {f.attribute!r}"))
    for dup in _duplicates([(f.entity, f.attribute) for f in model.facts]):
        findings.append(Finding("fact-duplicate-pair", dup,
                                f"more than one fact for entity/attribute pair {dup}"))

    for imp in model.impacts:
        if imp.fact not in fact_ids:
            findings.append(Finding("impact-dangling-fact", (imp.fact, imp.activity),
                                    f"impact references missing fact {imp.fact!r}"))
        if imp.activity not in activity_ids:
            findings.append(Finding("impact-dangling-activity", (imp.fact, imp.activity),
                                    f"impact references missing activity {imp.activity!r}"))
    for dup in _duplicates([(i.fact, i.activity) for i in model.impacts]):
        findings.append(Finding("impact-duplicate", dup,
                                f"more than one impact for (fact, activity) pair {dup}"))

    findings.extend(_combined_cycle_findings(model))
    return ValidationReport(tuple(findings))


def _combined_cycle_findings(model: QualityModel) -> list:
    """Acyclicity of hierarchy edges plus impact edges, taken together.

    Impacts only ever point fact -> activity, so cycles are impossible today;
    the guard stays in place for future edge kinds.
    """
    edges: dict = {}

    def add(src, dst):
        edges.setdefault(src, set()).add(dst)

    for e in model.entities:
        if e.parent:
            add(("entity", e.id), ("entity", e.parent))
    for a in model.activities:
        if a.parent:
            add(("activity", a.id), ("activity", a.parent))
    for f in model.facts:
        add(("fact", f.id), ("entity", f.entity))
    for imp in model.impacts:
        add(("fact", imp.fact), ("activity", imp.activity))

    visiting, done = set(), set()
    cycle_nodes: list = []

    def visit(node):
        if node in done or node in cycle_nodes:
            return
        if node in visiting:
            cycle_nodes.append(node)
            return
        visiting.add(node)
        for nxt in edges.get(node, ()):
            visit(nxt)
        visiting.discard(node)
        done.add(node)

    for node in sorted(edges):
        visit(node)
    if cycle_nodes:
        ids = tuple(sorted(i for _, i in cycle_nodes))
        return [Finding("combined-cycle", ids, f"hierarchy+impact edge cycle through {ids}")]
    return []


def _require_valid(model: QualityModel) -> None:
    report = validate(model)
    if not report.ok:
        lines = "; ".join(f.message for f in report.findings)
        raise ModelError(f"model does not validate: {lines}")


def resolve_inheritance(model: QualityModel) -> QualityModel:
    """Copy facts down every is-a edge: a fact on the parent entity induces one
    on the child unless the child already covers that attribute.

    Synthesized facts get the deterministic id ``<child-entity>.<attribute>``.
    Idempotent: applying twice equals applying once.
    """
    _require_valid(model)
    by_id = {e.id: e for e in model.entities}

    # parents before children so inheritance flows through chains in one pass
    order: list = []
    seen: set = set()

    def place(entity: Entity) -> None:
        if entity.id in seen:
            return
        if entity.parent is not None:
            place(by_id[entity.parent])
        seen.add(entity.id)
        order.append(entity)

    for e in model.entities:
        place(e)

    facts = list(model.facts)
    covered = {(f.entity, f.attribute) for f in facts}
    for entity in order:
        if entity.relation != "is-a":
            continue
        for f in list(facts):
            if f.entity != entity.parent:
                continue
            if (entity.id, f.attribute) in covered:
                continue
            facts.append(Fact(
                id=f"{entity.id}.{f.attribute}",
                entity=entity.id,
                attribute=f.attribute,
                description=f.description,
                assessment_note=f.assessment_note,
            ))
            covered.add((entity.id, f.attribute))

    result = replace(model, facts=tuple(facts))
    _require_valid(result)
    return result


def collect_impacts(model: QualityModel, activity_id: str, recursive: bool = True) -> list:
    """Impacts on an activity (and, recursively, its whole sub-tree).

    Returns (fact id, sign, impacted activity id) tuples, depth-first by
    activity and alphabetical by fact id, so the order is stable.
    """
    model.activity(activity_id)  # raises KeyError on unknown ids

    collected = []

    def walk(aid: str) -> None:
        for imp in sorted(model.impacts_on(aid), key=lambda i: i.fact):
            collected.append((imp.fact, imp.sign, aid))
        if recursive:
            for child in sorted(model.activity_children(aid), key=lambda a: a.id):
                walk(child.id)

    walk(activity_id)
    return collected


def _tree_order(items) -> list:
    """Depth-first pre-order over a validated tree, children alphabetical."""
    roots = sorted((i for i in items if i.parent is None), key=lambda i: i.id)
    by_parent: dict = {}
    for item in items:
        if item.parent is not None:
            by_parent.setdefault(item.parent, []).append(item)
    out = []

    def walk(item):
        out.append(item)
        for child in sorted(by_parent.get(item.id, []), key=lambda i: i.id):
            walk(child)

    for root in roots:
        walk(root)
    return out


def export_matrix(model: QualityModel) -> list:
    """Fact x activity matrix as rows of cells; cells are '+', '-' or ''.

    First row holds activity names, first column fact labels
    (``EntityName.AttributeName``); both follow tree order, so output is
    stable across runs.
    """
    _require_valid(model)
    activities = _tree_order(model.activities)
    entity_order = {e.id: i for i, e in enumerate(_tree_order(model.entities))}
    facts = sorted(model.facts, key=lambda f: (entity_order.get(f.entity, len(entity_order)), f.id))
    attr_names = {a.id: a.name for a in model.attributes}
    entity_names = {e.id: e.name for e in model.entities}

    sign_at = {(i.fact, i.activity): i.sign for i in model.impacts}
    header = [""] + [a.name for a in activities]
    rows = [header]
    for f in facts:
        label = f"{entity_names[f.entity]}.{attr_names[f.attribute]}"
        rows.append([label] + [sign_at.get((f.id, a.id), "") for a in activities])
    return rows
