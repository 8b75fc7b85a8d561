import pytest

from qualnet.abqm import (
    Activity,
    Attribute,
    Entity,
    Fact,
    Impact,
    ModelError,
    QualityModel,
    collect_impacts,
    export_matrix,
    resolve_inheritance,
    validate,
)
from qualnet.formats import ParseError, parse_model, serialize_model
from qualnet.ingestion import maintainability_model, security_model


def test_bundled_maintainability_model_counts():
    model = maintainability_model()
    text = serialize_model(model)
    parsed = parse_model(text)
    assert len(parsed.facts) == 3
    assert len(parsed.activities) == 8
    assert len(parsed.impacts) == 3


def test_empty_document_is_a_valid_model():
    model = parse_model('{"format": "abqm-v1", "entities": [], "attributes": [],'
                        ' "facts": [], "activities": [], "impacts": []}')
    assert model == QualityModel()
    assert validate(model).ok


def test_dangling_impact_reference_is_a_parse_error():
    text = ('{"format": "abqm-v1", "entities": [{"id": "e", "name": "E"}],'
            ' "attributes": [{"id": "a", "name": "A"}],'
            ' "facts": [{"id": "e.a", "entity": "e", "attribute": "a"}],'
            ' "activities": [{"id": "act", "name": "Act"}],'
            ' "impacts": [{"fact": "e.a", "activity": "ghost", "sign": "-"}]}')
    with pytest.raises(ParseError, match="unknown activity"):
        parse_model(text)


def test_security_model_validates_clean():
    assert validate(security_model()).ok
    assert validate(maintainability_model()).ok


def test_is_a_cycle_is_reported():
    model = QualityModel(entities=(
        Entity("a", "A", parent="b", relation="is-a"),
        Entity("b", "B", parent="a", relation="is-a"),
    ))
    report = validate(model)
    assert any(f.rule == "entity-cycle" for f in report.findings)


def test_duplicate_impact_is_reported():
    base = maintainability_model()
    model = QualityModel(
        entities=base.entities, attributes=base.attributes, facts=base.facts,
        activities=base.activities,
        impacts=base.impacts + (Impact("module.extent", "code_reading", "+"),),
    )
    report = validate(model)
    assert any(f.rule == "impact-duplicate" for f in report.findings)


def _inheritance_model():
    return QualityModel(
        entities=(
            Entity("identifier", "Identifier"),
            Entity("class_name", "ClassName", parent="identifier", relation="is-a"),
        ),
        attributes=(Attribute("consistency", "Consistency"),),
        facts=(Fact("identifier.consistency", "identifier", "consistency"),),
        activities=(Activity("modification", "Modification"),),
    )


def test_is_a_inheritance_copies_facts_down():
    resolved = resolve_inheritance(_inheritance_model())
    pairs = {(f.entity, f.attribute) for f in resolved.facts}
    assert ("class_name", "consistency") in pairs
    synthesized = [f for f in resolved.facts if f.entity == "class_name"][0]
    assert synthesized.id == "class_name.consistency"


def test_part_of_only_model_is_unchanged():
    model = maintainability_model()
    assert resolve_inheritance(model) == model


def test_three_level_chain_matches_transitive_closure_and_is_idempotent():
    model = QualityModel(
        entities=(
            Entity("top", "Top"),
            Entity("mid", "Mid", parent="top", relation="is-a"),
            Entity("leaf", "Leaf", parent="mid", relation="is-a"),
        ),
        attributes=(Attribute("attr", "Attr"),),
        facts=(Fact("top.attr", "top", "attr"),),
    )
    once = resolve_inheritance(model)

    # transitive-closure oracle over the is-a relation
    ancestors = {"top": {"top"}, "mid": {"mid", "top"}, "leaf": {"leaf", "mid", "top"}}
    want_pairs = {(e, "attr") for e, anc in ancestors.items() if "top" in anc}
    assert {(f.entity, f.attribute) for f in once.facts} == want_pairs

    twice = resolve_inheritance(once)
    assert twice == once
    assert validate(once).ok


def test_resolve_inheritance_requires_valid_model():
    broken = QualityModel(entities=(Entity("a", "A", parent="missing", relation="is-a"),))
    with pytest.raises(ModelError):
        resolve_inheritance(broken)


def test_collect_impacts_maintainability_subtree():
    model = maintainability_model()
    got = collect_impacts(model, "maintenance", recursive=True)
    assert got == [
        ("module.extent", "-", "code_reading"),
        ("comment.appropriateness", "+", "modification"),
        ("implementation.regularity", "+", "testing"),
    ]


def test_collect_impacts_leaf_without_impacts_is_empty():
    assert collect_impacts(maintainability_model(), "comprehension", recursive=False) == []


def test_collect_impacts_security_attack_has_eight():
    got = collect_impacts(security_model(), "attack", recursive=True)
    assert len(got) == 8
    assert all(sign == "-" for _, sign, _ in got)


def test_collect_impacts_non_recursive_is_subset():
    model = security_model()
    flat = set(collect_impacts(model, "variable_manipulation", recursive=False))
    deep = set(collect_impacts(model, "attack", recursive=True))
    assert flat <= deep
    assert len(flat) == 3


def test_collect_impacts_unknown_activity():
    with pytest.raises(KeyError):
        collect_impacts(maintainability_model(), "ghost")


def test_export_matrix_maintainability_cells():
    rows = export_matrix(maintainability_model())
    header, body = rows[0], rows[1:]
    cells = {}
    for row in body:
        for name, cell in zip(header[1:], row[1:]):
            if cell:
                cells[(row[0], name)] = cell
    assert cells == {
        ("Module.Extent", "Code Reading"): "-",
        ("Implementation.Regularity", "Testing"): "+",
        ("Comment.Appropriateness", "Modification"): "+",
    }


def test_export_matrix_without_impacts_is_blank():
    base = maintainability_model()
    model = QualityModel(entities=base.entities, attributes=base.attributes,
                         facts=base.facts, activities=base.activities)
    rows = export_matrix(model)
    assert len(rows) == 1 + len(model.facts)
    assert all(cell == "" for row in rows[1:] for cell in row[1:])


def test_export_matrix_security_all_negative():
    rows = export_matrix(security_model())
    marks = [cell for row in rows[1:] for cell in row[1:] if cell]
    assert len(marks) == 8
    assert set(marks) == {"-"}


def test_matrix_nonblank_count_equals_impact_count():
    for model in (maintainability_model(), security_model()):
        rows = export_matrix(model)
        marks = [cell for row in rows[1:] for cell in row[1:] if cell]
        assert len(marks) == len(model.impacts)


def test_matrix_order_is_stable():
    model = security_model()
    assert export_matrix(model) == export_matrix(model)


def test_validated_inherited_model_stays_valid():
    resolved = resolve_inheritance(_inheritance_model())
    assert validate(resolved).ok


def test_single_root_rule():
    model = QualityModel(activities=(Activity("a", "A"), Activity("b", "B")))
    report = validate(model)
    assert any(f.rule == "activity-single-root" for f in report.findings)


def _random_model(rng):
    """Small random-but-valid model: entity tree with is-a edges, random facts."""
    n_entities = int(rng.integers(2, 8))
    entities = [Entity("e0", "E0")]
    for i in range(1, n_entities):
        parent = f"e{int(rng.integers(0, i))}"
        relation = "is-a" if rng.uniform() < 0.5 else "part-of"
        entities.append(Entity(f"e{i}", f"E{i}", parent=parent, relation=relation))
    attributes = [Attribute(f"a{i}", f"A{i}") for i in range(int(rng.integers(1, 4)))]
    facts = []
    used = set()
    for _ in range(int(rng.integers(1, 6))):
        e = f"e{int(rng.integers(0, n_entities))}"
        a = f"a{int(rng.integers(0, len(attributes)))}"
        if (e, a) in used:
            continue
        used.add((e, a))
        facts.append(Fact(f"{e}.{a}", e, a))
    activities = [Activity("act0", "Act0")]
    for i in range(1, int(rng.integers(1, 5)) + 1):
        activities.append(Activity(f"act{i}", f"Act{i}", parent=f"act{int(rng.integers(0, i))}"))
    impacts = []
    for fact in facts:
        if rng.uniform() < 0.6:
            target = activities[int(rng.integers(0, len(activities)))]
            impacts.append(Impact(fact.id, target.id, "+" if rng.uniform() < 0.5 else "-"))
    return QualityModel(tuple(entities), tuple(attributes), tuple(facts),
                        tuple(activities), tuple(impacts))


def test_inheritance_invariants_on_random_models():
    import numpy as np

    rng = np.random.default_rng(42)
    for _ in range(50):
        model = _random_model(rng)
        assert validate(model).ok
        once = resolve_inheritance(model)
        # resolving a valid model never introduces findings, and it is idempotent
        assert validate(once).ok
        assert resolve_inheritance(once) == once
        # every fact of the input survives
        assert set(f.id for f in model.facts) <= set(f.id for f in once.facts)


def test_recursive_subset_holds_for_every_activity():
    for model in (maintainability_model(), security_model()):
        for activity in model.activities:
            flat = set(collect_impacts(model, activity.id, recursive=False))
            deep = set(collect_impacts(model, activity.id, recursive=True))
            assert flat <= deep
