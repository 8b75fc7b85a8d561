#!/usr/bin/env python3
"""Walk through the quality-model layer: facts, activities, impacts.

Builds the bundled maintainability model, validates it, shows the
fact x activity matrix, and demonstrates how is-a inheritance copies
facts down the entity tree.
"""

from qualnet.abqm import (
    Activity,
    Attribute,
    Entity,
    Fact,
    QualityModel,
    collect_impacts,
    export_matrix,
    resolve_inheritance,
    validate,
)
from qualnet.formats import matrix_csv
from qualnet.ingestion import maintainability_model

model = maintainability_model()

print("== validation ==")
report = validate(model)
print(f"findings: {len(report.findings)}")

print()
print("== impacts on the maintenance sub-tree ==")
for fact, sign, activity in collect_impacts(model, "maintenance", recursive=True):
    print(f"  [{fact}] ({sign}) -> {activity}")

print()
print("== matrix view ==")
print(matrix_csv(export_matrix(model)))

# Inheritance: a fact stated once on a general entity applies to every
# specialization. Naming conventions on identifiers are the classic example:
# they hold for class names, file names, and variable names alike.
naming = QualityModel(
    entities=(
        Entity("identifier", "Identifier"),
        Entity("class_name", "Class Name", parent="identifier", relation="is-a"),
        Entity("variable_name", "Variable Name", parent="identifier", relation="is-a"),
    ),
    attributes=(Attribute("consistency", "Consistency"),),
    facts=(Fact("identifier.consistency", "identifier", "consistency"),),
    activities=(Activity("modification", "Modification"),),
)
resolved = resolve_inheritance(naming)
print("== inherited facts ==")
for fact in resolved.facts:
    print(f"  [{fact.entity} | {fact.attribute}]  (id: {fact.id})")
