#!/usr/bin/env python3
"""Regenerate the bundled case files under src/qualnet/cases/.

The files are committed; tests assert that rebuilding them reproduces the
committed bytes, so any change to the case builders must rerun this script.
"""

from __future__ import annotations

from pathlib import Path

from qualnet import formats
from qualnet.ingestion import maintainability_case, security_case

CASES = Path(__file__).resolve().parent.parent / "src" / "qualnet" / "cases"


def write(name: str, text: str) -> None:
    path = CASES / name
    path.write_text(text)
    print(f"wrote {path}")


def emit(bundle) -> None:
    write(f"{bundle.name}.model", formats.serialize_model(bundle.model))
    write(f"{bundle.name}.goal", formats.serialize_goal_document(
        bundle.goal, bundle.selection, bundle.fact_indicators, bundle.config))
    write(f"{bundle.name}.net", formats.serialize_network(bundle.network))
    for scenario in bundle.scenarios:
        stem = scenario.name if scenario.name != "prior" else f"{bundle.name}_prior"
        write(f"{stem}.scen", formats.serialize_scenario(scenario))


def main() -> None:
    CASES.mkdir(parents=True, exist_ok=True)
    emit(maintainability_case())
    emit(security_case())


if __name__ == "__main__":
    main()
