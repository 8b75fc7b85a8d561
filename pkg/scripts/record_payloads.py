#!/usr/bin/env python3
"""Record API payloads as frontend test fixtures.

Two sets are written:

- ``network.json`` / ``prior.json`` / ``kc1.json`` — live responses from the
  API, pinning the payload schema the UI codes against;
- ``display_prior.json`` / ``display_kc1.json`` — the same schema carrying
  the published target summaries (27.0 and 19.4 person-hours), used by the
  display-contract tests that pin rounding behaviour.
"""

from __future__ import annotations

import copy
import json
from pathlib import Path

from fastapi.testclient import TestClient

from qualnet.api import create_app
from qualnet.ingestion import maintainability_case, security_case
from qualnet.network import compile_network

FIXTURES = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"


def write(name: str, payload: dict) -> None:
    path = FIXTURES / name
    path.write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {path}")


def with_target_summary(payload: dict, mean: float, sd: float) -> dict:
    doc = copy.deepcopy(payload)
    for node in doc["nodes"]:
        if node["id"] == "change_effort":
            node["summary"]["mean"] = mean
            node["summary"]["sd"] = sd
    return doc


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    bundle = maintainability_case()
    client = TestClient(create_app(compile_network(bundle.network)))

    network = client.get("/api/network").json()
    write("network.json", network)

    prior = client.post("/api/infer", json={"observations": []}).json()
    write("prior.json", prior)

    kc1_obs = [{"node": n, "value": v} for n, v in bundle.scenario("kc1").observations.items()]
    kc1 = client.post("/api/infer", json={"observations": kc1_obs}).json()
    write("kc1.json", kc1)

    write("display_prior.json", with_target_summary(prior, 27.0, 12.1))
    write("display_kc1.json", with_target_summary(kc1, 19.4, 9.8))

    sec = security_case()
    sec_client = TestClient(create_app(compile_network(sec.network)))
    write("security_network.json", sec_client.get("/api/network").json())


if __name__ == "__main__":
    main()
