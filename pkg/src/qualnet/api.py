"""HTTP service for the what-if explorer UI.

The loaded network is immutable and shared across requests; only the named
scenario store mutates, behind a lock.  Responses are canonical JSON, so
identical requests against the same network return identical bytes.
"""

from __future__ import annotations

import threading
from typing import Optional

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import formats
from .inference import EvidenceError, ImpossibleEvidenceError, infer
from .network import CompiledNetwork, Ranked
from .scenarios import Scenario, ScenarioError, goal_seek, sensitivity

DEFAULT_PORT = 8742


def _error(status: int, error_type: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"error": {"type": error_type, "message": message}})


def _observations_from(payload) -> dict:
    observations = {}
    for raw in payload or []:
        value = raw["value"]
        observations[raw["node"]] = value if isinstance(value, str) else float(value)
    return observations


def create_app(compiled: Optional[CompiledNetwork]) -> FastAPI:
    app = FastAPI(title="qualnet", docs_url=None, redoc_url=None)
    # the explorer UI is served separately (file:// or a static server)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    store: dict = {}
    store_lock = threading.Lock()

    def no_network() -> Optional[JSONResponse]:
        if compiled is None:
            return _error(409, "no-network", "no network is loaded")
        return None

    @app.get("/api/network")
    def describe_network():
        if (resp := no_network()) is not None:
            return resp
        nodes = []
        for node_id in compiled.order:
            kind = compiled.kinds[node_id]
            entry = {"id": node_id, "group": compiled.groups.get(node_id)}
            if isinstance(kind, Ranked):
                entry["kind"] = "ranked"
                entry["states"] = list(kind.states)
            else:
                entry["kind"] = "interval"
                entry["edges"] = [float(e) for e in kind.edges]
                entry["unit"] = kind.unit
                entry["states"] = compiled.states(node_id)
            nodes.append(entry)
        return JSONResponse(content={"target": compiled.target, "nodes": nodes})

    @app.post("/api/infer")
    def post_infer(payload: dict):
        if (resp := no_network()) is not None:
            return resp
        try:
            observations = _observations_from(payload.get("observations"))
            posterior = infer(compiled, observations)
        except ImpossibleEvidenceError as exc:
            return _error(422, "impossible-evidence", str(exc))
        except (EvidenceError, KeyError, TypeError, ValueError) as exc:
            return _error(400, "invalid-observation", str(exc))
        return JSONResponse(content=formats.posterior_doc(compiled, posterior))

    @app.post("/api/goal-seek")
    def post_goal_seek(payload: dict):
        if (resp := no_network()) is not None:
            return resp
        try:
            target = payload.get("target") or compiled.target
            desired = payload["desired"]
            desired = desired if isinstance(desired, str) else float(desired)
            report_nodes = payload.get("report") or [
                n for n in compiled.order
                if compiled.groups.get(n) == "indicator" and n != target
            ]
            report = goal_seek(compiled, target, desired, report_nodes)
        except ImpossibleEvidenceError as exc:
            return _error(422, "impossible-evidence", str(exc))
        except (EvidenceError, ScenarioError, KeyError, TypeError, ValueError) as exc:
            return _error(400, "invalid-request", str(exc))
        return JSONResponse(content=formats.goal_seek_doc(report))

    @app.post("/api/sensitivity")
    def post_sensitivity(payload: dict):
        if (resp := no_network()) is not None:
            return resp
        try:
            target = payload.get("target") or compiled.target
            candidates = payload.get("candidates") or [
                n for n in compiled.order
                if compiled.groups.get(n) == "indicator" and n != target
            ]
            report = sensitivity(compiled, target, candidates)
        except ImpossibleEvidenceError as exc:
            return _error(422, "impossible-evidence", str(exc))
        except (EvidenceError, ScenarioError, KeyError, TypeError, ValueError) as exc:
            return _error(400, "invalid-request", str(exc))
        return JSONResponse(content=formats.sensitivity_doc(report))

    @app.get("/api/scenarios/{name}")
    def get_scenario(name: str):
        with store_lock:
            scenario = store.get(name)
        if scenario is None:
            return _error(404, "unknown-scenario", f"no stored scenario {name!r}")
        return JSONResponse(content={
            "name": scenario.name,
            "observations": [{"node": n, "value": v} for n, v in scenario.observations.items()],
        })

    @app.put("/api/scenarios/{name}")
    def put_scenario(name: str, payload: dict):
        try:
            observations = _observations_from(payload.get("observations"))
            scenario = Scenario(name, observations)
        except (KeyError, TypeError, ValueError) as exc:
            return _error(400, "invalid-scenario", str(exc))
        with store_lock:
            store[name] = scenario
        return JSONResponse(content={"stored": name})

    @app.get("/api/scenarios")
    def list_scenarios():
        with store_lock:
            names = sorted(store)
        return JSONResponse(content={"scenarios": names})

    return app
