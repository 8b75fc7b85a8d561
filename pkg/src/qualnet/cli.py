"""Command-line interface.

Every subcommand is a thin wrapper over the library: in ``--format machine``
mode the printed bytes are exactly the canonical serialization the library
produces.  Exit codes: 0 success, 1 domain errors (validation findings,
impossible evidence, malformed documents), 2 usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from importlib import resources
from pathlib import Path

from . import abqm, formats, reporting, scenarios
from .inference import EvidenceError, ImpossibleEvidenceError, infer
from .netgen import DerivationError, derive_network, gqm_trace
from .network import NetworkError, compile_network

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

DOMAIN_ERRORS = (
    formats.ParseError,
    abqm.ModelError,
    NetworkError,
    DerivationError,
    EvidenceError,
    ImpossibleEvidenceError,
    scenarios.ScenarioError,
)


def cases_dir() -> Path:
    override = os.environ.get("QUALNET_CASES_DIR")
    if override:
        return Path(override)
    return Path(resources.files("qualnet") / "cases")


def _resolve(path_str: str) -> Path:
    """Literal path first; fall back to the bundled cases directory."""
    path = Path(path_str)
    if path.exists():
        return path
    fallback = cases_dir() / path.name
    if fallback.exists():
        return fallback
    raise FileNotFoundError(f"no such file: {path_str}")


def _read(path_str: str) -> str:
    return _resolve(path_str).read_text()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load_net(args):
    network = formats.parse_network(_read(args.net))
    return compile_network(network)


def _target_of(args, compiled):
    target = getattr(args, "target", None) or compiled.target
    if not target:
        raise DerivationError("no target node: pass --target or use a network with one")
    return target


def cmd_validate(args) -> int:
    model = formats.parse_model(_read(args.model))
    report = abqm.validate(model)
    if args.format == "machine":
        doc = {"format": "validation-v1",
               "findings": [{"rule": f.rule, "ids": list(f.ids), "message": f.message}
                            for f in report.findings]}
        _emit(formats.dumps(doc), args.out)
    else:
        _emit(reporting.render_validation(report), args.out)
    return EXIT_OK if report.ok else EXIT_DOMAIN


def cmd_matrix(args) -> int:
    model = formats.parse_model(_read(args.model))
    _emit(formats.matrix_csv(abqm.export_matrix(model)), args.out)
    return EXIT_OK


def cmd_derive(args) -> int:
    model = formats.parse_model(_read(args.model))
    goal, selection, fact_indicators, config = formats.parse_goal_document(_read(args.goal))
    if args.select:
        goal_sel = formats.parse_goal_document(_read(args.select))[1]
        selection = goal_sel
    network = derive_network(model, goal, selection, fact_indicators, config)
    if args.format == "machine":
        _emit(formats.serialize_network(network), args.out)
    else:
        trace = gqm_trace(goal)
        counts = {}
        for node in network.nodes:
            counts[node.group] = counts.get(node.group, 0) + 1
        lines = [reporting.render_gqm_trace(trace), "",
                 f"derived network: {len(network.nodes)} nodes "
                 f"({counts.get('activity', 0)} activity, {counts.get('fact', 0)} fact, "
                 f"{counts.get('indicator', 0)} indicator)"]
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def _scenario_from_args(args):
    if args.scenario:
        return formats.parse_scenario(_read(args.scenario))
    return scenarios.Scenario("adhoc", {})


def cmd_infer(args) -> int:
    compiled = _load_net(args)
    scenario = _scenario_from_args(args)
    posterior = infer(compiled, scenario.observations)
    if args.format == "machine":
        _emit(formats.serialize_posterior(compiled, posterior), args.out)
        return EXIT_OK
    target = getattr(args, "target", None) or compiled.target
    lines = []
    if target and target in posterior.summaries:
        s = posterior.summaries[target]
        lines.append(f"{target}: mean={s.mean:.4f} sd={s.sd:.4f}")
        lines.append("")
    lines.append(reporting.render_posterior(compiled, posterior))
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_scenario_run(args) -> int:
    compiled = _load_net(args)
    scenario = _scenario_from_args(args)
    result = scenarios.run_scenario(compiled, scenario, _target_of(args, compiled))
    if args.format == "machine":
        _emit(formats.dumps(formats.scenario_result_doc(compiled, result)), args.out)
    else:
        _emit(reporting.render_scenario_result(compiled, result), args.out)
    return EXIT_OK


def cmd_scenario_compare(args) -> int:
    compiled = _load_net(args)
    target = _target_of(args, compiled)
    first = formats.parse_scenario(_read(args.first))
    second = formats.parse_scenario(_read(args.second))
    result_a = scenarios.run_scenario(compiled, first, target)
    result_b = scenarios.run_scenario(compiled, second, target)
    comparison = scenarios.compare(result_a, result_b)
    if args.format == "machine":
        _emit(formats.dumps(formats.comparison_doc(comparison)), args.out)
    else:
        _emit(reporting.render_comparison(comparison), args.out)
    return EXIT_OK


def _parse_target_value(spec: str):
    if "=" not in spec:
        raise DerivationError("goal-seek target must look like node=value")
    node, raw = spec.split("=", 1)
    try:
        value = float(raw)
    except ValueError:
        value = raw
    return node, value


def cmd_goal_seek(args) -> int:
    compiled = _load_net(args)
    node, value = _parse_target_value(args.target)
    if args.report:
        report_nodes = args.report.split(",")
    else:
        report_nodes = [n for n in compiled.order
                        if compiled.groups.get(n) == "indicator" and n != node]
    report = scenarios.goal_seek(compiled, node, value, report_nodes)
    if args.format == "machine":
        _emit(formats.dumps(formats.goal_seek_doc(report)), args.out)
    else:
        _emit(reporting.render_goal_seek(report), args.out)
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    compiled = _load_net(args)
    target = _target_of(args, compiled)
    if args.candidates:
        candidates = args.candidates.split(",")
    else:
        candidates = [n for n in compiled.order
                      if compiled.groups.get(n) == "indicator" and n != target]
    report = scenarios.sensitivity(compiled, target, candidates)
    if args.format == "machine":
        _emit(formats.dumps(formats.sensitivity_doc(report)), args.out)
    else:
        _emit(reporting.render_sensitivity(report), args.out)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    compiled = _load_net(args)
    uvicorn.run(create_app(compiled), host="127.0.0.1", port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qualnet",
                                     description="Quality-model Bayesian network toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=False, net=False, scenario=False, target=False):
        if model:
            p.add_argument("--model", required=True, help="abqm-v1 model file")
        if net:
            p.add_argument("--net", required=True, help="bnet-v1 network file")
        if scenario:
            p.add_argument("--scenario", help="scen-v1 scenario file")
        if target:
            p.add_argument("--target", help="target node id")
        p.add_argument("--out", help="write output to this path instead of stdout")
        p.add_argument("--format", choices=("text", "machine"), default="text")

    p = sub.add_parser("validate", help="check a quality model's invariants")
    common(p, model=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("matrix", help="export the fact x activity matrix")
    common(p, model=True)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("derive", help="derive a network from a model and a goal")
    common(p, model=True)
    p.add_argument("--goal", required=True, help="goal-v1 document")
    p.add_argument("--select", help="goal-v1 document whose selection overrides the goal's")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("infer", help="posterior marginals under a scenario")
    common(p, net=True, scenario=True, target=True)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("scenario-run", help="run a named scenario against a target")
    common(p, net=True, scenario=True, target=True)
    p.set_defaults(func=cmd_scenario_run)

    p = sub.add_parser("scenario-compare", help="delta document between two scenarios")
    common(p, net=True, target=True)
    p.add_argument("first", help="scen-v1 file for the baseline")
    p.add_argument("second", help="scen-v1 file for the variant")
    p.set_defaults(func=cmd_scenario_compare)

    p = sub.add_parser("goal-seek", help="pin the target and read indicators backward")
    common(p, net=True)
    p.add_argument("--target", required=True, help="node=value, e.g. change_effort=10")
    p.add_argument("--report", help="comma-separated report nodes (default: all indicators)")
    p.set_defaults(func=cmd_goal_seek)

    p = sub.add_parser("sensitivity", help="one-way sensitivity sweep")
    common(p, net=True, target=True)
    p.add_argument("--candidates", help="comma-separated candidate nodes")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("serve", help="run the HTTP API for the companion UI")
    p.add_argument("--net", required=True)
    p.add_argument("--port", type=int, default=8742)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
