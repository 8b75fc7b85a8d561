from pathlib import Path

import pytest

from qualnet import formats
from qualnet.ingestion import maintainability_case, security_case
from qualnet.scenarios import Scenario

CASES = Path(__file__).resolve().parent.parent / "src" / "qualnet" / "cases"


@pytest.mark.parametrize("bundle_fn", [maintainability_case, security_case])
def test_model_round_trip(bundle_fn):
    model = bundle_fn().model
    text = formats.serialize_model(model)
    again = formats.parse_model(text)
    assert again == model
    assert formats.serialize_model(again) == text


@pytest.mark.parametrize("bundle_fn", [maintainability_case, security_case])
def test_goal_document_round_trip(bundle_fn):
    bundle = bundle_fn()
    text = formats.serialize_goal_document(bundle.goal, bundle.selection,
                                           bundle.fact_indicators, bundle.config)
    goal, selection, fact_indicators, config = formats.parse_goal_document(text)
    assert goal == bundle.goal
    assert selection == bundle.selection
    assert fact_indicators == bundle.fact_indicators
    assert config == bundle.config
    assert formats.serialize_goal_document(goal, selection, fact_indicators, config) == text


@pytest.mark.parametrize("bundle_fn", [maintainability_case, security_case])
def test_network_round_trip(bundle_fn):
    network = bundle_fn().network
    text = formats.serialize_network(network)
    again = formats.parse_network(text)
    assert again == network
    assert formats.serialize_network(again) == text


def test_scenario_round_trip():
    scenario = Scenario("kc1", {"comment_ratio": 0.02, "avg_cyclomatic_complexity": 2.84,
                                "avg_module_size": 20.39})
    text = formats.serialize_scenario(scenario)
    again = formats.parse_scenario(text)
    assert again == scenario
    assert formats.serialize_scenario(again) == text


def test_ranked_observation_survives_round_trip():
    scenario = Scenario("s", {"maintenance": "high"})
    again = formats.parse_scenario(formats.serialize_scenario(scenario))
    assert again.observations["maintenance"] == "high"


def test_committed_case_files_match_builders(maintainability, security):
    for bundle, _ in (maintainability, security):
        assert (CASES / f"{bundle.name}.model").read_text() == formats.serialize_model(bundle.model)
        assert (CASES / f"{bundle.name}.net").read_text() == formats.serialize_network(bundle.network)
        goal_text = formats.serialize_goal_document(bundle.goal, bundle.selection,
                                                    bundle.fact_indicators, bundle.config)
        assert (CASES / f"{bundle.name}.goal").read_text() == goal_text
        for scenario in bundle.scenarios:
            stem = scenario.name if scenario.name != "prior" else f"{bundle.name}_prior"
            assert (CASES / f"{stem}.scen").read_text() == formats.serialize_scenario(scenario)


def test_syntax_error_reports_position():
    with pytest.raises(formats.ParseError, match=r"line 2, column"):
        formats.parse_model('{"format": "abqm-v1",\n "entities": }')


def test_unknown_fields_rejected():
    with pytest.raises(formats.ParseError, match="unknown fields"):
        formats.parse_model('{"format": "abqm-v1", "entities": [], "attributes": [],'
                            ' "facts": [], "activities": [], "impacts": [], "extra": 1}')
    with pytest.raises(formats.ParseError, match="unknown fields"):
        formats.parse_model('{"format": "abqm-v1", "entities": [{"id": "e", "name": "E",'
                            ' "color": "red"}], "attributes": [], "facts": [],'
                            ' "activities": [], "impacts": []}')


def test_wrong_format_version_rejected():
    with pytest.raises(formats.ParseError, match="expected format"):
        formats.parse_network('{"format": "abqm-v1", "nodes": []}')


def test_duplicate_id_is_a_parse_error():
    text = ('{"format": "abqm-v1", "entities": [{"id": "e", "name": "A"},'
            ' {"id": "e", "name": "B"}], "attributes": [], "facts": [],'
            ' "activities": [], "impacts": []}')
    with pytest.raises(formats.ParseError, match="duplicate entity id"):
        formats.parse_model(text)


def test_posterior_doc_is_deterministic(maintainability):
    from qualnet.inference import infer

    bundle, compiled = maintainability
    posterior = infer(compiled)
    assert (formats.serialize_posterior(compiled, posterior)
            == formats.serialize_posterior(compiled, posterior))


def test_matrix_csv_layout(maintainability):
    from qualnet.abqm import export_matrix

    bundle, _ = maintainability
    text = formats.matrix_csv(export_matrix(bundle.model))
    lines = text.strip().split("\n")
    assert lines[0].startswith(",")            # empty corner cell
    assert len(lines) == 1 + len(bundle.model.facts)


def test_report_csv_tables(maintainability):
    import csv
    import io

    from qualnet.scenarios import compare, goal_seek, run_scenario, sensitivity
    from qualnet.network import compile_network

    bundle, compiled = maintainability
    sens = sensitivity(compiled, "change_effort", ["comment_ratio", "avg_module_size"])
    rows = list(csv.reader(io.StringIO(formats.sensitivity_csv(sens))))
    assert rows[0] == ["rank", "node", "swing", "low", "high"]
    assert len(rows) == 3
    assert float(rows[1][2]) >= float(rows[2][2])

    a = run_scenario(compiled, bundle.scenario("prior"), "change_effort")
    b = run_scenario(compiled, bundle.scenario("kc1"), "change_effort")
    rows = list(csv.reader(io.StringIO(formats.comparison_csv(compare(a, b)))))
    assert rows[0] == ["node", "delta_mean", "delta_sd", "max_abs_delta_p"]
    by_node = {r[0]: r for r in rows[1:]}
    assert float(by_node["change_effort"][1]) < 0
    assert by_node["maintenance"][1] == ""       # ranked nodes have no mean delta

    gs = goal_seek(compiled, "change_effort", 10.0, ["comment_ratio", "maintenance"])
    rows = list(csv.reader(io.StringIO(formats.goal_seek_csv(gs))))
    assert rows[0] == ["node", "mean", "sd", "mode"]
    assert rows[2][3] in ("low", "medium", "high")
