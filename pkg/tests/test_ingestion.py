import pytest

from qualnet.abqm import validate
from qualnet.inference import infer
from qualnet.ingestion import (
    EFFORT_CALIBRATION_START,
    EFFORT_CALIBRATION_TARGET,
    FindingCounts,
    ModuleMetricsRow,
    aggregate_metrics,
    calibrate_effort_table,
    density_per_ksloc,
    make_metrics_corpus,
    parse_findings_csv,
    parse_metrics_csv,
    tomcat_finding_counts,
)
from qualnet.scenarios import run_scenario


def test_aggregate_single_row_identity():
    rows = [ModuleMetricsRow("m", loc=100, sloc=75, comment_lines=25, cyclomatic_complexity=5)]
    agg = aggregate_metrics(rows)
    assert agg == {"comment_ratio": 0.25, "avg_cyclomatic_complexity": 5.0,
                   "avg_module_size": 100.0}


def test_aggregate_mean_of_complexities():
    rows = [ModuleMetricsRow("a", 10, 10, 0, 2), ModuleMetricsRow("b", 10, 10, 0, 4)]
    assert aggregate_metrics(rows)["avg_cyclomatic_complexity"] == 3.0


def test_aggregate_is_permutation_invariant():
    rows = [ModuleMetricsRow(f"m{i}", 10 + i, 8 + i, i, i % 7) for i in range(12)]
    assert aggregate_metrics(rows) == aggregate_metrics(list(reversed(rows)))


def test_aggregate_empty_is_an_error():
    with pytest.raises(ValueError):
        aggregate_metrics([])


def test_synthetic_corpus_reproduces_kc3_aggregates():
    rows = make_metrics_corpus(comment_ratio=0.08, avg_cc=3.45, avg_size=16.92, modules=2500)
    agg = aggregate_metrics(rows)
    assert abs(agg["comment_ratio"] - 0.08) < 1e-12
    assert abs(agg["avg_cyclomatic_complexity"] - 3.45) < 1e-12
    assert abs(agg["avg_module_size"] - 16.92) < 1e-12


def test_density_per_ksloc_published_tomcat_value():
    # 11 vulnerabilities over 151,509 SLOC; the published table says 0.070,
    # the raw quotient is 0.0726 - both are kept on record
    assert abs(density_per_ksloc(11, 151509) - 0.0726) < 5e-5


def test_density_zero_findings():
    assert density_per_ksloc(0, 123456) == 0.0


def test_density_oji_back_computed():
    counts = tomcat_finding_counts()
    assert abs(density_per_ksloc(counts.counts["OJI"], counts.sloc) - 1.14) < 5e-3


def test_density_is_linear_in_count():
    assert density_per_ksloc(20, 5000) == 2 * density_per_ksloc(10, 5000)


def test_density_rejects_zero_sloc():
    with pytest.raises(ValueError):
        density_per_ksloc(1, 0)


def test_tomcat_counts_round_to_published_densities():
    densities = tomcat_finding_counts().densities()
    published = {"OJI": 1.14, "FDL": 1.63, "FDI": 0.06, "FZL": 0.03, "COS": 0.0, "DWS": 0.0}
    for tag, value in published.items():
        assert abs(round(densities[tag], 2) - value) < 1e-9


def test_metrics_csv_round_trip():
    text = ("module,loc,sloc,comment_lines,cyclomatic_complexity\n"
            "m1,100,80,20,4\nm2,50,45,5,2\n")
    rows = parse_metrics_csv(text)
    assert rows[0].module == "m1" and rows[1].cyclomatic_complexity == 2
    with pytest.raises(ValueError):
        parse_metrics_csv("module,loc\nm1,10\n")


def test_findings_csv_with_sloc_footer():
    counts = parse_findings_csv("metric_tag,count\nOJI,173\nFDL,247\nsloc,151509\n")
    assert counts.counts["OJI"] == 173
    assert counts.sloc == 151509
    with pytest.raises(ValueError):
        parse_findings_csv("metric_tag,count\nOJI,1\n")


def test_row_validation():
    with pytest.raises(ValueError):
        ModuleMetricsRow("m", loc=10, sloc=20, comment_lines=0, cyclomatic_complexity=1)
    with pytest.raises(ValueError):
        FindingCounts(counts={"XXX": 1}, sloc=100)


def test_both_bundles_compile_and_validate(maintainability, security):
    for bundle, compiled in (maintainability, security):
        assert validate(bundle.model).ok
        assert len(compiled.order) == len(bundle.network.nodes)


def test_bundle_scenarios_never_impossible(maintainability, security):
    for bundle, compiled in (maintainability, security):
        for scenario in bundle.scenarios:
            result = run_scenario(compiled, scenario, bundle.target)
            assert abs(sum(result.posterior.vector(bundle.target)) - 1.0) < 1e-9


def test_maintainability_prior_summary(maintainability):
    _, compiled = maintainability
    s = infer(compiled).summaries["change_effort"]
    assert abs(s.mean - 27.0) <= 1.5
    assert abs(s.sd - 12.1) <= 1.5


def test_maintainability_scenario_examples(maintainability):
    bundle, compiled = maintainability
    paper = bundle.expected["predictions"]
    for name, value in paper.items():
        mean = run_scenario(compiled, bundle.scenario(name), "change_effort").target_summary.mean
        assert 0.7 * value <= mean <= 1.3 * value


def test_security_prior_near_anchor(security):
    bundle, compiled = security
    s = infer(compiled).summaries["vulnerability_density"]
    assert abs(s.mean - bundle.expected["prior_anchor"]) <= bundle.expected["prior_tolerance"]


def test_security_tomcat_prediction(security):
    bundle, compiled = security
    result = run_scenario(compiled, bundle.scenario("tomcat"), "vulnerability_density")
    lo, hi = bundle.expected["band"]
    assert lo <= result.target_summary.mean <= hi
    assert result.target_summary.mean >= bundle.expected["prior_anchor"]
    assert abs(result.target_summary.sd - bundle.expected["tomcat"]["sd"]) < 0.001


def test_security_all_zero_densities_improve_on_prior(security):
    bundle, compiled = security
    prior = infer(compiled).summaries["vulnerability_density"].mean
    zero = run_scenario(compiled, bundle.scenario("all_zero"), "vulnerability_density")
    assert zero.target_summary.mean <= prior


def test_calibration_is_reproducible(maintainability):
    bundle, compiled = maintainability
    maintenance_prior = infer(compiled).vector("maintenance")
    table = calibrate_effort_table(maintenance_prior)
    assert table == bundle.goal.activity_indicator.npt


def test_calibration_starts_from_published_numbers():
    assert EFFORT_CALIBRATION_START["means"] == (42.0, 27.0, 12.0)
    assert EFFORT_CALIBRATION_START["variance"] == 110.0
    assert EFFORT_CALIBRATION_TARGET == {"mean": 27.0, "sd": 12.1}
