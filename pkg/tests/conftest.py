import pytest

from qualnet.ingestion import maintainability_case, security_case
from qualnet.network import (
    BayesianNetwork,
    ExplicitCPT,
    NodeSpec,
    Ranked,
    Uniform,
    compile_network,
)


def table1_network() -> BayesianNetwork:
    """Toy three-node network: code complexity drives testing effort, and both
    drive the number of field failures (the published example table)."""
    cc = NodeSpec("code_complexity", Ranked(("low", "medium", "high"), (1 / 6, 0.5, 5 / 6)),
                  Uniform())
    te = NodeSpec("testing_effort", Ranked(("low", "high"), (0.25, 0.75)),
                  ExplicitCPT(parents=("code_complexity",),
                              table=((0.5, 0.4, 0.3),
                                     (0.5, 0.6, 0.7))))
    nff = NodeSpec("field_failures", Ranked(("<100", ">100"), (0.25, 0.75)),
                   ExplicitCPT(parents=("testing_effort", "code_complexity"),
                               table=((0.4, 0.3, 0.2, 0.6, 0.55, 0.5),
                                      (0.6, 0.7, 0.8, 0.4, 0.45, 0.5))))
    return BayesianNetwork(nodes=(cc, te, nff))


@pytest.fixture(scope="session")
def table1():
    return compile_network(table1_network())


@pytest.fixture(scope="session")
def maintainability():
    bundle = maintainability_case()
    return bundle, compile_network(bundle.network)


@pytest.fixture(scope="session")
def security():
    bundle = security_case()
    return bundle, compile_network(bundle.network)
