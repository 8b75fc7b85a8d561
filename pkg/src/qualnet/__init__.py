"""Quality-model driven Bayesian networks for software quality assessment."""

from .distributions import (
    Distribution,
    Exponential,
    PointMass,
    TNormal,
    UniformContinuous,
    ZeroMassError,
    discretize,
    tnormal_moments,
)
from .inference import (
    EvidenceError,
    ImpossibleEvidenceError,
    Posterior,
    Summary,
    infer,
    joint_probability,
    mpe,
    summarize,
)
from .network import (
    Arithmetic,
    BayesianNetwork,
    CompiledNetwork,
    ExplicitCPT,
    Interval,
    NetworkError,
    NodeSpec,
    Partitioned,
    Ranked,
    Uniform,
    WeightedMean,
    compile_network,
    topological_order,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
