#!/usr/bin/env python3
"""Peek inside the engine: distributions, CPT synthesis, exact inference.

Small self-contained network built by hand, no quality model involved.
"""

import numpy as np

from qualnet.distributions import TNormal, discretize, tnormal_moments
from qualnet.inference import infer, mpe
from qualnet.network import (
    BayesianNetwork,
    Interval,
    NodeSpec,
    Partitioned,
    Ranked,
    Uniform,
    WeightedMean,
    compile_network,
)

print("== truncated normal building blocks ==")
flat = TNormal(0.5, 1000.0, 0.0, 1.0)
spike = TNormal(0.5, 0.001, 0.0, 1.0)
print("huge variance -> near uniform:", np.round(discretize(flat, np.linspace(0, 1, 6)), 3))
print("tiny variance -> concentrated:", np.round(discretize(spike, np.linspace(0, 1, 6)), 3))
skewed = TNormal(0.25, 0.1, 0.0, 1.0)
m = tnormal_moments(skewed)
print(f"truncation shifts a 0.25-mean normal to {m['mean']:.3f} on [0, 1]")

print()
print("== a three-node ranked chain with a measurable leaf ==")
quality = NodeSpec("quality", Ranked(), Uniform(), group="fact")
outcome = NodeSpec("outcome", Ranked(),
                   WeightedMean(parents=(("quality", 1.0, "positive"),), variance=0.001),
                   group="activity")
hours = NodeSpec("hours", Interval(tuple(np.linspace(0.0, 40.0, 11)), unit="h"),
                 Partitioned(parent="outcome",
                             table={"low": TNormal(30.0, 40.0, 0, 40),
                                    "medium": TNormal(20.0, 40.0, 0, 40),
                                    "high": TNormal(8.0, 40.0, 0, 40)}),
                 group="indicator")
compiled = compile_network(BayesianNetwork(nodes=(quality, outcome, hours), target="hours"))

prior = infer(compiled)
print("prior hours:", f"mean={prior.summaries['hours'].mean:.2f}")

good = infer(compiled, {"hours": 6.0})
print("observing 6 hours, posterior quality:", np.round(good.vector("quality"), 3))

bad = infer(compiled, {"quality": "low"})
print("forcing low quality, expected hours:", f"{bad.summaries['hours'].mean:.2f}")

print("most probable explanation given 6 hours:", mpe(compiled, {"hours": 6.0}))
