"""Bounded probability distributions and their discretization onto bin grids.

All distributions here live on a finite interval: the doubly truncated Normal
is renormalized on [lower, upper], the exponential is truncated the same way,
and the remaining variants (point mass, continuous uniform) are bounded by
construction.  ``discretize`` turns any of them into a probability vector over
a strictly increasing edge grid; that vector is what node probability tables
are ultimately built from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import ndtr


class ZeroMassError(ValueError):
    """Raised when a distribution has no probability mass on the bin range."""


@dataclass(frozen=True)
class TNormal:
    """Normal(mean, variance) renormalized to [lower, upper]."""

    mean: float
    variance: float
    lower: float = 0.0
    upper: float = 1.0

    def __post_init__(self) -> None:
        if self.variance <= 0:
            raise ValueError(f"TNormal variance must be > 0, got {self.variance}")
        if not self.lower < self.upper:
            raise ValueError(f"TNormal bounds must satisfy lower < upper, got [{self.lower}, {self.upper}]")

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class Exponential:
    """Exponential with the given mean, truncated and renormalized to [lower, upper]."""

    mean: float
    lower: float = 0.0
    upper: float = math.inf

    def __post_init__(self) -> None:
        if self.mean <= 0:
            raise ValueError(f"Exponential mean must be > 0, got {self.mean}")
        if not self.lower < self.upper:
            raise ValueError(f"Exponential bounds must satisfy lower < upper, got [{self.lower}, {self.upper}]")


@dataclass(frozen=True)
class PointMass:
    value: float


@dataclass(frozen=True)
class UniformContinuous:
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not self.lower < self.upper:
            raise ValueError(f"Uniform bounds must satisfy lower < upper, got [{self.lower}, {self.upper}]")


Distribution = Union[TNormal, Exponential, PointMass, UniformContinuous]


def _phi(z: float) -> float:
    """Standard normal density."""
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


def _normal_interval(z1: float, z2: float) -> float:
    """P(z1 < Z <= z2) for standard normal Z, stable in both tails."""
    if z1 >= z2:
        return 0.0
    if z1 >= 0.0:
        # both in the upper tail: difference of survival functions
        return float(ndtr(-z1) - ndtr(-z2))
    return float(ndtr(z2) - ndtr(z1))


def _interval_mass(dist: Distribution, a: float, b: float) -> float:
    """Unnormalized mass of ``dist`` on [a, b] before its own truncation constant.

    The truncation constant cancels in ``discretize`` because the vector is
    renormalized over the full edge range anyway.
    """
    if isinstance(dist, TNormal):
        lo, hi = max(a, dist.lower), min(b, dist.upper)
        if lo >= hi:
            return 0.0
        return _normal_interval((lo - dist.mean) / dist.sd, (hi - dist.mean) / dist.sd)
    if isinstance(dist, Exponential):
        lo, hi = max(a, dist.lower, 0.0), min(b, dist.upper)
        if lo >= hi:
            return 0.0
        rate = 1.0 / dist.mean
        # e^{-r lo} - e^{-r hi}, computed via expm1 for small differences
        return math.exp(-rate * lo) * -math.expm1(-rate * (hi - lo))
    if isinstance(dist, UniformContinuous):
        lo, hi = max(a, dist.lower), min(b, dist.upper)
        return max(hi - lo, 0.0) / (dist.upper - dist.lower)
    raise TypeError(f"no interval mass for {type(dist).__name__}")


def bin_index(edges: np.ndarray, value: float) -> int:
    """Index of the bin containing ``value``: half-open bins, last bin closed."""
    edges = np.asarray(edges, dtype=float)
    if value < edges[0] or value > edges[-1]:
        raise ValueError(f"value {value} outside bin range [{edges[0]}, {edges[-1]}]")
    if value == edges[-1]:
        return len(edges) - 2
    return int(np.searchsorted(edges, value, side="right") - 1)


def discretize(dist: Distribution, edges) -> np.ndarray:
    """Probability vector of ``dist`` over the bins defined by ``edges``.

    Element i is the mass on [edges[i], edges[i+1]), renormalized so the
    vector sums to one over the full edge range.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or len(edges) < 2:
        raise ValueError("edges must be a 1-d array of at least two values")
    if not np.all(np.diff(edges) > 0):
        raise ValueError("edges must be strictly increasing")

    if isinstance(dist, PointMass):
        vec = np.zeros(len(edges) - 1)
        vec[bin_index(edges, dist.value)] = 1.0
        return vec

    masses = np.array([_interval_mass(dist, edges[i], edges[i + 1]) for i in range(len(edges) - 1)])
    total = masses.sum()
    if total <= 0.0:
        raise ZeroMassError(f"{dist} has zero mass on [{edges[0]}, {edges[-1]}]")
    return masses / total


def tnormal_moments(dist: TNormal) -> dict:
    """Closed-form mean and variance of the doubly truncated Normal."""
    sd = dist.sd
    alpha = (dist.lower - dist.mean) / sd
    beta = (dist.upper - dist.mean) / sd
    z = _normal_interval(alpha, beta)
    if z <= 0.0:
        raise ZeroMassError(f"{dist} has zero mass on its truncation interval")
    phi_a, phi_b = _phi(alpha), _phi(beta)
    shift = (phi_a - phi_b) / z
    mean = dist.mean + sd * shift
    variance = dist.variance * (1.0 + (alpha * phi_a - beta * phi_b) / z - shift * shift)
    return {"mean": mean, "variance": variance}
