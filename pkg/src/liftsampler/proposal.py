"""Exact sampling of the shifted-radial proposal density
exp(-(||w - center|| - c)^2 / (2 eta)) by polar decomposition: a uniform
direction times a one-dimensional log-concave radial draw, plus the
inverse-CDF exponential-tail draw used for chain initialization.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels


@dataclass(frozen=True)
class RadialLaw:
    """Density proportional to r^power * exp(-(r - shift)^2 / (2 step)) on
    (0, inf); log-concave since the second log-derivative is
    -power/r^2 - 1/step < 0."""

    power: float
    shift: float
    step: float

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.power < 0:
            raise ValueError("power must be nonnegative")
        if self.shift < 0:
            raise ValueError("shift must be nonnegative")

    def log_density(self, r):
        r = np.asarray(r, dtype=float)
        out = -((r - self.shift) ** 2) / (2.0 * self.step)
        if self.power > 0:
            out = out + self.power * np.log(r)
        return out

    def log_density_dd(self, r):
        r = np.asarray(r, dtype=float)
        return -self.power / r**2 - 1.0 / self.step


@dataclass(frozen=True)
class ProposalSpec:
    center: np.ndarray
    radial_shift: float
    step: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.radial_shift < 0:
            raise ValueError("radial_shift must be nonnegative")

    @property
    def dimension(self) -> int:
        return self.center.shape[0]

    def radial_law(self) -> RadialLaw:
        return RadialLaw(self.dimension - 1, self.radial_shift, self.step)


def sample_unit_sphere(n: int, rng) -> np.ndarray:
    """Uniform direction: a standard Gaussian vector, normalized."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    while True:
        w = rng.standard_normal(n)
        norm = float(np.linalg.norm(w))
        if norm > 0:
            return w / norm


def ars_sample(law: RadialLaw, rng) -> float:
    """Exact draw from the radial law by adaptive rejection sampling."""
    return kernels.radial_ars(law.power, law.shift, law.step, rng)


def sample_proposal(spec: ProposalSpec, rng) -> np.ndarray:
    """center + r * theta with theta uniform on the sphere and r drawn from
    the radial law of power n-1; the resulting density is proportional to
    exp(-(||w - center|| - shift)^2 / (2 step))."""
    theta = sample_unit_sphere(spec.dimension, rng)
    r = ars_sample(spec.radial_law(), rng)
    return spec.center + r * theta


def inverse_exp_tail(rate: float, lower: float, u: float) -> float:
    """Inverse-CDF draw from the normalized tail density
    rate * exp(-rate (t - lower)) on [lower, inf): t = lower - log(1-u)/rate."""
    if rate <= 0:
        raise ValueError("rate must be positive")
    if not 0.0 <= u < 1.0:
        raise ValueError("u must lie in [0, 1)")
    return lower - math.log1p(-u) / rate
