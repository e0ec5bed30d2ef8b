"""Lifted targets: a constrained density exp(-f) on K becomes a nearly
uniform law on {(x, t) : x in K, f(x) <= a t}, and a composite density
exp(-f-h) becomes a nearly uniform law on
{(x, s, t) : h(x) <= a s, f(x) + a s <= b t}.  In both cases dropping the
extra coordinates recovers the original target.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .oracles import FunctionOracle, SetOracle


@dataclass(frozen=True)
class ConstrainedTarget:
    """exp(-f) restricted to K, with the ball-sandwich and Lipschitz
    metadata the sampler's proposal constants rely on."""

    f: FunctionOracle
    K: SetOracle

    @property
    def dimension(self) -> int:
        return self.K.dimension

    @property
    def lipschitz(self) -> float:
        return self.f.lipschitz_bound

    @property
    def outer_radius(self) -> float:
        return self.K.outer_radius


@dataclass(frozen=True)
class SingleLiftedTarget:
    base: ConstrainedTarget
    scale: float = 0.0  # a; 0 means "use the default a = d"

    def __post_init__(self):
        if self.scale == 0.0:
            object.__setattr__(self, "scale", float(self.base.dimension))
        elif self.scale != self.base.dimension:
            warnings.warn(
                "lift scale differs from the dimension; the rejection proposal "
                "envelope constants are stated for scale == dimension",
                stacklevel=2,
            )
        if self.scale <= 0:
            raise ValueError("lift scale must be positive")

    @property
    def lifted_dimension(self) -> int:
        return self.base.dimension + 1


@dataclass(frozen=True)
class CompositeTarget:
    """exp(-f-h) on R^d with f and h accessed through separate oracles."""

    f: FunctionOracle
    h: FunctionOracle

    def __post_init__(self):
        if self.f.dimension != self.h.dimension:
            raise ValueError("f and h must share a dimension")

    @property
    def dimension(self) -> int:
        return self.f.dimension


@dataclass(frozen=True)
class DoubleLiftedTarget:
    base: CompositeTarget
    scale_a: float = 0.0
    scale_b: float = 0.0

    def __post_init__(self):
        if self.scale_a == 0.0:
            object.__setattr__(self, "scale_a", float(self.base.dimension))
        if self.scale_b == 0.0:
            object.__setattr__(self, "scale_b", float(self.base.dimension))
        if self.scale_a <= 0 or self.scale_b <= 0:
            raise ValueError("lift scales must be positive")

    @property
    def lifted_dimension(self) -> int:
        return self.base.dimension + 2


def q_member(target: SingleLiftedTarget, w) -> bool:
    """(x, t) lies in the lifted region iff x in K and f(x) <= a t."""
    w = np.asarray(w, dtype=float)
    x, t = w[:-1], w[-1]
    base = target.base
    return bool(base.K.membership(x)) and base.f.evaluate(x) <= target.scale * t


def qtilde_member(target: DoubleLiftedTarget, p) -> bool:
    """(x, s, t) lies in the double-lifted region iff h(x) <= a s and
    f(x) + a s <= b t."""
    p = np.asarray(p, dtype=float)
    x, s, t = p[:-2], p[-2], p[-1]
    base = target.base
    a, b = target.scale_a, target.scale_b
    return base.h.evaluate(x) <= a * s and base.f.evaluate(x) + a * s <= b * t


def lifted_potential(target, w) -> float:
    """Negative log-density of the lifted law: a*t (b*t for the double
    lift) on the region, +inf off it."""
    w = np.asarray(w, dtype=float)
    if isinstance(target, SingleLiftedTarget):
        return target.scale * w[-1] if q_member(target, w) else np.inf
    if isinstance(target, DoubleLiftedTarget):
        return target.scale_b * w[-1] if qtilde_member(target, w) else np.inf
    raise TypeError(f"not a lifted target: {type(target).__name__}")


def drop_lift(w, d: int) -> np.ndarray:
    """Project a lifted point back to the original space (first d coords)."""
    return np.asarray(w, dtype=float)[:d]
