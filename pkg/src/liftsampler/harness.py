"""Independent reference oracles and fixed test instances: brute-force
truncated-Gaussian sampling, quadrature moments for low-dimensional
targets, a two-sample KS comparator, and the instance registry used by the
verification suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson
from scipy.stats import ks_2samp

from .lifting import (
    CompositeTarget,
    ConstrainedTarget,
    DoubleLiftedTarget,
    SingleLiftedTarget,
)
from .oracles import INSIDE, FunctionOracle, SetOracle, separated
from .proposal import inverse_exp_tail


# ---------------------------------------------------------------------------
# building-block oracles
# ---------------------------------------------------------------------------


def box_set(d: int, radius: float = 1.0) -> SetOracle:
    """[-radius, radius]^d with projection-based separation."""

    def membership(x):
        return bool(np.all(np.abs(x) <= radius))

    def projection(x):
        return np.clip(x, -radius, radius)

    def separation(x):
        p = projection(x)
        g = x - p
        if not np.any(g):
            return INSIDE
        return separated(g)

    return SetOracle(
        dimension=d,
        membership=membership,
        separation=separation,
        projection=projection,
        inner_radius=radius,
        outer_radius=radius * math.sqrt(d),
    )


def ball_set(d: int, radius: float = 2.0) -> SetOracle:
    """radius * B_d(0) with projection-based separation."""

    def membership(x):
        return bool(x @ x <= radius * radius)

    def projection(x):
        norm = float(np.linalg.norm(x))
        if norm <= radius:
            return np.asarray(x, dtype=float)
        return (radius / norm) * np.asarray(x, dtype=float)

    def separation(x):
        if membership(x):
            return INSIDE
        return separated(np.asarray(x, dtype=float))

    return SetOracle(
        dimension=d,
        membership=membership,
        separation=separation,
        projection=projection,
        inner_radius=radius,
        outer_radius=radius,
    )


def zero_potential(d: int) -> FunctionOracle:
    return FunctionOracle(
        dimension=d,
        evaluate=lambda x: 0.0,
        subgradient=lambda x: np.zeros(d),
        proximal=lambda x, lam: np.asarray(x, dtype=float),
        lipschitz_bound=0.0,
    )


def l1_potential(d: int, weight: float = 1.0, shift: Optional[np.ndarray] = None) -> FunctionOracle:
    """weight * ||x - shift||_1 with sign subgradients and the
    soft-threshold proximal map."""
    x0 = np.zeros(d) if shift is None else np.asarray(shift, dtype=float)

    def evaluate(x):
        return weight * float(np.sum(np.abs(x - x0)))

    def subgradient(x):
        return weight * np.sign(x - x0)

    def proximal(x, lam):
        z = np.asarray(x, dtype=float) - x0
        return x0 + np.sign(z) * np.maximum(np.abs(z) - lam * weight, 0.0)

    return FunctionOracle(
        dimension=d,
        evaluate=evaluate,
        subgradient=subgradient,
        proximal=proximal,
        lipschitz_bound=weight * math.sqrt(d),
    )


def linear_potential(c: np.ndarray) -> FunctionOracle:
    c = np.asarray(c, dtype=float)

    def proximal(x, lam):
        return np.asarray(x, dtype=float) - lam * c

    return FunctionOracle(
        dimension=c.shape[0],
        evaluate=lambda x: float(c @ x),
        subgradient=lambda x: c.copy(),
        proximal=proximal,
        lipschitz_bound=float(np.linalg.norm(c)),
    )


def abs_potential(weight: float = 1.0, shift: float = 0.0) -> FunctionOracle:
    """1-D weight * |x - shift|."""
    return l1_potential(1, weight=weight, shift=np.array([shift]))


# ---------------------------------------------------------------------------
# instance registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    name: str
    kind: str  # "constrained" | "composite"
    dimension: int
    target: object  # SingleLiftedTarget | DoubleLiftedTarget
    description: str

    def nu_logdensity(self, x) -> float:
        """Unnormalized negative log-density of the unlifted target."""
        x = np.asarray(x, dtype=float)
        if self.kind == "constrained":
            base = self.target.base
            if not base.K.membership(x):
                return math.inf
            return base.f.evaluate(x)
        base = self.target.base
        return base.f.evaluate(x) + base.h.evaluate(x)


_BALL_RADIUS = 2.0


def make_instance(name: str, d: int, scale_a=None, scale_b=None) -> Instance:
    """Fixed registry: C1 box + l1, C2 ball + zero, C3 ball + unit linear,
    P1 composite |x| and 2|x - 1/2| (d = 1), P2 composite l1 and shifted l1."""
    name = name.upper()
    a = float(d) if scale_a is None else float(scale_a)
    b = float(d) if scale_b is None else float(scale_b)
    if name == "C1":
        base = ConstrainedTarget(f=l1_potential(d), K=box_set(d))
        target = SingleLiftedTarget(base, scale=a)
        desc = f"box [-1,1]^{d} with the l1 potential"
    elif name == "C2":
        base = ConstrainedTarget(f=zero_potential(d), K=ball_set(d, _BALL_RADIUS))
        target = SingleLiftedTarget(base, scale=a)
        desc = f"ball of radius {_BALL_RADIUS} with the zero potential"
    elif name == "C3":
        c = np.ones(d) / math.sqrt(d)
        base = ConstrainedTarget(f=linear_potential(c), K=ball_set(d, _BALL_RADIUS))
        target = SingleLiftedTarget(base, scale=a)
        desc = f"ball of radius {_BALL_RADIUS} with a unit linear potential"
    elif name == "P1":
        if d != 1:
            raise ValueError("P1 is a one-dimensional instance")
        base = CompositeTarget(f=abs_potential(1.0), h=abs_potential(2.0, shift=0.5))
        target = DoubleLiftedTarget(base, scale_a=a, scale_b=b)
        desc = "composite |x| + 2|x - 0.5|"
    elif name == "P2":
        shift = 0.5 * np.ones(d)
        base = CompositeTarget(f=l1_potential(d), h=l1_potential(d, shift=shift))
        target = DoubleLiftedTarget(base, scale_a=a, scale_b=b)
        desc = f"composite l1 + shifted l1 in dimension {d}"
    else:
        raise KeyError(f"unknown instance {name!r}")
    kind = "constrained" if name.startswith("C") else "composite"
    return Instance(name=name, kind=kind, dimension=d, target=target, description=desc)


INSTANCE_NAMES = ("C1", "C2", "C3", "P1", "P2")


def _potential_from_spec(spec, d: int) -> FunctionOracle:
    name = spec.get("name") if isinstance(spec, dict) else spec
    params = spec if isinstance(spec, dict) else {}
    weight = float(params.get("weight", 1.0))
    if name == "zero":
        return zero_potential(d)
    if name in ("l1", "scaled_l1", "shifted_l1"):
        shift = params.get("shift")
        if shift is not None:
            shift = np.asarray(shift, dtype=float)
        return l1_potential(d, weight=weight, shift=shift)
    if name == "linear":
        c = np.asarray(params.get("direction", np.ones(d) / math.sqrt(d)), dtype=float)
        return linear_potential(weight * c)
    raise ValueError(f"unknown potential {name!r}")


def instance_from_spec(spec: dict) -> Instance:
    """Build an inline instance: constrained specs name a set (box/ball with
    a radius) and a potential; composite specs name two potentials."""
    kind = spec.get("kind")
    d = int(spec.get("dimension", 1))
    if kind == "constrained":
        set_name = spec.get("set", "box")
        radius = float(spec.get("set_radius", 1.0 if set_name == "box" else _BALL_RADIUS))
        if set_name == "box":
            K = box_set(d, radius)
        elif set_name == "ball":
            K = ball_set(d, radius)
        else:
            raise ValueError(f"unknown set {set_name!r}")
        f = _potential_from_spec(spec.get("potential", "zero"), d)
        target = SingleLiftedTarget(
            ConstrainedTarget(f=f, K=K), scale=float(spec.get("scale_a", d))
        )
        return Instance(
            name=spec.get("name", "inline"),
            kind="constrained",
            dimension=d,
            target=target,
            description="inline constrained instance",
        )
    if kind == "composite":
        f = _potential_from_spec(spec.get("f", "zero"), d)
        h = _potential_from_spec(spec.get("h", "l1"), d)
        target = DoubleLiftedTarget(
            CompositeTarget(f=f, h=h),
            scale_a=float(spec.get("scale_a", d)),
            scale_b=float(spec.get("scale_b", d)),
        )
        return Instance(
            name=spec.get("name", "inline"),
            kind="composite",
            dimension=d,
            target=target,
            description="inline composite instance",
        )
    raise ValueError("inline instance spec needs kind 'constrained' or 'composite'")


def sample_feasible_lifted(instance: Instance, rng) -> np.ndarray:
    """Draw a point of the lifted feasible region (used by separator tests):
    a base point from the constraint geometry plus exponential-tail lifts."""
    d = instance.dimension
    if instance.kind == "constrained":
        target = instance.target
        base = target.base
        while True:
            x = rng.uniform(-base.outer_radius, base.outer_radius, size=d)
            if base.K.membership(x):
                break
        t = inverse_exp_tail(target.scale, base.f.evaluate(x) / target.scale, rng.random())
        return np.append(x, t)
    target = instance.target
    base = target.base
    a, btil = target.scale_a, target.scale_b
    x = rng.uniform(-3.0, 3.0, size=d)
    s = inverse_exp_tail(a, base.h.evaluate(x) / a, rng.random())
    t = inverse_exp_tail(btil, (base.f.evaluate(x) + a * s) / btil, rng.random())
    return np.concatenate([x, [s, t]])


# ---------------------------------------------------------------------------
# reference oracles and comparators
# ---------------------------------------------------------------------------


def naive_truncated_gaussian(z, eta: float, member: Callable, rng, max_tries: int = 10**7):
    """Exact draw from N(z, eta I) restricted to {member}: resample the
    unrestricted Gaussian until it lands inside."""
    z = np.asarray(z, dtype=float)
    sigma = math.sqrt(eta)
    for _ in range(max_tries):
        x = z + sigma * rng.standard_normal(z.shape[0])
        if member(x):
            return x
    raise RuntimeError("naive truncated-Gaussian oracle exhausted its tries")


@dataclass(frozen=True)
class MomentReport:
    mean: np.ndarray
    var_diag: np.ndarray
    abs_norm_mean: float  # E ||X||_1
    se_mean: np.ndarray
    count: int

    @staticmethod
    def from_samples(samples) -> "MomentReport":
        samples = np.atleast_2d(np.asarray(samples, dtype=float))
        n = samples.shape[0]
        mean = samples.mean(axis=0)
        var = samples.var(axis=0, ddof=1)
        return MomentReport(
            mean=mean,
            var_diag=var,
            abs_norm_mean=float(np.abs(samples).sum(axis=1).mean()),
            se_mean=np.sqrt(var / n),
            count=n,
        )


def _grid_moments_1d(logdensity, lo, hi, n_points):
    xs = np.linspace(lo, hi, n_points)
    logw = np.array([-logdensity(np.array([x])) for x in xs])
    w = np.exp(logw - logw[np.isfinite(logw)].max())
    w[~np.isfinite(logw)] = 0.0
    mass = simpson(w, x=xs)
    mean = simpson(w * xs, x=xs) / mass
    second = simpson(w * xs * xs, x=xs) / mass
    absm = simpson(w * np.abs(xs), x=xs) / mass
    return np.array([mean]), np.array([second - mean * mean]), absm


def _grid_moments_2d(logdensity, lo, hi, n_points):
    xs = np.linspace(lo, hi, n_points)
    W = np.empty((n_points, n_points))
    for i, xi in enumerate(xs):
        for j, yj in enumerate(xs):
            W[i, j] = -logdensity(np.array([xi, yj]))
    W = np.exp(W - W[np.isfinite(W)].max())
    W[~np.isfinite(W)] = 0.0

    def integ(F):
        return simpson(simpson(F, x=xs, axis=1), x=xs)

    mass = integ(W)
    gx, gy = np.meshgrid(xs, xs, indexing="ij")
    mean = np.array([integ(W * gx), integ(W * gy)]) / mass
    second = np.array([integ(W * gx * gx), integ(W * gy * gy)]) / mass
    absm = integ(W * (np.abs(gx) + np.abs(gy))) / mass
    return mean, second - mean * mean, absm


def quadrature_moments(instance: Instance, n_points: int = 4001) -> MomentReport:
    """Composite-Simpson moments of the normalized target density; the
    standard error field reports the change under one grid refinement."""
    d = instance.dimension
    if d > 2:
        raise ValueError("quadrature reference supports d <= 2 only")
    if instance.kind == "constrained":
        R = instance.target.base.outer_radius
        lo, hi = -R, R
    else:
        lo, hi = -10.0, 10.0
    grid = _grid_moments_1d if d == 1 else _grid_moments_2d
    mean, var, absm = grid(instance.nu_logdensity, lo, hi, n_points)
    mean2, var2, absm2 = grid(instance.nu_logdensity, lo, hi, 2 * n_points - 1)
    se = np.abs(mean2 - mean) + 1e-15
    return MomentReport(
        mean=mean2, var_diag=var2, abs_norm_mean=absm2, se_mean=se, count=n_points
    )


def ks_two_sample(a, b):
    """Two-sample Kolmogorov-Smirnov statistic with the asymptotic p-value."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be nonempty")
    res = ks_2samp(a, b, method="asymp")
    return float(res.statistic), float(res.pvalue)
