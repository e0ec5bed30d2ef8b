"""Uniform oracle interfaces for convex functions and convex sets, and the
compositions that build separation oracles for lifted feasible regions.

Conventions: a separator g at an infeasible query x satisfies
<g, x> > <g, y> for every feasible y.  Separators are returned unnormalized.
Membership comparisons are exact floating-point inequalities (no slack).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


class CapabilityError(RuntimeError):
    """An oracle lacks the capability (subgradient/proximal) an operation needs."""


class NumericError(RuntimeError):
    """A numerical subroutine failed to converge within its budget."""


@dataclass(frozen=True)
class SeparationResult:
    inside: bool
    separator: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.inside:
            if self.separator is None:
                raise ValueError("separated result requires a separator")
            if not np.any(self.separator):
                raise ValueError("separator must be nonzero")


INSIDE = SeparationResult(True)


def separated(g) -> SeparationResult:
    return SeparationResult(False, np.asarray(g, dtype=float))


@dataclass(frozen=True)
class FunctionOracle:
    """Access to a closed convex function: evaluation always, subgradient and
    proximal map optionally.  lipschitz_bound is caller-supplied metadata."""

    dimension: int
    evaluate: Callable[[np.ndarray], float]
    subgradient: Optional[Callable[[np.ndarray], np.ndarray]] = None
    proximal: Optional[Callable[[np.ndarray, float], np.ndarray]] = None
    lipschitz_bound: float = 0.0

    @property
    def has_subgradient(self) -> bool:
        return self.subgradient is not None

    @property
    def has_proximal(self) -> bool:
        return self.proximal is not None

    def scaled(self, factor: float) -> "FunctionOracle":
        """The oracle for factor * f (factor > 0).

        prox_{lam * (factor f)} = prox_{(lam*factor) f}, so proximal access
        survives positive scaling.
        """
        if factor <= 0:
            raise ValueError("scaling factor must be positive")
        f = self
        sub = None
        if f.subgradient is not None:
            sub = lambda x: factor * f.subgradient(x)
        prox = None
        if f.proximal is not None:
            prox = lambda x, lam: f.proximal(x, lam * factor)
        return FunctionOracle(
            dimension=f.dimension,
            evaluate=lambda x: factor * f.evaluate(x),
            subgradient=sub,
            proximal=prox,
            lipschitz_bound=factor * f.lipschitz_bound,
        )


@dataclass(frozen=True)
class SetOracle:
    """Access to a closed convex set: membership and separation always,
    projection optionally.  inner/outer radii are metadata for the
    ball-sandwich condition on the constraint set."""

    dimension: int
    membership: Callable[[np.ndarray], bool]
    separation: Callable[[np.ndarray], SeparationResult]
    projection: Optional[Callable[[np.ndarray], np.ndarray]] = None
    inner_radius: float = 1.0
    outer_radius: float = np.inf


def separate_epigraph_subgrad(f: FunctionOracle, q) -> SeparationResult:
    """Separation oracle for epi(f) at q = (x, t), built from evaluation and
    subgradient access: infeasible queries get the separator (g, -1) with
    g a subgradient at x."""
    if not f.has_subgradient:
        raise CapabilityError("epigraph separation needs a subgradient oracle")
    q = np.asarray(q, dtype=float)
    x, t = q[:-1], q[-1]
    if f.evaluate(x) <= t:
        return INSIDE
    g = f.subgradient(x)
    return separated(np.append(g, -1.0))


def project_epigraph_prox(f: FunctionOracle, q, tol: float) -> np.ndarray:
    """Euclidean projection of q = (x, t) onto epi(f) using the proximal map.

    For infeasible q the projection is (prox_{lam* f}(x), t + lam*) where
    lam* is the unique root of phi(lam) = f(prox_{lam f}(x)) - t - lam,
    located by doubling an upper bracket and then bisecting to |phi| <= tol.
    """
    if not f.has_proximal:
        raise CapabilityError("epigraph projection needs a proximal oracle")
    if tol <= 0:
        raise ValueError("tol must be positive")
    q = np.asarray(q, dtype=float)
    x, t = q[:-1], q[-1]
    gap = f.evaluate(x) - t
    if gap <= 0:
        return q.copy()

    def phi(lam):
        return f.evaluate(f.proximal(x, lam)) - t - lam

    lo = 0.0  # phi(0+) = gap > 0
    hi = max(tol, gap)
    val = phi(hi)
    doublings = 0
    while val >= 0.0:
        lo = hi
        hi *= 2.0
        doublings += 1
        if doublings > 200:
            raise NumericError("epigraph projection: bracket doubling budget exhausted")
        val = phi(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = phi(mid)
        if abs(val) <= tol:
            p = f.proximal(x, mid)
            return np.append(p, t + mid)
        if val > 0.0:
            lo = mid
        else:
            hi = mid
    raise NumericError("epigraph projection: bisection budget exhausted")


def separation_from_projection(proj: Callable[[np.ndarray], np.ndarray], x) -> SeparationResult:
    """Convert a Euclidean projection oracle into a separation oracle:
    infeasible x gets the separator x - proj(x)."""
    x = np.asarray(x, dtype=float)
    p = proj(x)
    g = x - p
    if not np.any(g):
        return INSIDE
    return separated(g)


def separate_constrained_Q(
    K: SetOracle, f: FunctionOracle, a: float, q, tol: float = 1e-10
) -> SeparationResult:
    """Separation oracle for the lifted region {(x, t) : x in K, f(x) <= a t}.

    Infeasible x gets the lifted K-separator (p, 0); feasible x with a
    violated inequality gets an epigraph separator for f/a, via the
    subgradient construction when available and the proximal projection
    route otherwise.
    """
    q = np.asarray(q, dtype=float)
    x, t = q[:-1], q[-1]
    res = K.separation(x)
    if not res.inside:
        return separated(np.append(res.separator, 0.0))
    if f.evaluate(x) <= a * t:
        return INSIDE
    fs = f.scaled(1.0 / a)
    if f.has_subgradient:
        return separate_epigraph_subgrad(fs, q)
    if f.has_proximal:
        return separation_from_projection(lambda w: project_epigraph_prox(fs, w, tol), q)
    raise CapabilityError("constrained-region separation needs a subgradient or proximal oracle")


def prox_ftilde(prox_f: Callable[[np.ndarray, float], np.ndarray], a: float, lam: float, q):
    """Proximal map of (x, s) -> f(x) + a*s: the objective splits, giving
    (prox_{lam f}(x0), s0 - lam*a) in closed form."""
    q = np.asarray(q, dtype=float)
    x0, s0 = q[:-1], q[-1]
    return np.append(prox_f(x0, lam), s0 - lam * a)


def _ftilde_oracle(f: FunctionOracle, a: float) -> FunctionOracle:
    """Oracle for (x, s) -> f(x) + a*s on R^{d+1}."""
    sub = None
    if f.subgradient is not None:
        sub = lambda p: np.append(f.subgradient(p[:-1]), a)
    prox = None
    if f.proximal is not None:
        prox = lambda p, lam: prox_ftilde(f.proximal, a, lam, p)
    return FunctionOracle(
        dimension=f.dimension + 1,
        evaluate=lambda p: f.evaluate(p[:-1]) + a * p[-1],
        subgradient=sub,
        proximal=prox,
        lipschitz_bound=float(np.hypot(f.lipschitz_bound, a)),
    )


CASE_PROX_PROX = "prox_prox"
CASE_SUBGRAD_PROX = "subgrad_prox"


def separate_Qtilde(
    case: str,
    f: FunctionOracle,
    h: FunctionOracle,
    a: float,
    b: float,
    p,
    tol: float = 1e-10,
) -> SeparationResult:
    """Separation oracle for the double-lifted region
    {(x, s, t) : h(x) <= a s, f(x) + a s <= b t}.

    The (x, s)-constraint is handled through the epi(h/a) projection built
    from prox_h, lifted by a zero t-coordinate.  The remaining epigraph
    constraint uses the subgradient (f'(x), a) of the partially-lifted
    potential ("subgrad_prox") or its proximal map ("prox_prox").
    """
    if case not in (CASE_PROX_PROX, CASE_SUBGRAD_PROX):
        raise ValueError(f"unknown oracle case: {case!r}")
    if not h.has_proximal:
        raise CapabilityError("both oracle cases need a proximal oracle for h")
    if case == CASE_PROX_PROX and not f.has_proximal:
        raise CapabilityError("prox_prox case needs a proximal oracle for f")
    if case == CASE_SUBGRAD_PROX and not f.has_subgradient:
        raise CapabilityError("subgrad_prox case needs a subgradient oracle for f")

    p = np.asarray(p, dtype=float)
    x, s, t = p[:-2], p[-2], p[-1]
    xs = p[:-1]

    if h.evaluate(x) > a * s:
        hs = h.scaled(1.0 / a)
        res = separation_from_projection(lambda w: project_epigraph_prox(hs, w, tol), xs)
        return separated(np.append(res.separator, 0.0))

    ft = _ftilde_oracle(f, a).scaled(1.0 / b)
    if f.evaluate(x) + a * s <= b * t:
        return INSIDE
    if case == CASE_SUBGRAD_PROX:
        return separate_epigraph_subgrad(ft, p)
    return separation_from_projection(lambda w: project_epigraph_prox(ft, w, tol), p)


def qtilde_case_for(f: FunctionOracle, h: FunctionOracle) -> str:
    """Pick the oracle case supported by (f, h), preferring the subgradient
    construction for f."""
    if h.has_proximal and f.has_subgradient:
        return CASE_SUBGRAD_PROX
    if h.has_proximal and f.has_proximal:
        return CASE_PROX_PROX
    raise CapabilityError("no separation construction matches the available oracles")


def separate_ball(center, radius: float, x) -> SeparationResult:
    """Separation oracle for the closed ball of the given center and radius."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    center = np.asarray(center, dtype=float)
    x = np.asarray(x, dtype=float)
    d = x - center
    if float(d @ d) <= radius * radius:
        return INSIDE
    return separated(d)


def separate_intersection(oracles, x) -> SeparationResult:
    """Separation oracle for an intersection: the first member to separate
    wins; inside iff every member reports inside."""
    if not oracles:
        raise ValueError("need at least one oracle")
    for oracle in oracles:
        res = oracle(x)
        if not res.inside:
            return res
    return INSIDE
