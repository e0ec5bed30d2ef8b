"""Minimize a strongly convex function over a convex body given only a
separation oracle, with a certified optimality gap.

The solver is the central-cut ellipsoid method: infeasible centers are cut
with the feasibility separator, feasible centers with an objective
subgradient.  Every objective cut doubles as an affine minorant, and the
closed-form minimum of each minorant over the current ellipsoid yields a
certified lower bound on the constrained minimum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._backend import kernels
from .oracles import SeparationResult

_SEMI_AXIS_FLOOR = 1e-14


class InfeasibleRegionError(RuntimeError):
    """The localization ellipsoid degenerated before any feasible point was seen."""


@dataclass
class CpProblem:
    dimension: int
    objective_value: Callable[[np.ndarray], float]
    objective_subgradient: Callable[[np.ndarray], np.ndarray]
    feasible_set: Callable[[np.ndarray], SeparationResult]
    enclosing_radius: float
    target_gap: float
    strong_convexity: float = 0.0
    center: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.enclosing_radius <= 0:
            raise ValueError("enclosing_radius must be positive")
        if self.target_gap <= 0:
            raise ValueError("target_gap must be positive")


@dataclass
class CpResult:
    point: np.ndarray
    best_value: float
    certified_gap: float
    separation_calls: int
    subgradient_calls: int
    converged: bool
    iterations: int = 0


def iteration_budget(n: int, R: float, eps: float, mu: float) -> int:
    mu_eff = min(mu, 1.0) if mu > 0 else 1.0
    return int(50 * n * n * math.log(max(R / math.sqrt(eps * mu_eff * 0.5), 10.0))) + 1000


def cp_minimize(problem: CpProblem, iteration_callback=None) -> CpResult:
    """Run the ellipsoid method until the certified gap reaches target_gap,
    the iteration budget runs out (converged=False), or the ellipsoid
    degenerates numerically."""
    n = problem.dimension
    eps = problem.target_gap
    R = problem.enclosing_radius
    c = (
        np.zeros(n)
        if problem.center is None
        else np.array(problem.center, dtype=float, copy=True)
    )
    # Euclidean ball circumscribing the initial box R * B_inf(center)
    P = np.eye(n) * (R * R * n)

    budget = iteration_budget(n, R, eps, problem.strong_convexity)
    cap = min(budget, 200_000)
    V = np.empty(cap)
    X = np.empty((cap, n))
    G = np.empty((cap, n))
    k = 0

    best_val = math.inf
    best_x = None
    sep_calls = 0
    sub_calls = 0
    converged = False
    gap = math.inf
    it = 0

    for it in range(1, budget + 1):
        if iteration_callback is not None:
            iteration_callback(c.copy(), P.copy())
        res = problem.feasible_set(c)
        sep_calls += 1
        if res.inside:
            v = float(problem.objective_value(c))
            g = np.asarray(problem.objective_subgradient(c), dtype=float)
            sub_calls += 1
            if v < best_val:
                best_val = v
                best_x = c.copy()
            if k < cap:
                V[k] = v
                X[k] = c
                G[k] = g
                k += 1
            if not np.any(g):
                # exact unconstrained minimum, feasible
                gap = 0.0
                converged = True
                break
        else:
            g = np.asarray(res.separator, dtype=float)

        if best_x is not None and k > 0 and (k <= 128 or it % 16 == 0):
            gap = best_val - kernels.certificate_lower(V, X, G, k, c, P)
            if gap <= eps:
                converged = True
                break

        gnorm = float(np.linalg.norm(g))
        gPg = kernels.ellipsoid_update(c, P, g)
        if gPg <= 0 or not math.isfinite(gPg) or math.sqrt(max(gPg, 0.0)) < _SEMI_AXIS_FLOOR * gnorm:
            break

    if best_x is None:
        raise InfeasibleRegionError(
            "no feasible point found before the localization region degenerated"
        )
    if not converged and k > 0:
        gap = best_val - kernels.certificate_lower(V, X, G, k, c, P)
        converged = gap <= eps
    gap = max(gap, 0.0)
    return CpResult(
        point=best_x,
        best_value=best_val,
        certified_gap=gap,
        separation_calls=sep_calls,
        subgradient_calls=sub_calls,
        converged=converged,
        iterations=it,
    )
