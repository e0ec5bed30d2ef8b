"""Outer Gibbs loops: alternate a Gaussian forward step with the restricted
Gaussian oracle on the lifted region, starting from a feasible point whose
lift coordinates are drawn by inverse-CDF exponential tails.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .lifting import (
    DoubleLiftedTarget,
    SingleLiftedTarget,
    drop_lift,
    q_member,
    qtilde_member,
)
from .proposal import inverse_exp_tail
from .rgo import (
    DEFAULT_PROPOSAL_BUDGET,
    RgoInputComposite,
    RgoInputConstrained,
    RgoStats,
    rgo_sample_composite,
    rgo_sample_constrained,
)


@dataclass
class SamplerConfig:
    iterations: int
    burn_in: Optional[int] = None  # default max(10 d^2, 1000)
    eta: Optional[float] = None  # default 1/d^2
    scale_a: Optional[float] = None  # default d
    scale_b: Optional[float] = None  # default d
    seed: int = 0
    proposal_budget: int = DEFAULT_PROPOSAL_BUDGET

    def resolved(self, d: int) -> "SamplerConfig":
        cfg = SamplerConfig(
            iterations=self.iterations,
            burn_in=self.burn_in if self.burn_in is not None else max(10 * d * d, 1000),
            eta=self.eta if self.eta is not None else 1.0 / (d * d),
            scale_a=self.scale_a if self.scale_a is not None else float(d),
            scale_b=self.scale_b if self.scale_b is not None else float(d),
            seed=self.seed,
            proposal_budget=self.proposal_budget,
        )
        if cfg.iterations <= 0:
            raise ValueError("iterations must be positive")
        if cfg.burn_in < 0 or cfg.burn_in >= cfg.iterations:
            raise ValueError("burn_in must lie in [0, iterations)")
        if cfg.eta <= 0:
            raise ValueError("eta must be positive")
        return cfg


@dataclass
class ChainState:
    point: np.ndarray  # lifted iterate
    step: int = 0
    stats: RgoStats = field(default_factory=RgoStats)


@dataclass
class Trace:
    samples: np.ndarray  # kept iterates, projected down
    lifted: np.ndarray  # kept iterates with lift coordinates
    step_index: np.ndarray
    proposals_per_step: np.ndarray  # every step, burn-in included
    stats: RgoStats
    config: dict


def mix_seed(seed: int, index: int) -> int:
    """Derive per-chain seeds: (seed + index) through a splitmix64 round."""
    z = (seed + index + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


def init_constrained(x0, target: SingleLiftedTarget, rng) -> ChainState:
    """Lift a feasible x0 by the exponential-tail draw t0 >= f(x0)/a."""
    x0 = np.asarray(x0, dtype=float)
    base = target.base
    if not base.K.membership(x0):
        raise ValueError("initial point must belong to the constraint set")
    a = target.scale
    t0 = inverse_exp_tail(a, base.f.evaluate(x0) / a, rng.random())
    return ChainState(point=np.append(x0, t0))


def init_composite(x0, target: DoubleLiftedTarget, rng) -> ChainState:
    """Lift x0 twice: s0 >= h(x0)/a then t0 >= (f(x0) + a s0)/b."""
    x0 = np.asarray(x0, dtype=float)
    base = target.base
    a, b = target.scale_a, target.scale_b
    s0 = inverse_exp_tail(a, base.h.evaluate(x0) / a, rng.random())
    t0 = inverse_exp_tail(b, (base.f.evaluate(x0) + a * s0) / b, rng.random())
    return ChainState(point=np.concatenate([x0, [s0, t0]]))


def step_constrained(
    state: ChainState, config: SamplerConfig, target: SingleLiftedTarget, rng
) -> ChainState:
    noisy = state.point + math.sqrt(config.eta) * rng.standard_normal(state.point.shape[0])
    inp = RgoInputConstrained(y=noisy[:-1], s=noisy[-1], eta=config.eta, target=target)
    point, stats = rgo_sample_constrained(inp, rng, proposal_budget=config.proposal_budget)
    state.point = point
    state.step += 1
    state.stats.merge(stats)
    return state


def step_composite(
    state: ChainState, config: SamplerConfig, target: DoubleLiftedTarget, rng
) -> ChainState:
    noisy = state.point + math.sqrt(config.eta) * rng.standard_normal(state.point.shape[0])
    inp = RgoInputComposite(point=noisy, eta=config.eta, target=target, prev=state.point)
    point, stats = rgo_sample_composite(inp, rng, proposal_budget=config.proposal_budget)
    state.point = point
    state.step += 1
    state.stats.merge(stats)
    return state


def run(config: SamplerConfig, target, x0=None, rng=None) -> Trace:
    """Initialize, iterate, and collect one chain.  Deterministic given the
    seed; every stored iterate is checked for lifted-region membership."""
    constrained = isinstance(target, SingleLiftedTarget)
    if not constrained and not isinstance(target, DoubleLiftedTarget):
        raise TypeError(f"not a lifted target: {type(target).__name__}")
    d = target.base.dimension
    cfg = config.resolved(d)
    if constrained and cfg.scale_a != target.scale:
        raise ValueError("config scale_a disagrees with the target lift scale")
    if not constrained and (cfg.scale_a, cfg.scale_b) != (target.scale_a, target.scale_b):
        raise ValueError("config scales disagree with the target lift scales")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    if x0 is None:
        x0 = np.zeros(d)

    if constrained:
        state = init_constrained(x0, target, rng)
        stepper, member = step_constrained, q_member
    else:
        state = init_composite(x0, target, rng)
        stepper, member = step_composite, qtilde_member

    kept = cfg.iterations - cfg.burn_in
    lifted = np.empty((kept, target.lifted_dimension))
    steps = np.empty(kept, dtype=np.int64)
    proposals = np.empty(cfg.iterations, dtype=np.int64)
    j = 0
    for it in range(cfg.iterations):
        before = state.stats.proposals
        state = stepper(state, cfg, target, rng)
        proposals[it] = state.stats.proposals - before
        if it >= cfg.burn_in:
            if not member(target, state.point):
                raise RuntimeError("chain iterate left the lifted region")
            lifted[j] = state.point
            steps[j] = it
            j += 1

    config_echo = {
        "kind": "constrained" if constrained else "composite",
        "dimension": d,
        "eta": cfg.eta,
        "scale_a": cfg.scale_a,
        "scale_b": cfg.scale_b,
        "iterations": cfg.iterations,
        "burn_in": cfg.burn_in,
        "seed": cfg.seed,
        "proposal_budget": cfg.proposal_budget,
    }
    return Trace(
        samples=lifted[:, :d].copy(),
        lifted=lifted,
        step_index=steps,
        proposals_per_step=proposals,
        stats=state.stats,
        config=config_echo,
    )
