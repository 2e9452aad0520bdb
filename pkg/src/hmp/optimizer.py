"""Reward-weighted black-box search over DMP weight matrices.

Each iteration draws R Gaussian perturbations of the current weight matrix,
rolls every candidate out, maps costs to normalized exponential weights, and
proposes the weighted average as the next center.  The proposal is itself
evaluated and kept only when it does not cost more than the incumbent, so
the best-so-far sequence never increases; exploration shrinks by a constant
decay factor per iteration.

Determinism: the perturbations of iteration ``i`` come from a generator
seeded with ``(seed, i)`` and are drawn before any rollout runs, and rollout
results are gathered in sample order, so traces are bit-identical for a
fixed seed at any thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import runio
from .errors import ScenarioInfeasible
from .rollout import Termination

__all__ = [
    "BboConfig",
    "IterationRecord",
    "OptimizerTrace",
    "sample_batch",
    "cost_weights",
    "update",
    "optimize",
]

_WEIGHT_EPS = 1e-12


@dataclass(frozen=True)
class BboConfig:
    """Search settings: exploration scale, weighting sharpness, stopping."""

    n_rollouts: int = 15
    sigma0: float | tuple = 20.0
    decay: float = 0.97
    temperature: float = 10.0
    max_iters: int = 40
    convergence_eps: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.n_rollouts < 2:
            raise ValueError("n_rollouts must be at least 2")
        sig = np.atleast_1d(np.asarray(self.sigma0, dtype=float))
        if sig.shape not in ((1,), (3,)) or not np.all(sig > 0.0):
            raise ValueError("sigma0 must be a positive scalar or one positive value per control DOF")
        if sig.shape == (3,):
            object.__setattr__(self, "sigma0", tuple(float(s) for s in sig))
        else:
            object.__setattr__(self, "sigma0", float(sig[0]))
        if not 0.0 < self.decay <= 1.0:
            raise ValueError("decay must lie in (0, 1]")
        if self.temperature <= 0.0:
            raise ValueError("temperature must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.convergence_eps < 0.0:
            raise ValueError("convergence_eps must be non-negative")
        if self.seed < 0:
            raise ValueError("seed must be non-negative (it feeds a seed sequence)")

    def sigma_at(self, iteration):
        """Exploration std at a 1-based iteration index."""
        return np.asarray(self.sigma0, dtype=float) * self.decay ** (iteration - 1)


def sample_batch(theta_hat, sigma, n, rng):
    """``n`` Gaussian perturbations of ``theta_hat``, drawn in index order.

    ``sigma`` is a scalar std or one std per row (control DOF).  Draw ``r``
    is a pure function of the generator's seed and ``r``, so a generator
    seeded per iteration makes every sample reproducible in isolation.
    """
    theta_hat = np.asarray(theta_hat, dtype=float)
    sig = np.atleast_1d(np.asarray(sigma, dtype=float))
    if np.any(sig <= 0.0):
        raise ValueError("sigma must be positive")
    if sig.size > 1:
        sig = sig.reshape(theta_hat.shape[0], 1)
    noise = rng.standard_normal((n,) + theta_hat.shape)
    return theta_hat[None, :, :] + sig * noise


def cost_weights(costs, temperature):
    """Normalized exponential weights of min-max scaled costs.

    The scaling makes the weights invariant under positive affine transforms
    of the cost vector; equal costs come out uniform.
    """
    c = np.asarray(costs, dtype=float)
    span = float(c.max() - c.min())
    w = np.exp(-temperature * (c - c.min()) / (span + _WEIGHT_EPS))
    return w / w.sum()


def update(theta_hat, samples, costs, temperature):
    """Reward-weighted average of the samples.

    ``theta_hat`` only fixes the expected shape; the new center is built
    from the samples alone, which makes the update equivariant under a
    constant shift applied to the center and all samples together.
    """
    theta_hat = np.asarray(theta_hat, dtype=float)
    samples = np.asarray(samples, dtype=float)
    costs = np.asarray(costs, dtype=float)
    if samples.ndim != 3 or samples.shape[1:] != theta_hat.shape:
        raise ValueError("samples must stack matrices shaped like theta_hat")
    if samples.shape[0] != costs.shape[0] or samples.shape[0] == 0:
        raise ValueError("need one finite cost per sample")
    if not np.all(np.isfinite(costs)):
        raise ValueError("costs must be finite")
    w = cost_weights(costs, temperature)
    return np.tensordot(w, samples, axes=1)


@dataclass
class IterationRecord:
    """One iteration: exploration scale, sample outcomes, proposal verdict."""

    iteration: int
    sigma: float | tuple
    sample_costs: np.ndarray
    sample_terminations: tuple
    candidate_cost: float
    accepted: bool
    incumbent_cost: float
    theta: np.ndarray = field(repr=False)
    adopted: str = "none"


@dataclass
class OptimizerTrace:
    """Complete search history, serializable to canonical JSON and CSV."""

    initial_cost: float
    initial_termination: str
    records: list = field(default_factory=list)
    converged: bool = False

    @property
    def incumbent_costs(self):
        return [r.incumbent_cost for r in self.records]

    def to_dict(self):
        return {
            "initial_cost": self.initial_cost,
            "initial_termination": self.initial_termination,
            "converged": self.converged,
            "iterations": [
                {
                    "iteration": r.iteration,
                    "sigma": list(np.atleast_1d(r.sigma).astype(float)),
                    "sample_costs": [float(c) for c in r.sample_costs],
                    "sample_terminations": list(r.sample_terminations),
                    "candidate_cost": r.candidate_cost,
                    "accepted": r.accepted,
                    "adopted": r.adopted,
                    "incumbent_cost": r.incumbent_cost,
                    "theta": [[float(v) for v in row] for row in r.theta],
                }
                for r in self.records
            ],
        }

    def to_json(self):
        return runio.canonical_json(self.to_dict())

    def cost_curve_csv(self):
        """Per-iteration summary CSV: exploration scale and cost statistics."""
        lines = ["iteration,sigma,best_sample_cost,mean_sample_cost,candidate_cost,accepted,incumbent_cost"]
        for r in self.records:
            lines.append(
                ",".join(
                    [
                        str(r.iteration),
                        repr(float(np.max(r.sigma))),
                        repr(float(np.min(r.sample_costs))),
                        repr(float(np.mean(r.sample_costs))),
                        repr(float(r.candidate_cost)),
                        str(int(r.accepted)),
                        repr(float(r.incumbent_cost)),
                    ]
                )
            )
        return "\n".join(lines) + "\n"


def optimize(scenario, config=None, n_threads=1, theta0=None, progress=None):
    """Run the sample/evaluate/update loop and return (theta_best, trace).

    The search starts from ``theta0`` (default: the zero policy) and samples
    around the incumbent.  Each iteration the incumbent moves to the better
    of the reward-weighted average and the single best sample, whenever that
    improves on it.  The loop stops on ``max_iters`` or once the incumbent
    cost changes by less than ``convergence_eps`` (relative) for three
    consecutive iterations.  ``progress`` is called with each finished
    IterationRecord.  Raises ScenarioInfeasible when not a single rollout
    of the whole run completes.
    """
    cfg = config if config is not None else scenario.bbo
    if n_threads < 1:
        raise ValueError("n_threads must be at least 1")
    theta = np.array(scenario.dmp.zero_theta() if theta0 is None else theta0, dtype=float)
    scenario.dmp.check_theta(theta)

    incumbent_cost, base_roll = scenario.policy_cost(theta)
    any_completed = base_roll.termination is Termination.COMPLETED
    trace = OptimizerTrace(
        initial_cost=float(incumbent_cost),
        initial_termination=base_roll.termination.value,
    )

    pool = ThreadPoolExecutor(max_workers=n_threads) if n_threads > 1 else None
    try:
        flat_streak = 0
        for it in range(1, cfg.max_iters + 1):
            sigma = cfg.sigma_at(it)
            rng = np.random.default_rng([cfg.seed, it])
            thetas = sample_batch(theta, sigma, cfg.n_rollouts, rng)
            if pool is not None:
                results = list(pool.map(scenario.policy_cost, thetas))
            else:
                results = [scenario.policy_cost(t) for t in thetas]
            costs = np.array([c for c, _ in results])
            terms = tuple(r.termination.value for _, r in results)
            any_completed = any_completed or any(
                t == Termination.COMPLETED.value for t in terms
            )

            candidate = update(theta, thetas, costs, cfg.temperature)
            cand_cost, cand_roll = scenario.policy_cost(candidate)
            any_completed = any_completed or cand_roll.termination is Termination.COMPLETED

            prev_cost = incumbent_cost
            best_i = int(np.argmin(costs))
            adopted = "none"
            if cand_cost <= incumbent_cost and cand_cost <= costs[best_i]:
                theta = candidate
                incumbent_cost = float(cand_cost)
                adopted = "candidate"
            elif costs[best_i] < incumbent_cost:
                # The averaged proposal cancels a pair of opposite good
                # directions (a tilt either way helps entry equally), so a
                # raw sample that beats both the average and the incumbent
                # is kept instead of being washed out.
                theta = thetas[best_i].copy()
                incumbent_cost = float(costs[best_i])
                adopted = "sample"
            accepted = adopted != "none"
            record = IterationRecord(
                iteration=it,
                sigma=tuple(sigma.tolist()) if sigma.ndim else float(sigma),
                sample_costs=costs,
                sample_terminations=terms,
                candidate_cost=float(cand_cost),
                accepted=accepted,
                incumbent_cost=float(incumbent_cost),
                theta=theta.copy(),
                adopted=adopted,
            )
            trace.records.append(record)
            if progress is not None:
                progress(record)

            rel_change = abs(incumbent_cost - prev_cost) / max(abs(prev_cost), _WEIGHT_EPS)
            flat_streak = flat_streak + 1 if rel_change < cfg.convergence_eps else 0
            if flat_streak >= 3:
                trace.converged = True
                break
    finally:
        if pool is not None:
            pool.shutdown()

    if not any_completed:
        err = ScenarioInfeasible(
            "no rollout completed in any iteration; every policy terminated early"
        )
        err.trace = trace
        raise err
    return theta, trace
