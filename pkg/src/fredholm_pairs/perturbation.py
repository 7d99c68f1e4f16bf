"""Seeded perturbation experiments on pairs and chains.

Each experiment analyzes a base object, then perturbs it ``plan.trials``
times and records what moved. The quotient dimensions a, b, c, d (or the
per-degree dimensions of a chain) are free to jump; the index must not.

Trial ``i`` draws from its own generator spawned from ``plan.seed``, so a
log is a pure function of (object, plan, tolerance).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chains import Chain, ChainAnalysis, analyze_chain, chain_to_pair
from .checks import Check, within
from .hilbert import DEFAULT_TOL, Operator, Tolerance, operator_norm
from .pairs import FredholmPair, PairAnalysis, analyze_pair
from .sampling import complex_gaussian

MODES = ("dense-small-norm", "finite-rank", "compact-analog")
COMPACT_MODES = ("finite-rank", "compact-analog")
EPSILON_NOTE = (
    "in finite dimensions the index equals dim H1 - dim H2 for every perturbation, "
    "so epsilon only bounds the draws; it is not a stability threshold"
)


@dataclass(frozen=True)
class PerturbationPlan:
    epsilon: float = 0.1
    trials: int = 50
    seed: int = 0
    mode: str = "dense-small-norm"
    rank_cap: int = 1

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if self.rank_cap < 1:
            raise ValueError(f"rank_cap must be >= 1, got {self.rank_cap!r}")

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "trials": self.trials,
            "seed": self.seed,
            "mode": self.mode,
            "rank_cap": self.rank_cap,
        }


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    norms: dict
    analysis: PairAnalysis | ChainAnalysis
    index_preserved: bool
    dims_jumped: bool
    checks: tuple[Check, ...] = ()

    def to_dict(self) -> dict:
        return {
            "trial": self.trial,
            "norms": dict(sorted(self.norms.items())),
            "analysis": self.analysis.to_dict(),
            "index_preserved": self.index_preserved,
            "dims_jumped": self.dims_jumped,
            "checks": [c.to_dict() for c in self.checks],
        }


@dataclass(frozen=True)
class ExperimentLog:
    kind: str
    plan: PerturbationPlan
    base: PairAnalysis | ChainAnalysis
    trials: tuple[TrialRecord, ...] = field(default_factory=tuple)

    @property
    def all_index_preserved(self) -> bool:
        return all(t.index_preserved for t in self.trials)

    @property
    def jump_count(self) -> int:
        return sum(t.dims_jumped for t in self.trials)

    def jumps_with_index_preserved(self) -> list[TrialRecord]:
        return [t for t in self.trials if t.dims_jumped and t.index_preserved]

    def summary_checks(self) -> list[Check]:
        failures = sum(not t.index_preserved for t in self.trials)
        checks = [Check("index preserved in every trial", failures == 0, float(failures),
                        f"{failures} of {len(self.trials)} trials changed the index")]
        if self.plan.mode == "dense-small-norm":
            worst = max((max(t.norms.values(), default=0.0) for t in self.trials), default=0.0)
            checks.append(Check("perturbation norms below epsilon", worst < self.plan.epsilon,
                                worst, f"max norm {worst:.6e} < {self.plan.epsilon}"))
        for t in self.trials:
            checks.extend(c for c in t.checks if not c.passed)
        return checks

    def semicontinuity(self) -> dict:
        """How often the kernel-side dimensions stayed at or below base."""
        if isinstance(self.base, PairAnalysis):
            ok = sum(t.analysis.a <= self.base.a and t.analysis.c <= self.base.c for t in self.trials)
        else:
            ok = sum(
                all(k <= kb for (k, _), (kb, _) in zip(t.analysis.per_degree, self.base.per_degree))
                for t in self.trials
            )
        return {"trials": len(self.trials), "kernel_dims_not_increased": ok}

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "plan": self.plan.to_dict(),
            "base": self.base.to_dict(),
            "summary": {
                "all_index_preserved": self.all_index_preserved,
                "trials_with_dimension_jump": self.jump_count,
                "jumps_with_index_preserved": len(self.jumps_with_index_preserved()),
                "semicontinuity": self.semicontinuity(),
                "note": EPSILON_NOTE,
            },
            "trials": [t.to_dict() for t in self.trials],
        }


def _trial_generators(plan: PerturbationPlan) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(plan.seed).spawn(plan.trials)]


def draw_perturbation(rng: np.random.Generator, rows: int, cols: int, plan: PerturbationPlan) -> Operator:
    """One perturbation of shape rows x cols under ``plan.mode``.

    Small-norm draws are Gaussian rescaled to a norm uniform in (0, epsilon);
    finite-rank draws multiply Gaussian factors of rank <= rank_cap with no
    norm control; compact-analog draws are unrestricted Gaussians.
    """
    if rows == 0 or cols == 0:
        return Operator.zeros(rows, cols)
    if plan.mode == "dense-small-norm":
        g = complex_gaussian(rng, rows, cols)
        u = 0.0
        while u == 0.0:
            u = rng.uniform()
        return Operator(g * (plan.epsilon * u / operator_norm(g)))
    if plan.mode == "finite-rank":
        r = min(int(rng.integers(1, plan.rank_cap + 1)), rows, cols)
        return Operator(complex_gaussian(rng, rows, r) @ complex_gaussian(rng, r, cols))
    return Operator(complex_gaussian(rng, rows, cols))


def pair_trial(
    p: FredholmPair,
    base: PairAnalysis,
    dS: Operator,
    dT: Operator,
    tol: Tolerance = DEFAULT_TOL,
    trial: int = 0,
) -> TrialRecord:
    """Analyze (S + dS, T + dT) against ``base``."""
    an = analyze_pair(FredholmPair(p.S + dS, p.T + dT), tol)
    return TrialRecord(
        trial=trial,
        norms={"dS": operator_norm(dS), "dT": operator_norm(dT)},
        analysis=an,
        index_preserved=an.index == base.index,
        dims_jumped=an.dims != base.dims,
    )


def _pair_experiment(p: FredholmPair, plan: PerturbationPlan, tol: Tolerance) -> ExperimentLog:
    base = analyze_pair(p, tol)
    trials = []
    for i, rng in enumerate(_trial_generators(plan)):
        dS = draw_perturbation(rng, p.dim_H2, p.dim_H1, plan)
        dT = draw_perturbation(rng, p.dim_H1, p.dim_H2, plan)
        trials.append(pair_trial(p, base, dS, dT, tol, i))
    return ExperimentLog("pair", plan, base, tuple(trials))


def perturb_pair(p: FredholmPair, plan: PerturbationPlan, tol: Tolerance = DEFAULT_TOL) -> ExperimentLog:
    """Small-norm stability: ||dS||, ||dT|| < epsilon in every trial."""
    if plan.mode != "dense-small-norm":
        raise ValueError(f"perturb_pair needs mode 'dense-small-norm', got {plan.mode!r}")
    return _pair_experiment(p, plan, tol)


def compact_perturb_pair(p: FredholmPair, plan: PerturbationPlan, tol: Tolerance = DEFAULT_TOL) -> ExperimentLog:
    """Compact stability: S + K, T + K' with K, K' finite rank or dense."""
    if plan.mode not in COMPACT_MODES:
        raise ValueError(f"compact_perturb_pair needs a compact mode, got {plan.mode!r}")
    return _pair_experiment(p, plan, tol)


def run_pair_experiment(p: FredholmPair, plan: PerturbationPlan, tol: Tolerance = DEFAULT_TOL) -> ExperimentLog:
    if plan.mode == "dense-small-norm":
        return perturb_pair(p, plan, tol)
    return compact_perturb_pair(p, plan, tol)


def chain_trial(
    ch: Chain,
    base: ChainAnalysis,
    perturbations,
    tol: Tolerance = DEFAULT_TOL,
    trial: int = 0,
) -> TrialRecord:
    """Analyze the chain with delta_p replaced by delta_p + perturbations[p-1]."""
    perturbed = Chain(ch.dims, [d + k for d, k in zip(ch.deltas, perturbations)])
    an = analyze_chain(perturbed, tol)
    norms = {f"delta_{p}": operator_norm(k) for p, k in enumerate(perturbations, start=1)}

    before, after = chain_to_pair(ch), chain_to_pair(perturbed)
    even_sum = sum(norms[f"delta_{p}"] for p in range(2, ch.n + 1, 2))
    odd_sum = sum(norms[f"delta_{p}"] for p in range(1, ch.n + 1, 2))
    dS = operator_norm(after.S.entries - before.S.entries)
    dT = operator_norm(after.T.entries - before.T.entries)
    slack = tol.residual_atol * (1.0 + even_sum + odd_sum)
    checks = (
        within("||S - S'|| <= sum over even p", max(0.0, dS - even_sum), slack),
        within("||T - T'|| <= sum over odd p", max(0.0, dT - odd_sum), slack),
    )
    return TrialRecord(
        trial=trial,
        norms=norms,
        analysis=an,
        index_preserved=an.index == base.index,
        dims_jumped=an.per_degree != base.per_degree,
        checks=checks,
    )


def _chain_experiment(ch: Chain, plan: PerturbationPlan, tol: Tolerance) -> ExperimentLog:
    base = analyze_chain(ch, tol)
    trials = []
    for i, rng in enumerate(_trial_generators(plan)):
        ks = [draw_perturbation(rng, d.rows, d.cols, plan) for d in ch.deltas]
        trials.append(chain_trial(ch, base, ks, tol, i))
    return ExperimentLog("chain", plan, base, tuple(trials))


def perturb_chain(ch: Chain, plan: PerturbationPlan, tol: Tolerance = DEFAULT_TOL) -> ExperimentLog:
    if plan.mode != "dense-small-norm":
        raise ValueError(f"perturb_chain needs mode 'dense-small-norm', got {plan.mode!r}")
    return _chain_experiment(ch, plan, tol)


def compact_perturb_chain(ch: Chain, plan: PerturbationPlan, tol: Tolerance = DEFAULT_TOL) -> ExperimentLog:
    if plan.mode not in COMPACT_MODES:
        raise ValueError(f"compact_perturb_chain needs a compact mode, got {plan.mode!r}")
    return _chain_experiment(ch, plan, tol)


def run_chain_experiment(ch: Chain, plan: PerturbationPlan, tol: Tolerance = DEFAULT_TOL) -> ExperimentLog:
    if plan.mode == "dense-small-norm":
        return perturb_chain(ch, plan, tol)
    return compact_perturb_chain(ch, plan, tol)
