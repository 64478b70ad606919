"""Constrained random-state search and MSE sweeps.

Random probe states at fixed mean photon number are drawn by sampling the
photon-number weights p_n uniformly from the polytope

    { p >= 0, sum_n p_n = 1, sum_n n p_n = nbar }

with a hit-and-run Markov chain (uniform direction in the constraint null
space, uniform point on the feasible chord), then attaching independent
uniform phases to the amplitudes sqrt(p_n). A sweep evaluates, over a
grid of nbar values, the MMSE of the two-component reference state, the
PNR-detection MSE, the Fock-state values at integer grid points, and the
MMSE of every random sample, producing the scatter-plus-envelope datasets
used to probe whether any sampled state beats the reference curve.
"""

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy import linalg as sla

from .fock_core import FockState, InBetweenState, PureState
from .personick_solver import DEFAULT_ORDER, GammaAccumulator, delta_from_set, solve_b
from .pnr_measurement import pnr_mse
from .priors import Prior

__all__ = [
    "StateSample",
    "SweepResult",
    "ConjectureReport",
    "sample_states",
    "sweep",
    "conjecture_check",
    "chain_seed",
    "mmse_phase_spread",
]

SCHEMA_VERSION = "v1"
BURN_IN = 100
THINNING = 10


@dataclass
class StateSample:
    """One random probe with its constraint target and evaluation result."""

    state: PureState
    nbar: float
    seed: int
    index: int
    mse: float | None = None


def chain_seed(master_seed: int, grid_index: int) -> int:
    """Deterministic per-grid-point chain seed derived from the master seed."""
    return int(np.random.SeedSequence((master_seed, grid_index)).generate_state(1)[0])


def _fixed_point(nbar: float, cutoff: int) -> np.ndarray | None:
    """The unique weight vector when the constraint polytope is a point."""
    if cutoff == 0:
        return np.array([1.0])
    if cutoff == 1:
        return np.array([1.0 - nbar, nbar])
    if nbar == 0.0 or nbar == float(cutoff):
        p = np.zeros(cutoff + 1)
        p[0 if nbar == 0.0 else cutoff] = 1.0
        return p
    return None


def _hit_and_run_step(p: np.ndarray, basis: np.ndarray, rng) -> np.ndarray:
    d = basis @ rng.standard_normal(basis.shape[1])
    norm = np.linalg.norm(d)
    if norm < 1e-12:
        return p
    d /= norm
    pos = d > 1e-14
    neg = d < -1e-14
    # a zero-sum direction always has both signs, so the chord is bounded
    t_lo = np.max(-p[pos] / d[pos])
    t_hi = np.min(-p[neg] / d[neg])
    return p + rng.uniform(t_lo, t_hi) * d


def sample_states(nbar: float, cutoff: int, count: int, seed: int) -> list[StateSample]:
    """Draw ``count`` random pure states with mean photon number nbar.

    Weights come from a single seeded hit-and-run chain (100 burn-in
    steps, one sample every 10 steps); each sample gets fresh uniform
    phases. Deterministic for a fixed (nbar, cutoff, count, seed).
    """
    if not 0.0 <= nbar <= cutoff:
        raise ValueError(f"nbar must lie in [0, {cutoff}], got {nbar}")
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    dim = cutoff + 1

    fixed = _fixed_point(nbar, cutoff)
    samples = []
    if fixed is not None:
        for i in range(count):
            samples.append(_make_sample(fixed, nbar, seed, i, rng))
        return samples

    constraints = np.vstack([np.ones(dim), np.arange(dim, dtype=float)])
    basis = sla.null_space(constraints)
    pinv = np.linalg.pinv(constraints)
    target = np.array([1.0, nbar])
    theta = nbar / cutoff
    p = np.array([comb(cutoff, k) * theta**k * (1 - theta) ** (cutoff - k) for k in range(dim)])

    for _ in range(BURN_IN):
        p = _hit_and_run_step(p, basis, rng)
    for i in range(count):
        for _ in range(THINNING):
            p = _hit_and_run_step(p, basis, rng)
        # re-project onto the equality constraints so float drift cannot
        # accumulate over long chains, then clean up roundoff negatives
        p = p + pinv @ (target - constraints @ p)
        p = np.clip(p, 0.0, None)
        p /= p.sum()
        samples.append(_make_sample(p, nbar, seed, i, rng))
    return samples


def _make_sample(p: np.ndarray, nbar: float, seed: int, index: int, rng) -> StateSample:
    phases = rng.uniform(0.0, 2.0 * np.pi, p.size)
    amps = np.sqrt(p) * np.exp(1j * phases)
    return StateSample(state=PureState(amps), nbar=nbar, seed=seed, index=index)


@dataclass
class SweepResult:
    """Per-grid-point curves plus the sample scatter for one prior."""

    prior: str
    cutoff: int
    count: int
    seed: int
    order: int
    grid: list[float]
    inbetween: list[float]
    pnr: list[float]
    fock: list[tuple[int, float]]
    samples: list[StateSample] = field(default_factory=list)
    schema: str = SCHEMA_VERSION

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["nbar", "kind", "mse", "seed"])
            for nb, ib, pn in zip(self.grid, self.inbetween, self.pnr):
                writer.writerow([repr(float(nb)), "inbetween", repr(float(ib)), self.seed])
                writer.writerow([repr(float(nb)), "pnr", repr(float(pn)), self.seed])
            for n, mse in self.fock:
                writer.writerow([repr(float(n)), "fock", repr(float(mse)), self.seed])
            for s in self.samples:
                writer.writerow([repr(float(s.nbar)), "sample", repr(float(s.mse)), s.seed])

    def to_json(self, path) -> None:
        payload = {
            "schema": self.schema,
            "prior": self.prior,
            "cutoff": self.cutoff,
            "count": self.count,
            "seed": self.seed,
            "order": self.order,
            "grid": [float(x) for x in self.grid],
            "inbetween": [float(x) for x in self.inbetween],
            "pnr": [float(x) for x in self.pnr],
            "fock": [{"n": int(n), "mse": float(m)} for n, m in self.fock],
            "samples": [
                {
                    "nbar": float(s.nbar),
                    "index": s.index,
                    "seed": s.seed,
                    "mse": float(s.mse),
                }
                for s in self.samples
            ],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")


def _worker_limit(workers: int | None) -> int:
    cap = int(os.environ.get("PERSONICK_THREADS", "1"))
    cap = max(cap, 1)
    return min(workers, cap) if workers else cap


def sweep(
    prior: Prior,
    nbar_grid,
    cutoff: int,
    count: int,
    seed: int,
    order: int = DEFAULT_ORDER,
    workers: int | None = None,
) -> SweepResult:
    """Evaluate reference curves and random-sample MMSEs over a nbar grid."""
    grid = [float(nb) for nb in nbar_grid]
    if any(nb < 0 or nb > cutoff for nb in grid):
        raise ValueError("grid values must lie in [0, cutoff]")
    acc = GammaAccumulator(prior, cutoff, order)
    limit = _worker_limit(workers)

    def mse_of(state) -> float:
        return delta_from_set(solve_b(acc.gammas(state)))

    result = SweepResult(
        prior=prior.describe(),
        cutoff=cutoff,
        count=count,
        seed=seed,
        order=order,
        grid=grid,
        inbetween=[],
        pnr=[],
        fock=[],
    )
    for gi, nb in enumerate(grid):
        reference = InBetweenState(nb)
        result.inbetween.append(mse_of(reference))
        result.pnr.append(pnr_mse(reference.to_pure(cutoff), prior, order))
        if abs(nb - round(nb)) < 1e-9:
            n = int(round(nb))
            result.fock.append((n, mse_of(FockState(n))))
        samples = sample_states(nb, cutoff, count, chain_seed(seed, gi))
        if limit > 1:
            with ThreadPoolExecutor(max_workers=limit) as pool:
                mses = list(pool.map(lambda s: mse_of(s.state), samples))
        else:
            mses = [mse_of(s.state) for s in samples]
        for s, m in zip(samples, mses):
            s.mse = m
        result.samples.extend(samples)
    return result


@dataclass(frozen=True)
class ConjectureReport:
    """Outcome of testing whether any sample beats the reference curve."""

    tolerance: float
    n_samples: int
    violations: tuple
    warning: str | None = None

    @property
    def ok(self) -> bool:
        return not self.violations


def conjecture_check(result: SweepResult, tolerance: float = 1e-9) -> ConjectureReport:
    """List every sample whose MMSE undercuts the reference curve by more
    than ``tolerance``, with enough metadata to regenerate it."""
    curve = dict(zip(result.grid, result.inbetween))
    violations = []
    for s in result.samples:
        gap = curve[s.nbar] - s.mse
        if gap > tolerance:
            violations.append(
                {
                    "nbar": s.nbar,
                    "index": s.index,
                    "seed": s.seed,
                    "sample_mse": s.mse,
                    "reference_mse": curve[s.nbar],
                    "gap": gap,
                }
            )
    warning = "no samples to check" if not result.samples else None
    return ConjectureReport(
        tolerance=tolerance,
        n_samples=len(result.samples),
        violations=tuple(violations),
        warning=warning,
    )


def mmse_phase_spread(
    weights,
    prior: Prior,
    cutoff: int,
    n_phases: int,
    seed: int,
    order: int = DEFAULT_ORDER,
) -> tuple[float, float]:
    """(min, max) MMSE over random phase assignments of fixed weights.

    Phases are irrelevant for two-component states but generally matter
    for three or more occupied levels; the spread quantifies that.
    """
    weights = np.asarray(weights, dtype=float)
    rng = np.random.default_rng(seed)
    acc = GammaAccumulator(prior, cutoff, order)
    values = []
    for _ in range(n_phases):
        phases = rng.uniform(0.0, 2.0 * np.pi, weights.size)
        state = PureState(np.sqrt(weights) * np.exp(1j * phases))
        values.append(delta_from_set(solve_b(acc.gammas(state))))
    return min(values), max(values)
