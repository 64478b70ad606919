"""Shared helpers for the test suite."""

import numpy as np

from personick import BetaPrior, DeltaPrior, DensityMatrix, PureState, TwoPointPrior


def random_pure_state(rng, cutoff: int) -> PureState:
    v = rng.normal(size=cutoff + 1) + 1j * rng.normal(size=cutoff + 1)
    return PureState(v / np.linalg.norm(v))


def random_density(rng, cutoff: int) -> DensityMatrix:
    dim = cutoff + 1
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    mat = x @ x.conj().T
    return DensityMatrix(mat / np.trace(mat).real)


def random_prior(rng):
    kind = rng.integers(0, 3)
    if kind == 0:
        q = rng.uniform(0.05, 0.95)
        t0, t1 = np.sort(rng.uniform(0.02, 0.98, size=2))
        return TwoPointPrior(q, float(t0), float(t1))
    if kind == 1:
        return BetaPrior(rng.uniform(0.5, 6.0), rng.uniform(0.5, 6.0))
    return DeltaPrior(rng.uniform(0.05, 0.95))
