"""Truncated-Fock-space state and operator primitives.

All state types are immutable value objects over a photon-number basis
0..cutoff. The cutoff is always explicit: the pure-loss channel only moves
photon number downward, so a finite support is exactly closed and no
silent resizing is ever needed.
"""

from dataclasses import dataclass, field
from math import ceil

import numpy as np

from .numeric import POLICY

__all__ = [
    "PureState",
    "DensityMatrix",
    "FockState",
    "InBetweenState",
    "as_pure",
    "pure_to_density",
    "mean_photon",
    "commutator_norm",
]


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PureState:
    """Normalized complex amplitude vector d_0..d_N over the Fock basis.

    Parameters
    ----------
    amps : array_like
        Complex amplitudes indexed by photon number.
    cutoff : int, optional
        Highest photon number N; inferred as ``len(amps) - 1`` when omitted.
    """

    amps: np.ndarray
    cutoff: int = field(default=-1)

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if amps.size == 0:
            raise ValueError("amps must be non-empty")
        if not np.all(np.isfinite(amps.view(float))):
            raise ValueError("amps must be finite")
        cutoff = self.cutoff if self.cutoff >= 0 else amps.size - 1
        if cutoff != amps.size - 1:
            raise ValueError(f"cutoff {cutoff} inconsistent with {amps.size} amplitudes")
        norm_err = abs(np.vdot(amps, amps).real - 1.0)
        if norm_err > POLICY.construction_tol:
            raise ValueError(f"state not normalized: |<psi|psi> - 1| = {norm_err:.3e}")
        object.__setattr__(self, "amps", _readonly(amps))
        object.__setattr__(self, "cutoff", cutoff)

    def mean_photon(self) -> float:
        """Mean photon number sum(n |d_n|^2)."""
        n = np.arange(self.cutoff + 1)
        return float(np.sum(n * np.abs(self.amps) ** 2))

    def to_density(self) -> "DensityMatrix":
        return pure_to_density(self)

    def with_phase(self, phi: float) -> "PureState":
        """Apply the number-operator phase exp(i*phi*n) to each amplitude."""
        n = np.arange(self.cutoff + 1)
        return PureState(np.exp(1j * phi * n) * self.amps)

    def padded(self, cutoff: int) -> "PureState":
        """Embed into a larger truncation by appending zero amplitudes."""
        if cutoff < self.cutoff:
            raise ValueError("cannot pad to a smaller cutoff")
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[: self.cutoff + 1] = self.amps
        return PureState(amps)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix on the Fock basis."""

    mat: np.ndarray
    cutoff: int = field(default=-1)

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("mat must be square")
        cutoff = self.cutoff if self.cutoff >= 0 else mat.shape[0] - 1
        if cutoff != mat.shape[0] - 1:
            raise ValueError(f"cutoff {cutoff} inconsistent with shape {mat.shape}")
        herm_err = np.abs(mat - mat.conj().T).max()
        if herm_err > POLICY.construction_tol:
            raise ValueError(f"matrix not Hermitian: max |M - M^dag| = {herm_err:.3e}")
        tr_err = abs(np.trace(mat).real - 1.0)
        if tr_err > POLICY.derived_tol:
            raise ValueError(f"trace differs from 1 by {tr_err:.3e}")
        min_eig = float(np.linalg.eigvalsh(mat).min())
        if min_eig < -POLICY.derived_tol:
            raise ValueError(f"matrix not positive semidefinite: min eigenvalue {min_eig:.3e}")
        object.__setattr__(self, "mat", _readonly(mat))
        object.__setattr__(self, "cutoff", cutoff)

    def mean_photon(self) -> float:
        n = np.arange(self.cutoff + 1)
        return float(np.sum(n * np.diag(self.mat).real))

    def diagonal(self) -> np.ndarray:
        """Photon-number outcome probabilities <k|rho|k>."""
        return np.diag(self.mat).real.copy()


@dataclass(frozen=True)
class FockState:
    """Definite photon-number state |n>."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise ValueError("photon number must be a non-negative integer")
        object.__setattr__(self, "n", int(self.n))

    def to_pure(self, cutoff: int | None = None) -> PureState:
        cutoff = self.n if cutoff is None else cutoff
        if cutoff < self.n:
            raise ValueError(f"cutoff {cutoff} below photon number {self.n}")
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[self.n] = 1.0
        return PureState(amps)

    def mean_photon(self) -> float:
        return float(self.n)


@dataclass(frozen=True)
class InBetweenState:
    """Superposition of the two Fock states nearest to a target mean photon number.

    For nbar with ceiling m, the state is a|m-1> + c|m> with
    c = sqrt(1 - m + nbar) and a = sqrt(1 - c^2), both real and
    non-negative, so the mean photon number equals nbar exactly. Integer
    nbar collapses to the Fock state |nbar>.
    """

    nbar: float

    def __post_init__(self):
        if not np.isfinite(self.nbar) or self.nbar < 0:
            raise ValueError("mean photon number must be finite and >= 0")
        object.__setattr__(self, "nbar", float(self.nbar))

    @property
    def ceil_n(self) -> int:
        return ceil(self.nbar)

    @property
    def upper_amp(self) -> float:
        """Amplitude c on |ceil(nbar)>."""
        return float(np.sqrt(1.0 - self.ceil_n + self.nbar))

    @property
    def lower_amp(self) -> float:
        """Amplitude a on |ceil(nbar) - 1>."""
        return float(np.sqrt(max(0.0, 1.0 - self.upper_amp**2)))

    def to_pure(self, cutoff: int | None = None) -> PureState:
        m = self.ceil_n
        cutoff = m if cutoff is None else cutoff
        if cutoff < m:
            raise ValueError(f"cutoff {cutoff} below ceil(nbar) = {m}")
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[m] = self.upper_amp
        if m >= 1:
            amps[m - 1] = self.lower_amp
        return PureState(amps)

    def mean_photon(self) -> float:
        return self.nbar


StateLike = PureState | FockState | InBetweenState


def as_pure(state: StateLike, cutoff: int | None = None) -> PureState:
    """Coerce any state type to a PureState, optionally padded to ``cutoff``."""
    if isinstance(state, PureState):
        pure = state
    elif isinstance(state, (FockState, InBetweenState)):
        pure = state.to_pure()
    else:
        raise TypeError(f"not a state: {type(state).__name__}")
    if cutoff is not None and cutoff != pure.cutoff:
        pure = pure.padded(cutoff)
    return pure


def pure_to_density(state: StateLike) -> DensityMatrix:
    """Rank-one projector |psi><psi| of a pure state."""
    pure = as_pure(state)
    return DensityMatrix(np.outer(pure.amps, pure.amps.conj()))


def mean_photon(state: StateLike | DensityMatrix) -> float:
    """Mean photon number of any state type."""
    return state.mean_photon()


def commutator_norm(a, b) -> float:
    """Frobenius norm of the commutator AB - BA.

    Accepts DensityMatrix objects or plain square arrays of equal dimension.
    """
    ma = a.mat if isinstance(a, DensityMatrix) else np.asarray(a)
    mb = b.mat if isinstance(b, DensityMatrix) else np.asarray(b)
    if ma.shape != mb.shape:
        raise ValueError(f"dimension mismatch: {ma.shape} vs {mb.shape}")
    return float(np.linalg.norm(ma @ mb - mb @ ma, "fro"))
