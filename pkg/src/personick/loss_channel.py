"""Pure-loss channel on a truncated Fock basis, computed two independent ways.

The channel attenuates a single bosonic mode by power transmissivity
tau in [0, 1]. Both implementations act on the same DensityMatrix type:

* ``apply_kraus``: the operator-sum form with Kraus operators
  K_l = sqrt((1-tau)^l / l!) sqrt(tau)^n a^l. On a support truncated at N
  the sum over l stops at N exactly (a^l annihilates everything beyond).
* ``apply_ladder``: the master-equation propagator evaluated in closed
  form band by band. Writing the matrix elements along the l-th
  superdiagonal as a vector c^(l), each band evolves autonomously under
  an upper-triangular matrix; see ``ladder_propagator``.

Each route serves as the other's oracle; they agree to machine precision.
"""

import numpy as np

from .fock_core import DensityMatrix

__all__ = [
    "check_tau",
    "kraus_operators",
    "apply_kraus",
    "ladder_propagator",
    "apply_ladder",
]


def check_tau(tau: float) -> float:
    tau = float(tau)
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {tau}")
    return tau


def kraus_operators(tau: float, cutoff: int) -> list[np.ndarray]:
    """Kraus operators K_0..K_N of the pure-loss channel at transmissivity tau.

    Matrix elements: K_l[n-l, n] = sqrt(C(n, l)) (1-tau)^(l/2) tau^((n-l)/2).
    """
    tau = check_tau(tau)
    dim = cutoff + 1
    ops = []
    for l in range(dim):
        k = np.zeros((dim, dim))
        for n in range(l, dim):
            # binomial via multiplicative recurrence keeps everything in float range
            c = 1.0
            for r in range(l):
                c *= (n - r) / (r + 1)
            k[n - l, n] = np.sqrt(c) * (1 - tau) ** (l / 2) * tau ** ((n - l) / 2)
        ops.append(k)
    return ops


def apply_kraus(rho0: DensityMatrix, tau: float) -> DensityMatrix:
    """Channel output sum_l K_l rho0 K_l^dag at the same cutoff."""
    out = _apply_kraus_raw(rho0.mat, tau)
    return DensityMatrix(out)


def _apply_kraus_raw(mat: np.ndarray, tau: float) -> np.ndarray:
    cutoff = mat.shape[0] - 1
    out = np.zeros_like(mat, dtype=complex)
    for k in kraus_operators(tau, cutoff):
        out += k @ mat @ k.conj().T
    return out


def ladder_propagator(l: int, tau: float, dim: int) -> np.ndarray:
    """Closed-form propagator for the l-th superdiagonal band.

    With rows/columns indexed i, j = 1..dim, the entry for j >= i is

        tau^(l/2 + i - 1) * (1-tau)^(j-i) / (j-i)! * prod_{r=i}^{j-1} sqrt(r (l+r))

    and zero below the diagonal. The l = 0 block maps the photon-number
    distribution to another distribution (columns sum to 1); for l > 0 the
    overall tau^(l/2) factor damps every coherence as tau -> 0.
    """
    if l < 0:
        raise ValueError("band index must be >= 0")
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    tau = check_tau(tau)
    mat = np.zeros((dim, dim))
    for i in range(1, dim + 1):
        # row recurrence from the diagonal; every intermediate value is a
        # final matrix entry, so nothing can overflow
        power = l / 2 + i - 1
        mat[i - 1, i - 1] = tau**power if power > 0 else 1.0
        for j in range(i + 1, dim + 1):
            mat[i - 1, j - 1] = (
                mat[i - 1, j - 2] * (1 - tau) * np.sqrt((j - 1) * (l + j - 1)) / (j - i)
            )
    return mat


def apply_ladder(rho0: DensityMatrix, tau: float) -> DensityMatrix:
    """Channel output via band-wise closed-form propagation."""
    out = _apply_ladder_raw(rho0.mat, tau)
    return DensityMatrix(out)


def _apply_ladder_raw(mat: np.ndarray, tau: float) -> np.ndarray:
    dim = mat.shape[0]
    out = np.zeros_like(mat, dtype=complex)
    for l in range(dim):
        band = np.array([mat[j + l, j] for j in range(dim - l)])
        if not np.any(band):
            continue
        evolved = ladder_propagator(l, tau, dim - l) @ band
        for j in range(dim - l):
            out[j + l, j] = evolved[j]
            if l > 0:
                out[j, j + l] = np.conj(evolved[j])
    return out
