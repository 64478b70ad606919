"""Closed-form MMSE and optimal-measurement eigenvalues for Fock-state probes.

A Fock state |n> stays Fock-diagonal under pure loss, with photon-number
distribution given by the binomial law

    e_l(tau) = C(n, l) tau^(n-l) (1-tau)^l,   l = 0..n,

(l photons lost). All prior-weighted moment operators are then diagonal,
and the minimum mean square error, the optimal measurement eigenvalues,
and their generic-prior functionals reduce to finite sums over l.
"""

from dataclasses import dataclass
from math import comb, lgamma

import numpy as np

from .priors import Prior

__all__ = [
    "binomial_weight",
    "binomial_law",
    "GenericPriorFunctionals",
    "generic_prior_functionals",
    "fock_mmse_twopoint",
    "fock_b_eigenvalues_twopoint",
    "fock_mmse_beta",
    "fock_mmse_generic",
    "fock_b_eigenvalues_generic",
]

#: Above this photon number binomial coefficients move to log space.
_LOG_SPACE_N = 30


def binomial_weight(n: int, l: int, tau: float) -> float:
    """Probability of losing l of n photons at transmissivity tau."""
    if not 0 <= l <= n:
        raise ValueError(f"need 0 <= l <= n, got l={l}, n={n}")
    if tau == 0.0:
        return 1.0 if l == n else 0.0
    if tau == 1.0:
        return 1.0 if l == 0 else 0.0
    if n <= _LOG_SPACE_N:
        return comb(n, l) * tau ** (n - l) * (1.0 - tau) ** l
    log_c = lgamma(n + 1) - lgamma(l + 1) - lgamma(n - l + 1)
    return float(np.exp(log_c + (n - l) * np.log(tau) + l * np.log1p(-tau)))


def binomial_law(n: int, tau: float) -> np.ndarray:
    """All weights e_0..e_n at once; sums to 1 for tau in [0, 1]."""
    return np.array([binomial_weight(n, l, tau) for l in range(n + 1)])


def fock_mmse_twopoint(n: int, q: float, tau0: float, tau1: float) -> float:
    """MMSE for probe |n> under the two-point prior.

    Equals the prior second moment minus sum_l num_l^2 / den_l with
    num_l = q tau0 e_l(tau0) + (1-q) tau1 e_l(tau1) and
    den_l = q e_l(tau0) + (1-q) e_l(tau1). Degenerate priors give 0.
    """
    if q in (0.0, 1.0) or tau0 == tau1:
        return 0.0
    second = q * tau0**2 + (1.0 - q) * tau1**2
    total = 0.0
    for l in range(n + 1):
        e0 = binomial_weight(n, l, tau0)
        e1 = binomial_weight(n, l, tau1)
        den = q * e0 + (1.0 - q) * e1
        if den > 0.0:
            num = q * tau0 * e0 + (1.0 - q) * tau1 * e1
            total += num**2 / den
    return second - total


def fock_b_eigenvalues_twopoint(n: int, q: float, tau0: float, tau1: float) -> np.ndarray:
    """Optimal-measurement eigenvalues b_0..b_n, b_l attached to |n-l><n-l|.

    Each b_l is the posterior-mean transmissivity after observing n-l
    photons, so it lies between tau0 and tau1. Outcomes of zero marginal
    probability get the prior mean.
    """
    delta = None
    if q in (0.0, 1.0) or tau0 == tau1:
        delta = tau0 if q > 0.0 else tau1
    mean = q * tau0 + (1.0 - q) * tau1
    out = np.empty(n + 1)
    for l in range(n + 1):
        if delta is not None:
            out[l] = delta
            continue
        e0 = binomial_weight(n, l, tau0)
        e1 = binomial_weight(n, l, tau1)
        den = q * e0 + (1.0 - q) * e1
        out[l] = (q * tau0 * e0 + (1.0 - q) * tau1 * e1) / den if den > 0.0 else mean
    return out


def fock_mmse_beta(nbar: float, alpha: float, beta: float) -> float:
    """MMSE for a Fock-state probe under a Beta(alpha, beta) prior:

        alpha*beta / ((alpha+beta) (alpha+beta+1) (alpha+beta+nbar)).

    Accepts real nbar so asymptotics in the mean photon number can be
    evaluated directly; at nbar = 0 it reduces to the prior variance.
    """
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    if nbar < 0:
        raise ValueError("mean photon number must be >= 0")
    s = alpha + beta
    return alpha * beta / (s * (s + 1.0) * (s + nbar))


@dataclass(frozen=True)
class GenericPriorFunctionals:
    """Prior-weighted binomial moments g[l, k] = E[tau^k e_l(tau)], k = 0..2."""

    n: int
    g: np.ndarray

    def mmse(self) -> float:
        """sum_l (g_l2 - g_l1^2 / g_l0), skipping zero-mass outcomes."""
        total = 0.0
        for l in range(self.n + 1):
            g0, g1, g2 = self.g[l]
            if g0 > 0.0:
                total += g2 - g1**2 / g0
        return total

    def b_eigenvalues(self, prior_mean: float) -> np.ndarray:
        """Posterior means g_l1 / g_l0 per projector |n-l><n-l|."""
        out = np.empty(self.n + 1)
        for l in range(self.n + 1):
            g0, g1, _ = self.g[l]
            out[l] = g1 / g0 if g0 > 0.0 else prior_mean
        return out


def generic_prior_functionals(n: int, prior: Prior, order: int = 200) -> GenericPriorFunctionals:
    """Integrals g[l, k] = E[tau^k e_l(tau)] for k in {0, 1, 2}.

    The integrands are polynomials of degree <= n + 2, so the prior's
    Gauss rule is exact whenever 2*order - 1 >= n + 2.
    """
    rule = prior.rule(max(order, (n + 4) // 2))
    g = np.zeros((n + 1, 3))
    for tau, w in zip(rule.nodes, rule.weights):
        law = binomial_law(n, tau)
        for k in range(3):
            g[:, k] += w * tau**k * law
    return GenericPriorFunctionals(n, g)


def fock_mmse_generic(n: int, prior: Prior, order: int = 200) -> float:
    """MMSE for probe |n> under any prior; matches the two-point and beta
    closed forms on their domains."""
    return generic_prior_functionals(n, prior, order).mmse()


def fock_b_eigenvalues_generic(n: int, prior: Prior, order: int = 200) -> np.ndarray:
    """Optimal-measurement eigenvalues under any prior (posterior means)."""
    fns = generic_prior_functionals(n, prior, order)
    return fns.b_eigenvalues(prior.moment(1))
