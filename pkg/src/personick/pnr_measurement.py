"""Mean square error of photon-number-resolving detection.

PNR detection projects the channel output onto the Fock basis and feeds
the detected photon number k into the Bayes conditional-mean estimator

    Pi_k = E[tau | k] = E[tau P(k|tau)] / E[P(k|tau)],

whose mean square error is

    mse = E[tau^2] - sum_k E[tau P(k|tau)]^2 / E[P(k|tau)].

This measurement is optimal for Fock-state probes (where the optimal
measurement operator is Fock-diagonal) and sub-optimal otherwise.
"""

from math import comb

import numpy as np

from .fock_core import InBetweenState, StateLike, as_pure, pure_to_density
from .loss_channel import apply_kraus, check_tau
from .priors import Prior

__all__ = [
    "outcome_law",
    "in_between_outcome_law",
    "conditional_means",
    "pnr_mse",
]

DEFAULT_ORDER = 200


def outcome_law(state: StateLike, tau: float) -> np.ndarray:
    """Detection probabilities P(k|tau) = <k|rho(tau)|k> for k = 0..cutoff."""
    rho = apply_kraus(pure_to_density(state), check_tau(tau))
    return rho.diagonal()


def in_between_outcome_law(nbar: float, tau: float) -> np.ndarray:
    """Closed-form detection law for the two-Fock-component probe at mean
    photon number nbar, k = 0..ceil(nbar).

    The coherence between the two components never reaches the diagonal,
    so the law is the |c|^2 / |a|^2 mixture of the two binomial laws:

        P(k|tau) = |c|^2 C(m, m-k) tau^k (1-tau)^(m-k)
                 + (1-|c|^2) C(m-1, k) tau^k (1-tau)^(m-1-k)

    with m = ceil(nbar) and C(m-1, m) = 0 by convention.
    """
    tau = check_tau(tau)
    state = InBetweenState(nbar)
    m = state.ceil_n
    c2 = state.upper_amp**2
    law = np.zeros(m + 1)
    for k in range(m + 1):
        p1 = c2 * comb(m, m - k) * tau**k * (1.0 - tau) ** (m - k)
        p2 = 0.0
        if k <= m - 1:
            p2 = (1.0 - c2) * comb(m - 1, k) * tau**k * (1.0 - tau) ** (m - 1 - k)
        law[k] = p1 + p2
    return law


def _law_table(state: StateLike, prior: Prior, order: int):
    """Outcome laws at every rule node: rows indexed by node, columns by k."""
    pure = as_pure(state)
    rule = prior.rule(order)
    laws = np.array([outcome_law(pure, tau) for tau in rule.nodes])
    return rule, laws


def conditional_means(state: StateLike, prior: Prior, order: int = DEFAULT_ORDER) -> np.ndarray:
    """Bayes estimates Pi_k for each photon count k = 0..cutoff.

    Outcomes with zero marginal probability get the prior mean (the Bayes
    answer under no data); they contribute nothing to the MSE.
    """
    rule, laws = _law_table(state, prior, order)
    num = laws.T @ (rule.weights * rule.nodes)
    den = laws.T @ rule.weights
    mean = prior.moment(1)
    return np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), mean)


def pnr_mse(state: StateLike, prior: Prior, order: int = DEFAULT_ORDER) -> float:
    """Mean square error of PNR detection with the conditional-mean estimator.

    Always at least the MMSE; equal to it (within solver tolerance) when
    the probe is a Fock state.
    """
    rule, laws = _law_table(state, prior, order)
    num = laws.T @ (rule.weights * rule.nodes)
    den = laws.T @ rule.weights
    explained = float(np.sum(np.where(den > 0.0, num**2 / np.where(den > 0.0, den, 1.0), 0.0)))
    return prior.moment(2) - explained
