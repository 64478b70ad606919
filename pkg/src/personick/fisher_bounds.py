"""Fisherian-inspired Bayesian bounds for comparison against the MMSE.

For a Fock-state probe |n> the quantum Fisher information of the
pure-loss channel is F(tau) = n / (tau (1-tau)), attainable by
photon-counting. Averaging against the prior gives

    je_inv = E[1/F]         (asymptotically attainable bound),
    jd     = E[F]           (Fisher information of the data),
    jp     = E[(d ln P / d tau)^2]   (Fisher information of the prior),
    jb     = jd + jp        (van Trees information).

Quantities that fail to converge are reported as the Divergent sentinel,
never as a large float; this keeps a diverging jp from contaminating jb.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import betaln

from .numeric import DIVERGENT, Divergent, is_divergent
from .priors import BetaPrior, DeltaPrior, NumericPrior, Prior, TwoPointPrior, prior_fisher_jp

__all__ = [
    "BoundsReport",
    "qfi_fock",
    "je_inv",
    "jd",
    "jb",
    "bounds_report",
]


def _check_n(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError("photon number must be a non-negative integer")
    return int(n)


def qfi_fock(n: int, tau: float) -> float | Divergent:
    """Quantum Fisher information n / (tau (1-tau)) of a Fock-state probe;
    diverges at tau = 0 or 1, and vanishes for the vacuum."""
    n = _check_n(n)
    if n == 0:
        return 0.0
    if not 0.0 <= tau <= 1.0:
        raise ValueError("transmissivity must lie in [0, 1]")
    if tau in (0.0, 1.0):
        return DIVERGENT
    return n / (tau * (1.0 - tau))


def je_inv(n: int, prior: Prior) -> float | Divergent:
    """Prior-averaged inverse Fisher information E[tau (1-tau)] / n.

    Reduces to the known two-point and beta closed forms; the vacuum
    carries no information, so n = 0 diverges.
    """
    n = _check_n(n)
    if n == 0:
        return DIVERGENT
    return (prior.moment(1) - prior.moment(2)) / n


def _support_points(prior: Prior) -> list[tuple[float, float]] | None:
    """(tau, weight) pairs with positive weight for discrete priors."""
    if isinstance(prior, DeltaPrior):
        return [(prior.tau0, 1.0)]
    if isinstance(prior, TwoPointPrior):
        pts = [(prior.tau0, prior.q), (prior.tau1, 1.0 - prior.q)]
        return [(t, w) for t, w in pts if w > 0.0]
    if isinstance(prior, NumericPrior):
        return [(t, w) for t, w in zip(prior.nodes, prior.weights) if w > 0.0]
    return None


def jd(n: int, prior: Prior) -> float | Divergent:
    """Prior-averaged Fisher information n E[1 / (tau (1-tau))].

    Finite for discrete priors supported inside (0, 1) and for beta
    priors with alpha > 1 and beta > 1; scales linearly in n.
    """
    n = _check_n(n)
    if n == 0:
        return 0.0
    points = _support_points(prior)
    if points is not None:
        if any(t in (0.0, 1.0) for t, _ in points):
            return DIVERGENT
        return n * sum(w / (t * (1.0 - t)) for t, w in points)
    if isinstance(prior, BetaPrior):
        a, b = prior.alpha, prior.beta
        if a <= 1.0 or b <= 1.0:
            return DIVERGENT
        # E[1/(tau(1-tau))] = B(alpha-1, beta-1) / B(alpha, beta)
        return n * float(np.exp(betaln(a - 1.0, b - 1.0) - betaln(a, b)))
    raise TypeError(f"unsupported prior type {type(prior).__name__}")


def jb(n: int, prior: Prior) -> float | Divergent:
    """Total van Trees information jd + jp; Divergent when either part is.

    For two-point priors jp (hence jb) diverges; for beta priors jb is
    finite exactly when alpha > 2 and beta > 2.
    """
    jd_val = jd(n, prior)
    jp_val = prior_fisher_jp(prior)
    if is_divergent(jd_val) or is_divergent(jp_val):
        return DIVERGENT
    return jd_val + jp_val


def _inverse(value: float | Divergent) -> float | Divergent:
    if is_divergent(value):
        return DIVERGENT
    return 1.0 / value if value > 0.0 else DIVERGENT


@dataclass(frozen=True)
class BoundsReport:
    """All Fisherian-inspired quantities for one (probe, prior) pair."""

    n: int
    prior: str
    je_inv: float | Divergent
    jd: float | Divergent
    jp: float | Divergent
    jb: float | Divergent

    @property
    def jd_inv(self) -> float | Divergent:
        return _inverse(self.jd)

    @property
    def jb_inv(self) -> float | Divergent:
        return _inverse(self.jb)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "prior": self.prior,
            "je_inv": self.je_inv,
            "jd": self.jd,
            "jp": self.jp,
            "jb": self.jb,
            "jd_inv": self.jd_inv,
            "jb_inv": self.jb_inv,
        }


def bounds_report(n: int, prior: Prior) -> BoundsReport:
    return BoundsReport(
        n=_check_n(n),
        prior=prior.describe(),
        je_inv=je_inv(n, prior),
        jd=jd(n, prior),
        jp=prior_fisher_jp(prior),
        jb=jb(n, prior),
    )
