"""Prior distributions on the transmissivity and their quadrature rules.

Four variants cover the toolkit: a point mass, a two-point mixture, a beta
density, and an arbitrary discrete rule loaded from file. Every prior
exposes exact moments where a closed form exists and a quadrature rule
that folds its density into the weights, so downstream integrals are
always plain weighted sums over nodes in [0, 1].
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import betaln, roots_jacobi

from .numeric import DIVERGENT, POLICY, Divergent

__all__ = [
    "QuadratureRule",
    "Prior",
    "DeltaPrior",
    "TwoPointPrior",
    "BetaPrior",
    "NumericPrior",
    "make_rule",
    "prior_fisher_jp",
    "parse_prior",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and non-negative weights representing integration against a prior."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float).reshape(-1)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if nodes.shape != weights.shape:
            raise ValueError("nodes and weights must have equal length")
        for arr in (nodes, weights):
            arr.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def expect(self, values: np.ndarray) -> float:
        """Weighted sum of per-node values (the rule applied to f(nodes))."""
        return float(np.dot(self.weights, values))


class Prior:
    """Common interface for priors on tau in [0, 1]."""

    def moment(self, k: int) -> float:
        """k-th raw moment E[tau^k]."""
        raise NotImplementedError

    def variance(self) -> float:
        return self.moment(2) - self.moment(1) ** 2

    def rule(self, order: int, fold_sqrt_tau: bool = False) -> QuadratureRule:
        """Quadrature rule for integrals against this prior.

        With ``fold_sqrt_tau`` the weights absorb an extra sqrt(tau)
        factor, keeping half-integer-power integrands polynomial. For
        discrete priors this is exact by construction; BetaPrior switches
        to the half-shifted Jacobi weight.
        """
        raise NotImplementedError

    def as_delta(self) -> "DeltaPrior | None":
        """The equivalent point mass when this prior is degenerate, else None."""
        return None

    def describe(self) -> str:
        raise NotImplementedError


def _point_rule(nodes, weights, fold_sqrt_tau: bool) -> QuadratureRule:
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if fold_sqrt_tau:
        weights = weights * np.sqrt(nodes)
    return QuadratureRule(nodes, weights, order=len(nodes))


@dataclass(frozen=True)
class DeltaPrior(Prior):
    """Full prior knowledge: all mass at a single transmissivity."""

    tau0: float

    def __post_init__(self):
        if not 0.0 <= self.tau0 <= 1.0:
            raise ValueError("tau0 must lie in [0, 1]")

    def moment(self, k: int) -> float:
        return self.tau0**k

    def rule(self, order: int, fold_sqrt_tau: bool = False) -> QuadratureRule:
        return _point_rule([self.tau0], [1.0], fold_sqrt_tau)

    def as_delta(self) -> "DeltaPrior":
        return self

    def describe(self) -> str:
        return f"delta:{self.tau0:g}"


@dataclass(frozen=True)
class TwoPointPrior(Prior):
    """Mixture q*delta(tau - tau0) + (1-q)*delta(tau - tau1)."""

    q: float
    tau0: float
    tau1: float

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise ValueError("q must lie in [0, 1]")
        for t in (self.tau0, self.tau1):
            if not 0.0 <= t <= 1.0:
                raise ValueError("transmissivities must lie in [0, 1]")

    def moment(self, k: int) -> float:
        return self.q * self.tau0**k + (1.0 - self.q) * self.tau1**k

    def rule(self, order: int, fold_sqrt_tau: bool = False) -> QuadratureRule:
        return _point_rule([self.tau0, self.tau1], [self.q, 1.0 - self.q], fold_sqrt_tau)

    def as_delta(self) -> "DeltaPrior | None":
        if self.q == 1.0 or self.tau0 == self.tau1:
            return DeltaPrior(self.tau0)
        if self.q == 0.0:
            return DeltaPrior(self.tau1)
        return None

    def describe(self) -> str:
        return f"twopoint:{self.q:g},{self.tau0:g},{self.tau1:g}"


@dataclass(frozen=True)
class BetaPrior(Prior):
    """Density tau^(alpha-1) (1-tau)^(beta-1) / B(alpha, beta) on [0, 1]."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")

    def moment(self, k: int) -> float:
        # B(alpha + k, beta) / B(alpha, beta), evaluated in log space
        return float(np.exp(betaln(self.alpha + k, self.beta) - betaln(self.alpha, self.beta)))

    def rule(self, order: int, fold_sqrt_tau: bool = False) -> QuadratureRule:
        """Gauss-Jacobi rule with the full density folded into the weights.

        Exact for polynomial integrands up to degree 2*order - 1 for any
        alpha, beta > 0, endpoint singularities included. With
        ``fold_sqrt_tau`` the alpha parameter is shifted by one half so
        sqrt(tau)-type integrands stay polynomial.
        """
        if order < 1:
            raise ValueError("order must be >= 1")
        alpha = self.alpha + (0.5 if fold_sqrt_tau else 0.0)
        x, w = roots_jacobi(order, self.beta - 1.0, alpha - 1.0)
        nodes = 0.5 * (x + 1.0)
        # Jacobi weight on [-1,1] -> prior density on [0,1], normalized by
        # B(self.alpha, self.beta) so the plain rule has total mass 1.
        log_scale = -(alpha + self.beta - 1.0) * np.log(2.0) - betaln(self.alpha, self.beta)
        weights = w * np.exp(log_scale)
        return QuadratureRule(nodes, weights, order)

    def describe(self) -> str:
        return f"beta:{self.alpha:g},{self.beta:g}"


@dataclass(frozen=True)
class NumericPrior(Prior):
    """Prior given directly as nodes and probability weights."""

    nodes: np.ndarray
    weights: np.ndarray
    source: str = field(default="numeric", compare=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float).reshape(-1)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if nodes.shape != weights.shape or nodes.size == 0:
            raise ValueError("nodes and weights must be non-empty and equal length")
        if nodes.min() < 0.0 or nodes.max() > 1.0:
            raise ValueError("nodes must lie in [0, 1]")
        if weights.min() < 0.0:
            raise ValueError("weights must be non-negative")
        if abs(weights.sum() - 1.0) > POLICY.construction_tol:
            raise ValueError(f"weights must sum to 1, got {weights.sum()!r}")
        for arr in (nodes, weights):
            arr.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def moment(self, k: int) -> float:
        return float(np.dot(self.weights, self.nodes**k))

    def rule(self, order: int, fold_sqrt_tau: bool = False) -> QuadratureRule:
        return _point_rule(self.nodes, self.weights, fold_sqrt_tau)

    def as_delta(self) -> "DeltaPrior | None":
        live = self.nodes[self.weights > 0]
        if live.size and np.all(live == live[0]):
            return DeltaPrior(float(live[0]))
        return None

    def describe(self) -> str:
        return f"{self.source}({self.nodes.size} nodes)"


def make_rule(prior: Prior, order: int) -> QuadratureRule:
    """Quadrature rule for ``prior`` (point masses for discrete variants)."""
    return prior.rule(order)


def prior_fisher_jp(prior: Prior, order: int = 64) -> float | Divergent:
    """Fisher information of the prior, integral of P (d ln P / d tau)^2.

    Finite only for beta priors with alpha > 2 and beta > 2; point-mass
    style priors (delta, two-point, numeric rules) diverge. For beta the
    integrand's endpoint singularities are folded into the Gauss-Jacobi
    weights of Beta(alpha-2, beta-2), leaving the exactly-integrated
    quadratic ((alpha-1)(1-tau) - (beta-1) tau)^2 at the nodes.
    """
    if isinstance(prior, BetaPrior):
        a, b = prior.alpha, prior.beta
        if a <= 2.0 or b <= 2.0:
            return DIVERGENT
        rule = BetaPrior(a - 2.0, b - 2.0).rule(order)
        scale = float(np.exp(betaln(a - 2.0, b - 2.0) - betaln(a, b)))
        poly = ((a - 1.0) * (1.0 - rule.nodes) - (b - 1.0) * rule.nodes) ** 2
        return scale * rule.expect(poly)
    return DIVERGENT


def _parse_floats(body: str, n: int, spec: str) -> list[float]:
    parts = body.split(",")
    if len(parts) != n:
        raise ValueError(f"expected {n} comma-separated values in {spec!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"bad number in prior spec {spec!r}") from exc


def parse_prior(spec: str) -> Prior:
    """Parse a CLI prior spec.

    Grammar: ``delta:t0`` | ``twopoint:q,t0,t1`` | ``beta:a,b`` |
    ``file:<path>`` where the file is CSV rows of ``node,weight``.
    """
    kind, _, body = spec.partition(":")
    if not body:
        raise ValueError(f"malformed prior spec {spec!r}")
    if kind == "delta":
        return DeltaPrior(*_parse_floats(body, 1, spec))
    if kind == "twopoint":
        return TwoPointPrior(*_parse_floats(body, 3, spec))
    if kind == "beta":
        return BetaPrior(*_parse_floats(body, 2, spec))
    if kind == "file":
        rows = np.loadtxt(body, delimiter=",", ndmin=2)
        if rows.shape[1] != 2:
            raise ValueError(f"prior file {body!r} must have node,weight columns")
        return NumericPrior(rows[:, 0], rows[:, 1], source=f"file:{body}")
    raise ValueError(f"unknown prior kind {kind!r}")
