from math import comb

import numpy as np
import pytest

from personick import (
    BetaPrior,
    DeltaPrior,
    FockState,
    TwoPointPrior,
    binomial_law,
    binomial_weight,
    build_gammas,
    fock_b_eigenvalues_generic,
    fock_b_eigenvalues_twopoint,
    fock_mmse_beta,
    fock_mmse_generic,
    fock_mmse_twopoint,
    generic_prior_functionals,
    mmse,
)

FIG_A = (0.541, 0.706, 0.279)
FIG_C = (0.79, 0.127, 0.641)


class TestBinomialLaw:
    def test_normalization(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            n = int(rng.integers(0, 40))
            law = binomial_law(n, rng.uniform())
            assert abs(law.sum() - 1.0) < 1e-12
            assert law.min() >= 0.0

    def test_edges(self):
        law = binomial_law(5, 1.0)
        assert law[0] == 1.0 and law[1:].max() == 0.0
        law = binomial_law(5, 0.0)
        assert law[5] == 1.0 and law[:5].max() == 0.0

    def test_log_space_path_matches_exact(self):
        # exact integer binomials as the oracle for the n > 30 branch
        for n in (31, 64, 150):
            for tau in (0.1, 0.5, 0.93):
                for l in (0, 1, n // 2, n):
                    exact = comb(n, l) * tau ** (n - l) * (1 - tau) ** l
                    assert binomial_weight(n, l, tau) == pytest.approx(exact, rel=1e-12)

    def test_invalid_l(self):
        with pytest.raises(ValueError):
            binomial_weight(3, 4, 0.5)


class TestTwoPointMmse:
    def test_fig_parameters_value(self):
        assert fock_mmse_twopoint(1, *FIG_C) == pytest.approx(0.033142, abs=1e-6)

    def test_vacuum_is_prior_variance(self):
        q, t0, t1 = 0.37, 0.15, 0.82
        expected = q * (1 - q) * (t0 - t1) ** 2
        assert fock_mmse_twopoint(0, q, t0, t1) == pytest.approx(expected, abs=1e-15)

    def test_degenerate_prior_gives_zero(self):
        assert fock_mmse_twopoint(4, 0.5, 0.3, 0.3) == 0.0
        assert fock_mmse_twopoint(4, 1.0, 0.3, 0.9) == 0.0
        assert fock_mmse_twopoint(4, 0.0, 0.3, 0.9) == 0.0

    def test_nonincreasing_in_n(self):
        for params in (FIG_A, FIG_C):
            values = [fock_mmse_twopoint(n, *params) for n in range(31)]
            diffs = np.diff(values)
            assert diffs.max() <= 1e-15

    def test_bounded_by_variance(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            q = rng.uniform(0.05, 0.95)
            t0, t1 = rng.uniform(0, 1, size=2)
            var = q * (1 - q) * (t0 - t1) ** 2
            val = fock_mmse_twopoint(int(rng.integers(0, 12)), q, t0, t1)
            assert -1e-15 <= val <= var + 1e-15


class TestTwoPointBEigenvalues:
    def test_hand_value(self):
        b = fock_b_eigenvalues_twopoint(1, 0.5, 0.2, 0.8)
        assert b[0] == pytest.approx(0.68, abs=1e-15)

    def test_certainty(self):
        assert np.allclose(fock_b_eigenvalues_twopoint(3, 1.0, 0.3, 0.9), 0.3)
        assert np.allclose(fock_b_eigenvalues_twopoint(3, 0.4, 0.7, 0.7), 0.7)

    def test_values_in_support_hull(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            q = rng.uniform(0.05, 0.95)
            t0, t1 = np.sort(rng.uniform(0, 1, size=2))
            b = fock_b_eigenvalues_twopoint(int(rng.integers(0, 10)), q, t0, t1)
            assert b.min() >= t0 - 1e-12 and b.max() <= t1 + 1e-12


class TestBetaMmse:
    def test_reference_value(self):
        assert fock_mmse_beta(1, 1, 1) == pytest.approx(1 / 18, abs=1e-15)

    def test_vacuum_is_beta_variance(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            a, b = rng.uniform(0.2, 9, size=2)
            assert fock_mmse_beta(0, a, b) == pytest.approx(BetaPrior(a, b).variance(), abs=1e-12)

    def test_monotone_decay_and_asymptote(self):
        a, b = 2.0, 4.0
        limit = a * b / ((a + b) * (a + b + 1))
        values = [fock_mmse_beta(nbar, a, b) for nbar in range(1, 51)]
        assert all(x > y for x, y in zip(values, values[1:]))
        for nbar, val in zip(range(1, 51), values):
            assert val <= limit / nbar + 1e-15
            assert val >= limit / (nbar + a + b)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            fock_mmse_beta(1, 0, 1)
        with pytest.raises(ValueError):
            fock_mmse_beta(-1, 2, 2)


class TestGenericFunctionals:
    def test_uniform_single_photon(self):
        g = generic_prior_functionals(1, BetaPrior(1, 1)).g
        assert g[0, 0] == pytest.approx(0.5, abs=1e-13)  # E[e_0] = E[tau]
        assert g[1, 0] == pytest.approx(0.5, abs=1e-13)
        assert g[0, 1] == pytest.approx(1 / 3, abs=1e-13)  # E[tau^2]

    def test_delta_point_mass(self):
        t0 = 0.37
        g = generic_prior_functionals(3, DeltaPrior(t0)).g
        for l in range(4):
            for k in range(3):
                assert g[l, k] == pytest.approx(t0**k * binomial_weight(3, l, t0), abs=1e-15)

    def test_partition_identities(self):
        for prior in [BetaPrior(2, 4), TwoPointPrior(0.3, 0.2, 0.9)]:
            fns = generic_prior_functionals(5, prior)
            for k in range(3):
                assert fns.g[:, k].sum() == pytest.approx(prior.moment(k), abs=1e-12)

    def test_matches_gamma_diagonal(self):
        # Gamma_k for a Fock probe is diagonal with entries g[l, k] at index n - l
        prior = TwoPointPrior(0.44, 0.21, 0.77)
        n = 2
        fns = generic_prior_functionals(n, prior)
        gammas = build_gammas(FockState(n), prior)
        for k, gamma in enumerate([gammas.gamma0, gammas.gamma1, gammas.gamma2]):
            diag = np.diag(gamma).real
            for l in range(n + 1):
                assert diag[n - l] == pytest.approx(fns.g[l, k], abs=1e-12)


class TestGenericMmse:
    def test_uniform_single_photon(self):
        assert fock_mmse_generic(1, BetaPrior(1, 1)) == pytest.approx(1 / 18, abs=1e-12)

    def test_delta_gives_zero(self):
        assert fock_mmse_generic(4, DeltaPrior(0.6)) == pytest.approx(0.0, abs=1e-13)

    def test_reduces_to_twopoint(self):
        q, t0, t1 = FIG_A
        val = fock_mmse_generic(3, TwoPointPrior(q, t0, t1))
        assert val == pytest.approx(fock_mmse_twopoint(3, q, t0, t1), abs=1e-12)

    def test_reduces_to_beta(self):
        for n in range(6):
            val = fock_mmse_generic(n, BetaPrior(2.33, 3.84))
            assert val == pytest.approx(fock_mmse_beta(n, 2.33, 3.84), abs=1e-10)

    def test_second_moment_enters_linearly_not_squared(self):
        # squaring the second-moment functional is a plausible but wrong
        # variant: it disagrees with the two-point arithmetic and can go
        # negative, while the linear form matches exactly
        q, t0, t1 = FIG_A
        n = 3
        fns = generic_prior_functionals(n, TwoPointPrior(q, t0, t1))
        linear = sum(g2 - g1**2 / g0 for g0, g1, g2 in fns.g if g0 > 0)
        squared = sum(g2**2 - g1**2 / g0 for g0, g1, g2 in fns.g if g0 > 0)
        reference = fock_mmse_twopoint(n, q, t0, t1)
        assert linear == pytest.approx(reference, abs=1e-12)
        assert abs(squared - reference) > 1e-3
        assert squared < 0.0

    def test_agreement_with_solver_over_50_point_grid(self):
        priors = [
            TwoPointPrior(*FIG_A),
            TwoPointPrior(0.377, 0.416, 0.139),
            BetaPrior(1, 1),
            BetaPrior(2, 4),
            BetaPrior(2.33, 3.84),
        ]
        for prior in priors:
            for n in range(10):
                numeric = mmse(FockState(n), prior, order=200).delta
                assert fock_mmse_generic(n, prior) == pytest.approx(numeric, abs=1e-9)

    def test_bounded_and_monotone_for_beta(self):
        prior = BetaPrior(2, 4)
        values = [fock_mmse_generic(n, prior) for n in range(31)]
        assert all(0 <= v <= prior.variance() + 1e-15 for v in values)
        assert np.diff(values).max() <= 1e-14


class TestGenericBEigenvalues:
    def test_uniform_single_photon(self):
        b = fock_b_eigenvalues_generic(1, BetaPrior(1, 1))
        assert b[0] == pytest.approx(2 / 3, abs=1e-13)
        assert b[1] == pytest.approx(1 / 3, abs=1e-13)

    def test_delta(self):
        assert np.allclose(fock_b_eigenvalues_generic(4, DeltaPrior(0.42)), 0.42, atol=1e-13)

    def test_reduces_to_twopoint(self):
        q, t0, t1 = FIG_C
        got = fock_b_eigenvalues_generic(2, TwoPointPrior(q, t0, t1))
        want = fock_b_eigenvalues_twopoint(2, q, t0, t1)
        assert np.allclose(got, want, atol=1e-12)

    def test_hull_for_beta(self):
        b = fock_b_eigenvalues_generic(6, BetaPrior(2, 4))
        assert b.min() > 0.0 and b.max() < 1.0
