import numpy as np
import pytest
from scipy import integrate
from scipy.linalg import expm

from personick import (
    BetaPrior,
    DeltaPrior,
    FockState,
    GammaAccumulator,
    GammaSet,
    InBetweenState,
    TwoPointPrior,
    build_gammas,
    commutator_norm,
    fock_b_eigenvalues_twopoint,
    fock_mmse_twopoint,
    mmse,
    mmse_lower_bound,
    solve_b,
)
from personick.personick_solver import delta_from_set
from helpers import random_prior, random_pure_state

FIG_C = TwoPointPrior(0.79, 0.127, 0.641)


def random_psd(rng, dim, min_eig=0.0):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return x @ x.conj().T + min_eig * np.eye(dim)


class TestBuildGammas:
    def test_vacuum_fixed_point(self):
        for prior in [FIG_C, BetaPrior(2, 4), DeltaPrior(0.3)]:
            gammas = build_gammas(FockState(0), prior)
            for k, g in enumerate([gammas.gamma0, gammas.gamma1, gammas.gamma2]):
                assert g[0, 0].real == pytest.approx(prior.moment(k), abs=1e-12)
                assert np.abs(g).sum() == pytest.approx(prior.moment(k), abs=1e-12)

    def test_traces_equal_prior_moments(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            state = random_pure_state(rng, int(rng.integers(1, 6)))
            prior = random_prior(rng)
            gammas = build_gammas(state, prior)
            for k, g in enumerate([gammas.gamma0, gammas.gamma1, gammas.gamma2]):
                assert np.trace(g).real == pytest.approx(prior.moment(k), abs=1e-12)
                assert np.abs(g - g.conj().T).max() < 1e-13
                assert np.linalg.eigvalsh(g).min() > -1e-12

    def test_fock_twopoint_exact_diagonal(self):
        # two-node rule: diagonal entries are the exact weighted binomials
        n, (q, t0, t1) = 2, (0.79, 0.127, 0.641)
        gammas = build_gammas(FockState(n), TwoPointPrior(q, t0, t1))
        from personick import binomial_weight

        for k, g in enumerate([gammas.gamma0, gammas.gamma1, gammas.gamma2]):
            assert np.abs(g - np.diag(np.diag(g))).max() < 1e-15
            for l in range(n + 1):
                expected = q * t0**k * binomial_weight(n, l, t0) + (1 - q) * t1**k * binomial_weight(n, l, t1)
                assert g[n - l, n - l].real == pytest.approx(expected, abs=1e-15)

    def test_inbetween_beta_trace_moments(self):
        gammas = build_gammas(InBetweenState(1.5), BetaPrior(2, 4))
        for k, g in enumerate([gammas.gamma0, gammas.gamma1, gammas.gamma2]):
            assert np.trace(g).real == pytest.approx(BetaPrior(2, 4).moment(k), abs=1e-12)


class TestGammaAccumulator:
    def test_matches_build_gammas_twopoint(self):
        rng = np.random.default_rng(3)
        prior = TwoPointPrior(0.37, 0.21, 0.88)
        for _ in range(20):
            state = random_pure_state(rng, int(rng.integers(1, 7)))
            direct = build_gammas(state, prior)
            fast = GammaAccumulator(prior, state.cutoff).gammas(state)
            for a, b in zip(
                (direct.gamma0, direct.gamma1, direct.gamma2),
                (fast.gamma0, fast.gamma1, fast.gamma2),
            ):
                assert np.abs(a - b).max() < 1e-14

    def test_matches_build_gammas_beta(self):
        rng = np.random.default_rng(4)
        prior = BetaPrior(2.33, 3.84)
        for _ in range(20):
            state = random_pure_state(rng, int(rng.integers(1, 7)))
            direct = build_gammas(state, prior, order=200)
            fast = GammaAccumulator(prior, state.cutoff, order=200).gammas(state)
            for a, b in zip(
                (direct.gamma0, direct.gamma1, direct.gamma2),
                (fast.gamma0, fast.gamma1, fast.gamma2),
            ):
                assert np.abs(a - b).max() < 1e-10

    def test_reusable_across_states(self):
        acc = GammaAccumulator(FIG_C, 4)
        d1 = delta_from_set(solve_b(acc.gammas(FockState(1))))
        d2 = delta_from_set(solve_b(acc.gammas(FockState(4))))
        assert d1 == pytest.approx(fock_mmse_twopoint(1, 0.79, 0.127, 0.641), abs=1e-12)
        assert d2 == pytest.approx(fock_mmse_twopoint(4, 0.79, 0.127, 0.641), abs=1e-12)


class TestSolveB:
    def test_scalar_sylvester(self):
        dim = 2
        gammas = GammaSet(np.eye(dim) / 2, np.eye(dim) / 4, np.eye(dim) / 8, cutoff=dim - 1)
        pset = solve_b(gammas)
        assert np.allclose(pset.b_op, np.eye(dim) / 2, atol=1e-14)
        assert pset.support_dim == dim
        assert not pset.ill_posed

    def test_residual_random_full_rank(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            g0 = random_psd(rng, 4, min_eig=0.1)
            g1 = random_psd(rng, 4)
            pset = solve_b(GammaSet(g0, g1, g1, cutoff=3))
            resid = np.linalg.norm(g0 @ pset.b_op + pset.b_op @ g0 - 2 * g1)
            assert resid < 1e-10

    def test_residual_on_support_singular(self):
        # Gamma1 confined to Gamma0's support: solution exact there, 0 outside
        rng = np.random.default_rng(6)
        proj = np.zeros((4, 4))
        proj[:3, :3] = np.eye(3)
        g0 = proj @ random_psd(rng, 4, min_eig=0.2) @ proj
        g1 = proj @ random_psd(rng, 4) @ proj
        pset = solve_b(GammaSet(g0, g1, g1, cutoff=3))
        resid = np.linalg.norm(g0 @ pset.b_op + pset.b_op @ g0 - 2 * g1)
        assert resid < 1e-10
        assert pset.support_dim == 3
        assert not pset.ill_posed

    def test_ill_posedness_diagnostic(self):
        g0 = np.diag([1.0, 0.0]).astype(complex)
        g1 = np.array([[0.2, 0.1], [0.1, 0.4]], dtype=complex)
        pset = solve_b(GammaSet(g0, g1, g1, cutoff=1))
        assert pset.ill_posed
        assert pset.unsupported_mass == pytest.approx(0.4, abs=1e-15)

    def test_b_matches_z_integration(self):
        # independent evaluation of the defining integral
        # B = 2 int_0^inf exp(-z G0) G1 exp(-z G0) dz via adaptive quadrature
        rng = np.random.default_rng(7)
        g0 = random_psd(rng, 4, min_eig=0.3)
        g1 = random_psd(rng, 4)
        pset = solve_b(GammaSet(g0, g1, g1, cutoff=3))

        def integrand(z):
            e = expm(-z * g0)
            return 2.0 * (e @ g1 @ e)

        b_direct, _ = integrate.quad_vec(integrand, 0.0, np.inf, epsabs=1e-10, epsrel=1e-10)
        assert np.abs(b_direct - pset.b_op).max() < 1e-7
        tr_direct = np.trace(b_direct @ g1).real
        tr_solver = np.trace(pset.b_op @ g1).real
        assert tr_direct == pytest.approx(tr_solver, abs=1e-6)

    def test_fock_twopoint_b_is_diagonal_with_known_eigenvalues(self):
        n = 3
        pset = solve_b(build_gammas(FockState(n), FIG_C))
        off = pset.b_op - np.diag(np.diag(pset.b_op))
        assert np.abs(off).max() < 1e-12
        want = fock_b_eigenvalues_twopoint(n, 0.79, 0.127, 0.641)
        for l in range(n + 1):
            assert pset.b_op[n - l, n - l].real == pytest.approx(want[l], abs=1e-12)


class TestMmse:
    def test_delta_prior_gives_zero(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            state = random_pure_state(rng, int(rng.integers(1, 6)))
            report = mmse(state, DeltaPrior(rng.uniform(0.1, 0.9)))
            assert abs(report.delta) < 1e-10
            assert abs(report.delta_lb) < 1e-10

    def test_vacuum_gives_prior_variance(self):
        for prior in [FIG_C, BetaPrior(2, 4), BetaPrior(1, 1)]:
            report = mmse(FockState(0), prior)
            assert report.delta == pytest.approx(prior.variance(), abs=1e-12)

    def test_fock_twopoint_reference_value(self):
        report = mmse(FockState(1), FIG_C)
        assert report.delta == pytest.approx(0.033142, abs=1e-6)
        assert report.delta == pytest.approx(fock_mmse_twopoint(1, 0.79, 0.127, 0.641), abs=1e-12)
        assert report.delta_lb == pytest.approx(report.delta, abs=1e-12)
        assert report.commutator_g01 < 1e-12

    def test_report_metadata(self):
        report = mmse(FockState(1), FIG_C)
        assert report.state == "fock:1"
        assert report.prior == "twopoint:0.79,0.127,0.641"
        assert report.tr_gamma2 == pytest.approx(FIG_C.moment(2), abs=1e-14)
        assert not report.ill_posed
        # eigenbasis is unitary
        u = report.b_eigenbasis
        assert np.abs(u @ u.conj().T - np.eye(u.shape[0])).max() < 1e-12

    def test_adaptive_order_matches_fixed(self):
        ref = mmse(FockState(2), BetaPrior(2, 4), order=800).delta
        report = mmse(FockState(2), BetaPrior(2, 4))
        assert report.order == 400
        assert report.delta == pytest.approx(ref, abs=1e-12)

    def test_bounded_by_prior_variance(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            state = random_pure_state(rng, int(rng.integers(1, 6)))
            prior = random_prior(rng)
            report = mmse(state, prior, order=150)
            assert -1e-12 <= report.delta <= prior.variance() + 1e-12

    def test_phase_invariance(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            state = random_pure_state(rng, int(rng.integers(1, 6)))
            prior = random_prior(rng)
            phi = rng.uniform(0, 2 * np.pi)
            base = mmse(state, prior, order=150).delta
            rotated = mmse(state.with_phase(phi), prior, order=150).delta
            assert rotated == pytest.approx(base, abs=1e-10)


class TestLowerBound:
    def test_fock_twopoint_equality(self):
        gammas = build_gammas(FockState(2), FIG_C)
        lb = mmse_lower_bound(gammas, FIG_C)
        assert lb == pytest.approx(fock_mmse_twopoint(2, 0.79, 0.127, 0.641), abs=1e-12)

    def test_inbetween_strict_gap(self):
        report = mmse(InBetweenState(1.5), FIG_C)
        assert report.delta - report.delta_lb > 1e-4
        assert report.commutator_g01 > 1e-3

    def test_delta_prior_zero(self):
        gammas = build_gammas(FockState(2), DeltaPrior(0.4))
        assert mmse_lower_bound(gammas, DeltaPrior(0.4)) == pytest.approx(0.0, abs=1e-12)

    def test_lower_bound_law_random(self):
        # lb <= delta always; equality exactly when Gamma0 and Gamma1 commute
        rng = np.random.default_rng(11)
        for _ in range(150):
            if rng.uniform() < 0.25:
                state = FockState(int(rng.integers(0, 5))).to_pure(5)
            else:
                state = random_pure_state(rng, int(rng.integers(1, 6)))
            prior = random_prior(rng)
            gammas = build_gammas(state, prior, order=150)
            pset = solve_b(gammas)
            delta = delta_from_set(pset)
            lb = mmse_lower_bound(gammas, prior)
            assert lb <= delta + 1e-12
            commutes = pset.commutator_g01 < 1e-10
            tight = abs(delta - lb) <= 1e-10
            assert commutes == tight
