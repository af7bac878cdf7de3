import itertools

import numpy as np
import pytest

from zeronash.game import available_games, registry_get
from zeronash.quantum import (
    DEFAULT_STRATEGY,
    HardyMode,
    HardyParams,
    StrategyError,
    born_action_distribution,
    build_ghz_strategy,
    build_hardy_strategy,
    build_magic_square_strategy,
    build_strategy,
    hardy_basis,
    hardy_state,
    maximally_entangled_hardy_strategy,
    schmidt_coefficients,
    solve_hardy_type1_bases,
    strategy_measurement_reports,
    verify_strong_zero_error,
    verify_zero_error,
)
from zeronash.tensor import I2, X, Y, Z, StateVector, ket

PI3 = HardyParams(np.pi / 3, np.pi / 3)
PHI_PLUS = StateVector((2, 2), (ket(0, 0) + ket(1, 1)) / np.sqrt(2))


def reference_distribution(s, tp):
    """Born rule written out with np.kron and <psi|E|psi> per joint outcome."""
    psi = s.shared_state.amplitudes
    meas = [s.measurements[i][t] for i, t in enumerate(tp)]
    maps = [s.outcome_maps[i][t] for i, t in enumerate(tp)]
    out = {}
    for outcome in itertools.product(*(range(len(m)) for m in meas)):
        op = np.array([[1.0 + 0j]])
        for m, k in zip(meas, outcome):
            op = np.kron(op, m.effects[k])
        ap = tuple(mp[k] for mp, k in zip(maps, outcome))
        out[ap] = out.get(ap, 0.0) + float(np.real(psi.conj() @ op @ psi))
    return out


PAIRINGS = [(g, DEFAULT_STRATEGY[g]) for g in ("G5", "G6", "G7")]


@pytest.mark.parametrize("game,strategy", PAIRINGS)
def test_distribution_matches_reference(game, strategy):
    g, s = registry_get(game), build_strategy(strategy)
    for tp in g.type_profiles():
        dist = born_action_distribution(s, tp)
        ref = reference_distribution(s, tp)
        assert set(ref) == set(dist.probabilities)
        for ap, p in ref.items():
            assert dist[ap] == pytest.approx(p, abs=1e-13)
        assert abs(dist.total() - 1) <= 1e-9


@pytest.mark.parametrize("strategy", ["magic-square", "ghz", "hardy"])
def test_measurements_valid(strategy):
    reports = strategy_measurement_reports(build_strategy(strategy))
    assert all(r.passed for r in reports.values())


class TestMagicSquare:
    s = build_magic_square_strategy()
    g = registry_get("G5")

    def test_state_layout(self):
        amps = self.s.shared_state.amplitudes
        assert np.flatnonzero(np.abs(amps) > 0).tolist() == [0, 5, 10, 15]
        assert np.allclose(amps[[0, 5, 10, 15]], 0.5)

    def test_x1_is_computational_basis(self):
        effects = self.s.measurements[0]["x1"].effects
        for k, e in enumerate(effects):
            np.testing.assert_allclose(e, np.diag(np.eye(4)[k]), atol=1e-15)

    def test_traces(self):
        for ms in self.s.measurements:
            for m in ms.values():
                for e in m.effects:
                    assert np.trace(e).real == pytest.approx(1.0, abs=1e-14)

    def test_uniform_over_allowed(self):
        for tp in self.g.type_profiles():
            dist = born_action_distribution(self.s, tp)
            for ap in self.g.action_profiles():
                want = 1 / 8 if ap in self.g.allowed[tp] else 0.0
                assert dist[ap] == pytest.approx(want, abs=1e-12)

    def test_uniform_marginals(self):
        for tp in self.g.type_profiles():
            dist = born_action_distribution(self.s, tp)
            for party in (0, 1):
                for a in "1234":
                    marg = sum(p for ap, p in dist.probabilities.items() if ap[party] == a)
                    assert marg == pytest.approx(0.25, abs=1e-12)

    def test_verifies(self):
        assert verify_zero_error(self.s, self.g).max_leak <= 1e-12
        strong = verify_strong_zero_error(self.s, self.g)
        assert strong.passed
        assert strong.min_allowed == pytest.approx(1 / 8, abs=1e-12)

    def test_leak_when_pair_removed(self):
        tp = ("x1", "y1")
        g = self.g.with_allowed(tp, self.g.allowed[tp] - {("1", "1")})
        report = verify_zero_error(self.s, g)
        assert not report.passed
        assert report.leaks[tp] == pytest.approx(1 / 8, abs=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(StrategyError):
            verify_zero_error(self.s, registry_get("G7"))


class TestGhz:
    s = build_ghz_strategy()
    g = registry_get("G6")

    def test_state(self):
        amps = self.s.shared_state.amplitudes
        assert amps[0] == pytest.approx(1 / np.sqrt(2))
        assert amps[7] == pytest.approx(1 / np.sqrt(2))
        assert np.count_nonzero(np.abs(amps) > 1e-15) == 2

    def test_outcome_maps(self):
        for maps in self.s.outcome_maps:
            assert all(m == ("1", "2") for m in maps.values())

    @pytest.mark.parametrize("tp", list(itertools.product(("x1", "x2"), ("y1", "y2"), ("z1", "z2"))))
    def test_stabilizer_signs(self, tp):
        n_y = sum(t.endswith("2") for t in tp)
        dist = born_action_distribution(self.s, tp)
        sign = {ap: (-1) ** sum(a == "2" for a in ap) for ap in dist.probabilities}
        corr = sum(sign[ap] * p for ap, p in dist.probabilities.items())
        if n_y == 0:
            assert corr == pytest.approx(1.0, abs=1e-12)
        elif n_y == 2:
            assert corr == pytest.approx(-1.0, abs=1e-12)
        else:
            assert all(p == pytest.approx(1 / 8, abs=1e-12) for p in dist.probabilities.values())
            assert len(dist.probabilities) == 8

    def test_x1_y2_z2_uniform_quarter(self):
        dist = born_action_distribution(self.s, ("x1", "y2", "z2"))
        allowed = self.g.allowed[("x1", "y2", "z2")]
        assert {ap for ap, p in dist.probabilities.items() if p > 1e-12} == allowed
        assert all(dist[ap] == pytest.approx(0.25, abs=1e-12) for ap in allowed)

    def test_x2_y2_z1_is_deterministic_parity(self):
        # Y Y X on GHZ has eigenvalue -1, so only four triples occur
        dist = born_action_distribution(self.s, ("x2", "y2", "z1"))
        support = {ap for ap, p in dist.probabilities.items() if p > 1e-12}
        assert support == self.g.allowed[("x2", "y2", "z1")]
        assert len(support) == 4

    def test_verifies(self):
        assert verify_zero_error(self.s, self.g).passed
        assert verify_strong_zero_error(self.s, self.g).passed


class TestHardy:
    g = registry_get("G7")

    def test_norm(self):
        assert np.linalg.norm(hardy_state(PI3).amplitudes) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("gamma,delta,eta,kappa", [
        (np.pi / 3, np.pi / 3, 0, 0), (0.4, 2.5, 1.0, 3.0), (1.5, 0.2, 5.0, 0.5)])
    def test_no_a0b0_component(self, gamma, delta, eta, kappa):
        p = HardyParams(gamma, delta, eta, kappa)
        a0, _ = hardy_basis(gamma, eta)
        b0, _ = hardy_basis(delta, kappa)
        amp = np.vdot(np.kron(a0, b0), hardy_state(p).amplitudes)
        assert abs(amp) <= 1e-12

    def test_basis_phase_convention(self):
        a0, a1 = hardy_basis(np.pi / 3, 0.7)
        assert abs(np.vdot(a0, a1)) <= 1e-15
        np.testing.assert_allclose(a1, [np.sin(np.pi / 6), -np.exp(0.7j) * np.cos(np.pi / 6)])

    def test_product_endpoints_rejected(self):
        with pytest.raises(ValueError):
            HardyParams(0.0, 1.0)
        with pytest.raises(ValueError):
            HardyParams(1.0, np.pi)

    def test_solved_zero_pattern(self):
        s = build_hardy_strategy(PI3)
        small, large = [], []
        for tp in self.g.type_profiles():
            dist = born_action_distribution(s, tp)
            for ap in self.g.action_profiles():
                (large if ap in self.g.allowed[tp] else small).append(dist[ap])
        assert len(small) == 3 and max(small) <= 1e-12
        assert len(large) == 13 and min(large) > 0

    def test_solved_passes_strong(self):
        report = verify_strong_zero_error(build_hardy_strategy(PI3), self.g, 1e-9, 1e-3)
        assert report.passed
        assert report.distributions[("x1", "y1")][("1", "1")] > 0.01

    def test_x2_y2_one_one_zero(self):
        dist = born_action_distribution(build_hardy_strategy(PI3), ("x2", "y2"))
        assert dist[("1", "1")] <= 1e-12

    def test_literal_x_fails_at_pi_over_3(self):
        s = build_hardy_strategy(HardyParams(np.pi / 3, np.pi / 3, mode=HardyMode.LITERAL_X))
        report = verify_zero_error(s, self.g, 1e-9)
        assert not report.passed
        assert report.leaks[("x1", "y2")] > 0.01
        assert report.leaks[("x2", "y1")] > 0.01
        assert report.leaks[("x2", "y2")] <= 1e-12

    def test_maximally_entangled_fails(self):
        s = maximally_entangled_hardy_strategy()
        assert schmidt_coefficients(s.shared_state) == pytest.approx((2 ** -0.5, 2 ** -0.5))
        report = verify_strong_zero_error(s, self.g)
        assert report.max_leak <= 1e-12
        assert not report.passed
        assert report.distributions[("x1", "y1")][("1", "1")] <= 1e-12


class TestSolveBases:
    def test_phi_plus_computational(self):
        (a1, a2), (b1, b2) = solve_hardy_type1_bases(PHI_PLUS, (ket(0), ket(1)), (ket(0), ket(1)))
        np.testing.assert_allclose(a1, ket(0), atol=1e-15)
        np.testing.assert_allclose(b1, ket(0), atol=1e-15)
        assert abs(np.vdot(a1, a2)) <= 1e-15

    def test_orthogonality_property(self):
        state = hardy_state(PI3)
        a_basis, b_basis = hardy_basis(np.pi / 3, 0), hardy_basis(np.pi / 3, 0)
        (a1, _), (b1, _) = solve_hardy_type1_bases(state, a_basis, b_basis)
        assert abs(np.vdot(np.kron(a1, b_basis[1]), state.amplitudes)) <= 1e-12
        assert abs(np.vdot(np.kron(a_basis[1], b1), state.amplitudes)) <= 1e-12
        assert a1[np.flatnonzero(np.abs(a1) > 1e-12)[0]].imag == 0

    def test_product_state_rejected(self):
        with pytest.raises(ValueError):
            solve_hardy_type1_bases(StateVector((2, 2), ket(0, 0)), (ket(0), ket(1)), (ket(0), ket(1)))


class TestSchmidt:
    def test_phi_plus(self):
        assert schmidt_coefficients(PHI_PLUS) == pytest.approx((2 ** -0.5, 2 ** -0.5), abs=1e-12)

    def test_product(self):
        assert schmidt_coefficients(StateVector((2, 2), ket(0, 0))) == pytest.approx((1, 0))

    def test_hardy_intermediate(self):
        hi, lo = schmidt_coefficients(hardy_state(PI3))
        assert hi ** 2 + lo ** 2 == pytest.approx(1, abs=1e-10)
        assert 0 < lo and abs(lo - 2 ** -0.5) > 1e-6

    def test_three_parties_unsupported(self):
        with pytest.raises(ValueError):
            schmidt_coefficients(build_ghz_strategy().shared_state)
