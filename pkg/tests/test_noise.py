from fractions import Fraction

import numpy as np
import pytest

from zeronash.game import registry_get
from zeronash.noise import (
    CSV_HEADER,
    NoiseParams,
    advantage_sweep,
    closed_form_g5_error,
    depolarize_measurement,
    depolarize_state,
    noisy_error_probability,
    noisy_strategy,
)
from zeronash.quantum import born_action_distribution, build_ghz_strategy, build_magic_square_strategy
from zeronash.tensor import validate_measurement

G5 = registry_get("G5")
MAGIC = build_magic_square_strategy()


@pytest.fixture(scope="module")
def sweep():
    return advantage_sweep(G5, MAGIC, (21, 21))


class TestDepolarize:
    def test_state_identity_and_full(self):
        rho = MAGIC.shared_state.density()
        np.testing.assert_allclose(depolarize_state(MAGIC.shared_state, 0), rho, atol=1e-15)
        np.testing.assert_allclose(depolarize_state(rho, 1), np.eye(16) / 16, atol=1e-15)

    def test_purity_half(self):
        rho = depolarize_state(MAGIC.shared_state, 0.5)
        assert np.trace(rho @ rho).real == pytest.approx(0.296875, abs=1e-12)
        assert np.trace(rho).real == pytest.approx(1, abs=1e-12)
        assert np.linalg.eigvalsh(rho).min() >= -1e-12

    def test_measurement_limits(self):
        m = MAGIC.measurements[0]["x3"]
        same = depolarize_measurement(m, 0)
        for a, b in zip(m.effects, same.effects):
            np.testing.assert_allclose(a, b, atol=1e-15)
        for e in depolarize_measurement(m, 1).effects:
            np.testing.assert_allclose(e, np.eye(4) / 4, atol=1e-15)

    def test_completeness_preserved(self):
        for ms in MAGIC.measurements:
            for m in ms.values():
                report = validate_measurement(depolarize_measurement(m, 0.3))
                assert report.completeness_defect <= 1e-12
                assert report.passed

    def test_two_outcome_divisor(self):
        m = build_ghz_strategy().measurements[0]["x1"]
        assert validate_measurement(depolarize_measurement(m, 0.7)).passed

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            NoiseParams(1.2, 0)
        with pytest.raises(ValueError):
            depolarize_state(np.eye(2) / 2, -0.1)


class TestErrorProbability:
    def test_noiseless(self):
        assert noisy_error_probability(G5, MAGIC, NoiseParams(0, 0)) <= 1e-12

    def test_documented_point(self):
        q = noisy_error_probability(G5, MAGIC, NoiseParams(0.1, 0.05))
        assert q == pytest.approx(0.093875, abs=1e-12)
        assert closed_form_g5_error(NoiseParams(0.1, 0.05)) == pytest.approx(0.093875, abs=1e-15)

    def test_fully_mixed_state(self):
        assert noisy_error_probability(G5, MAGIC, NoiseParams(1, 0)) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("params,value", [((0, 0), 0.0), ((0.1, 0.1), 0.1355), ((1, 1), 0.5)])
    def test_closed_form_values(self, params, value):
        assert closed_form_g5_error(NoiseParams(*params)) == pytest.approx(value, abs=1e-15)

    def test_concentrated_prior(self):
        prior = {tp: Fraction(int(tp == ("x3", "y3"))) for tp in G5.type_profiles()}
        n = NoiseParams(0.4, 0.2)
        assert noisy_error_probability(G5, MAGIC, n, prior) == pytest.approx(
            closed_form_g5_error(n), abs=1e-12)

    def test_normalization_on_grid(self):
        for es in np.linspace(0, 1, 6):
            for em in np.linspace(0, 1, 6):
                s = noisy_strategy(MAGIC, NoiseParams(es, em))
                for tp in G5.type_profiles():
                    assert abs(born_action_distribution(s, tp).total() - 1) <= 1e-9


class TestSweep:
    def test_shape_and_order(self, sweep):
        assert len(sweep.rows) == 441
        assert sweep.rows[0].eps_s == 0 and sweep.rows[0].eps_m == 0
        assert sweep.rows[1].eps_s == 0 and sweep.rows[1].eps_m == pytest.approx(0.05)
        assert sweep.rows[21].eps_s == pytest.approx(0.05)
        assert sweep.classical_floor == Fraction(1, 9)

    def test_closed_form_everywhere(self, sweep):
        assert max(r.closed_form_delta for r in sweep.rows) <= 1e-10

    def test_advantage_flag(self, sweep):
        assert all(r.advantage == (r.quantum_error < r.classical_floor) for r in sweep.rows)
        assert sweep.rows[0].advantage

    def test_boundary_eps_m_zero(self, sweep):
        for r in sweep.rows:
            if r.eps_m == 0:
                assert r.advantage == (r.eps_s < 2 / 9)

    def test_monotone(self, sweep):
        q = sweep.grid()
        assert (np.diff(q, axis=0) >= -1e-12).all()
        assert (np.diff(q, axis=1) >= -1e-12).all()

    def test_down_set(self, sweep):
        adv = np.array([r.advantage for r in sweep.rows]).reshape(21, 21)
        for i, j in zip(*np.nonzero(adv)):
            assert adv[: i + 1, : j + 1].all()

    def test_csv(self, sweep):
        lines = sweep.to_csv().split("\n")
        assert lines[0] == ",".join(CSV_HEADER)
        assert lines[-1] == ""
        assert len(lines) == 443
        assert lines[1].startswith("0,0,0,0.111111111111,true,")
        assert "\r" not in sweep.to_csv()

    def test_no_closed_form_column_empty(self):
        g6 = registry_get("G6")
        result = advantage_sweep(g6, build_ghz_strategy(), (2, 2))
        assert all(line.endswith(",") for line in result.to_csv().splitlines()[1:])

    def test_grid_too_small(self):
        with pytest.raises(ValueError):
            advantage_sweep(G5, MAGIC, (1, 5))
