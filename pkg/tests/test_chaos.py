import math

import numpy as np
import pytest

from nmrbaker import chaos, lindblad, qstate
from nmrbaker.chaos import ExperimentConfig


@pytest.fixture(scope="module")
def fig2_chaotic_ensemble():
    return chaos.history_ensemble(
        ExperimentConfig.preset("fig5", map_variant="chaotic"), 3
    )


@pytest.fixture(scope="module")
def fig2_regular_ensemble():
    return chaos.history_ensemble(
        ExperimentConfig.preset("fig5", map_variant="regular"), 3
    )


@pytest.fixture(scope="module")
def chaotic_result():
    return chaos.hypersensitivity_experiment(
        ExperimentConfig.preset("fig5", map_variant="chaotic")
    )


@pytest.fixture(scope="module")
def regular_result():
    return chaos.hypersensitivity_experiment(
        ExperimentConfig.preset("fig5", map_variant="regular")
    )


def basis_projectors(n=8):
    return [np.diag([1.0 + 0j if i == k else 0 for i in range(n)]) for k in range(n)]


class TestConfig:
    def test_fig2_preset_noise(self):
        cfg = ExperimentConfig.preset("fig2")
        assert (cfg.inv_gamma_h, cfg.inv_gamma_c1, cfg.inv_gamma_c2) == (4.0, 0.7, 0.4)
        assert cfg.steps == 6 and not cfg.artificial_perturbation

    def test_fig3_preset_noise(self):
        cfg = ExperimentConfig.preset("fig3")
        assert (cfg.inv_gamma_h, cfg.inv_gamma_c1, cfg.inv_gamma_c2) == (10.0, 10.0, 0.2)

    def test_fig4_preset_has_perturbation(self):
        cfg = ExperimentConfig.preset("fig4")
        assert cfg.artificial_perturbation
        assert (cfg.inv_gamma_h, cfg.inv_gamma_c1, cfg.inv_gamma_c2) == (10.0, 10.0, 10.0)

    def test_unknown_preset_rejected(self):
        with pytest.raises(ValueError):
            ExperimentConfig.preset("fig9")

    def test_overrides(self):
        cfg = ExperimentConfig.preset("fig2", steps=3, map_variant="regular")
        assert cfg.steps == 3 and cfg.map_variant == "regular"


class TestInitialState:
    def test_normalized_pure_product(self):
        psi = chaos.initial_state()
        assert np.linalg.norm(psi) == pytest.approx(1.0)
        rho = chaos.initial_density()
        assert qstate.von_neumann_entropy_bits(rho) == pytest.approx(0.0, abs=1e-12)

    def test_every_spin_along_plus_y(self):
        rho = chaos.initial_density()
        y = qstate.PAULI_Y
        for spin in ("H", "C1", "C2"):
            op = qstate.embed(y, [spin], ("H", "C1", "C2"))
            assert np.trace(op @ rho).real == pytest.approx(1.0)


class TestEntropyExperiment:
    def test_starts_at_zero_and_stays_below_three(self):
        series = chaos.entropy_experiment(ExperimentConfig.preset("fig2", steps=4))
        assert series[0] == (0, pytest.approx(0.0, abs=1e-10))
        assert all(s <= 3.0 + 1e-9 for _, s in series)
        assert [n for n, _ in series] == [0, 1, 2, 3, 4]

    def test_monotone_for_unital_channel_without_noise(self):
        cfg = ExperimentConfig.preset(
            "fig4",
            map_variant="regular",
            inv_gamma_h=math.inf,
            inv_gamma_c1=math.inf,
            inv_gamma_c2=math.inf,
        )
        series = chaos.entropy_experiment(cfg)
        values = [s for _, s in series]
        for a, b in zip(values, values[1:]):
            assert b >= a - 1e-9

    def test_deterministic(self):
        cfg = ExperimentConfig.preset("fig2", steps=3)
        a = chaos.entropy_experiment(cfg)
        b = chaos.entropy_experiment(cfg)
        assert a == b


class TestHistoryEnsemble:
    def test_three_steps_give_eight_states(self, fig2_chaotic_ensemble):
        assert len(fig2_chaotic_ensemble) == 8
        for rho in fig2_chaotic_ensemble:
            qstate.check_density_matrix(rho)

    def test_all_zero_history_is_unperturbed_run(self, fig2_chaotic_ensemble):
        cfg = ExperimentConfig.preset("fig5", map_variant="chaotic", steps=3)
        series = chaos.entropy_experiment(cfg)
        unperturbed_entropy = series[-1][1]
        s = qstate.von_neumann_entropy_bits(fig2_chaotic_ensemble[0])
        assert s == pytest.approx(unperturbed_entropy, abs=1e-12)

    def test_identity_perturbation_collapses_ensemble(self, monkeypatch):
        monkeypatch.setattr(
            chaos, "perturbation_unitary", lambda spin: np.eye(8, dtype=complex)
        )
        cfg = ExperimentConfig.preset("fig5", map_variant="chaotic")
        rhos = chaos.history_ensemble(cfg, 2)
        for rho in rhos[1:]:
            np.testing.assert_allclose(rho, rhos[0], atol=1e-12)
        s_bar_max = qstate.von_neumann_entropy_bits(chaos.average_rho(rhos))
        assert s_bar_max == pytest.approx(
            qstate.von_neumann_entropy_bits(rhos[0]), abs=1e-12
        )

    def test_too_many_steps_rejected(self):
        with pytest.raises(ValueError):
            chaos.history_ensemble(ExperimentConfig.preset("fig5"), 7)


class TestAverageRho:
    def test_identical_states_average_to_themselves(self):
        rho = chaos.initial_density()
        np.testing.assert_array_equal(chaos.average_rho([rho, rho, rho]), rho)

    def test_unit_trace(self, fig2_chaotic_ensemble):
        avg = chaos.average_rho(fig2_chaotic_ensemble)
        assert np.trace(avg).real == pytest.approx(1.0, abs=1e-9)

    def test_chaotic_s_bar_max_anchor(self, fig2_chaotic_ensemble):
        s = qstate.von_neumann_entropy_bits(chaos.average_rho(fig2_chaotic_ensemble))
        assert 2.42 <= s <= 2.92

    def test_mixing_never_below_mean_entropy(self, fig2_chaotic_ensemble):
        # concavity: S(average) >= mean of the individual entropies
        s_max = qstate.von_neumann_entropy_bits(
            chaos.average_rho(fig2_chaotic_ensemble)
        )
        mean_individual = np.mean(
            [qstate.von_neumann_entropy_bits(r) for r in fig2_chaotic_ensemble]
        )
        assert s_max >= mean_individual - 1e-12

    def test_empty_ensemble_rejected(self):
        with pytest.raises(ValueError):
            chaos.average_rho([])


class TestGroupingStats:
    def test_single_group(self, fig2_chaotic_ensemble):
        stats = chaos.grouping_stats([0] * 8, fig2_chaotic_ensemble)
        assert stats.information == pytest.approx(0.0)
        s_bar_max = qstate.von_neumann_entropy_bits(
            chaos.average_rho(fig2_chaotic_ensemble)
        )
        assert stats.mean_conditional_entropy == pytest.approx(s_bar_max, abs=1e-12)

    def test_even_splits_give_integer_information(self, fig2_chaotic_ensemble):
        stats = chaos.grouping_stats([0, 0, 0, 0, 1, 1, 1, 1], fig2_chaotic_ensemble)
        assert stats.information == pytest.approx(1.0)
        stats = chaos.grouping_stats([0, 0, 1, 1, 2, 2, 3, 3], fig2_chaotic_ensemble)
        assert stats.information == pytest.approx(2.0)

    def test_singletons(self, fig2_chaotic_ensemble):
        stats = chaos.grouping_stats(list(range(8)), fig2_chaotic_ensemble)
        assert stats.information == pytest.approx(3.0)
        mean_individual = np.mean(
            [qstate.von_neumann_entropy_bits(r) for r in fig2_chaotic_ensemble]
        )
        assert stats.mean_conditional_entropy == pytest.approx(mean_individual)

    def test_wrong_length_rejected(self, fig2_chaotic_ensemble):
        with pytest.raises(ValueError):
            chaos.grouping_stats([0, 1], fig2_chaotic_ensemble)


class TestJsDistance:
    def test_self_distance_zero(self):
        rho = chaos.initial_density()
        assert chaos.js_distance(rho, rho) == 0.0

    def test_symmetric(self, fig2_chaotic_ensemble):
        a, b = fig2_chaotic_ensemble[0], fig2_chaotic_ensemble[5]
        assert chaos.js_distance(a, b) == pytest.approx(chaos.js_distance(b, a))

    def test_orthogonal_pure_states_one_bit(self):
        p = basis_projectors()
        assert chaos.js_distance(p[0], p[1]) == pytest.approx(1.0)

    def test_nonnegative_on_ensemble(self, fig2_chaotic_ensemble):
        for a in fig2_chaotic_ensemble:
            for b in fig2_chaotic_ensemble:
                assert chaos.js_distance(a, b) >= 0.0


class TestGreedyGrouping:
    def test_all_singletons_when_groups_equal_size(self, fig2_chaotic_ensemble):
        for seed in range(5):
            assignment = chaos.greedy_grouping(fig2_chaotic_ensemble, 8, seed)
            assert sorted(assignment) == list(range(8))

    def test_single_group(self, fig2_chaotic_ensemble):
        assignment = chaos.greedy_grouping(fig2_chaotic_ensemble, 1, seed=0)
        assert set(assignment) == {0}

    def test_deterministic_for_fixed_seed(self, fig2_chaotic_ensemble):
        a = chaos.greedy_grouping(fig2_chaotic_ensemble, 3, seed=17)
        b = chaos.greedy_grouping(fig2_chaotic_ensemble, 3, seed=17)
        assert a == b

    def test_group_count_validated(self, fig2_chaotic_ensemble):
        with pytest.raises(ValueError):
            chaos.greedy_grouping(fig2_chaotic_ensemble, 9, seed=0)


class TestSetPartitions:
    @pytest.mark.parametrize(
        "n,bell", [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (8, 4140)]
    )
    def test_bell_numbers(self, n, bell):
        assert sum(1 for _ in chaos.set_partitions(n)) == bell

    def test_strings_are_restricted_growth(self):
        for a in chaos.set_partitions(5):
            assert a[0] == 0
            for k in range(1, 5):
                assert a[k] <= max(a[:k]) + 1

    def test_no_duplicates(self):
        parts = list(chaos.set_partitions(6))
        assert len(parts) == len(set(parts)) == 203


class TestExhaustiveFrontier:
    def test_orthogonal_ensemble_frontier_is_diagonal(self):
        # for 8 equiprobable orthogonal pure states every partition has
        # I = delta_s exactly, so the frontier is the identity line
        curve = chaos.exhaustive_imin(basis_projectors())
        np.testing.assert_allclose(curve.i_min, curve.delta_s, atol=1e-9)
        delta_s, info, _ = chaos.partition_scan(basis_projectors())
        np.testing.assert_allclose(info, delta_s, atol=1e-9)

    def test_frontier_nondecreasing_and_bounded(self, fig2_chaotic_ensemble):
        curve = chaos.exhaustive_imin(fig2_chaotic_ensemble)
        assert np.all(np.diff(curve.i_min) >= -1e-12)
        assert np.all(curve.i_min >= curve.delta_s - 1e-12)

    def test_information_bound_on_all_partitions(self, fig2_chaotic_ensemble):
        delta_s, info, _ = chaos.partition_scan(fig2_chaotic_ensemble)
        assert len(info) == 4140
        assert np.all(info >= delta_s - 1e-12)

    def test_refinement_never_decreases_information(self, fig2_chaotic_ensemble):
        # split the first group of a coarse partition and compare
        rng = np.random.default_rng(0)
        delta_s, info, s_max = chaos.partition_scan(fig2_chaotic_ensemble)
        for _ in range(20):
            coarse = [0, 0, 0, 0, 1, 1, 1, 1]
            rng.shuffle(coarse)
            fine = list(coarse)
            first_zero = fine.index(0)
            fine[first_zero] = 2
            st_c = chaos.grouping_stats(coarse, fig2_chaotic_ensemble)
            st_f = chaos.grouping_stats(fine, fig2_chaotic_ensemble)
            assert st_f.information >= st_c.information - 1e-12
            assert (
                st_f.mean_conditional_entropy
                <= st_c.mean_conditional_entropy + 1e-12
            )

    def test_too_large_ensemble_rejected(self):
        with pytest.raises(ValueError):
            chaos.partition_scan([np.eye(2) / 2] * 11)


class TestHypersensitivityExperiment:
    def test_chaotic_anchor(self, chaotic_result):
        assert chaotic_result.s_bar_max == pytest.approx(2.67, abs=0.25)
        assert chaotic_result.s_bar_max == pytest.approx(2.67, abs=0.1)

    def test_regular_anchor(self, regular_result):
        assert regular_result.s_bar_max == pytest.approx(2.74, abs=0.25)
        assert regular_result.s_bar_max == pytest.approx(2.74, abs=0.1)

    def test_chaotic_slope(self, chaotic_result):
        assert 4.0 <= chaotic_result.slope <= 8.0

    def test_regular_one_bit_recovers_half_bit(self, fig2_regular_ensemble):
        delta_s, info, _ = chaos.partition_scan(fig2_regular_ensemble)
        one_bit = delta_s[np.isclose(info, 1.0, atol=1e-9)]
        assert one_bit.max() >= 0.5

    def test_exchange_terms_shrink_the_regular_recovery(self):
        # with the XX+YY coupling kept, the kicks no longer commute with
        # the dynamics, the ensemble entropy moves to ~2.72 bits and one
        # bit of information recovers only ~0.5 bits
        cfg = ExperimentConfig.preset(
            "fig5", map_variant="regular", hamiltonian="full"
        )
        ensemble = chaos.history_ensemble(cfg, 3)
        s = qstate.von_neumann_entropy_bits(chaos.average_rho(ensemble))
        assert s == pytest.approx(2.72, abs=0.1)
        delta_s, info, _ = chaos.partition_scan(ensemble)
        one_bit = delta_s[np.isclose(info, 1.0, atol=1e-9)]
        assert 0.4 <= one_bit.max() <= 0.6

    def test_greedy_never_beats_exhaustive(self, chaotic_result):
        frontier = chaotic_result.frontier
        for d, i in chaotic_result.greedy_points:
            feasible = frontier.i_min[frontier.delta_s >= d - 1e-12]
            if feasible.size:
                assert i >= feasible.min() - 1e-12

    def test_partition_count(self, chaotic_result):
        assert chaotic_result.n_partitions == 4140

    def test_deterministic(self):
        cfg = ExperimentConfig.preset("fig5", map_variant="regular", seed=5)
        a = chaos.hypersensitivity_experiment(cfg)
        b = chaos.hypersensitivity_experiment(cfg)
        assert a.s_bar_max == b.s_bar_max
        assert a.greedy_points == b.greedy_points
        np.testing.assert_array_equal(a.frontier.i_min, b.frontier.i_min)
