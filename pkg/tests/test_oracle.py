import json

import numpy as np
import pytest

from discordium import (
    DensityMatrix,
    FamilyParams,
    GhzParams,
    MeasurementTree,
    OracleConfig,
    ReducedPoint,
    binary_h,
    build_noisy_ghz_dense,
    build_symmetric_family,
    classify_region,
    conditional_ensemble,
    discord_objective,
    discord_symmetric,
    measured_conditional_entropy,
    minimize_discord,
    minimize_reduced,
    partial_trace,
    realize,
    reduced_objective,
    von_neumann_entropy,
)
from discordium.pauli import PAULI

from conftest import sample_case1_family, sample_physical_family

Z_TREE3 = MeasurementTree.uniform(2, [0, 0, 1])
FAST = OracleConfig(starts=10, seed=7)


def all_ones_point(n):
    prefs = [""]
    for length in range(1, n - 1):
        prefs.extend(
            "".join(b) for b in __import__("itertools").product("01", repeat=length)
        )
    return ReducedPoint({p: 1.0 for p in prefs})


class TestMeasurementTree:
    def test_completeness_enforced(self):
        with pytest.raises(ValueError):
            MeasurementTree(2, {"": np.array([0.0, 0.0, 1.0])})

    def test_unit_norm_enforced(self):
        dirs = {"": np.array([0.0, 0.0, 2.0]),
                "0": np.array([0.0, 0.0, 1.0]),
                "1": np.array([0.0, 0.0, 1.0])}
        with pytest.raises(ValueError):
            MeasurementTree(2, dirs)

    def test_uniform_and_random(self, rng):
        t = MeasurementTree.uniform(3, [1, 0, 0])
        assert len(t.directions) == 7
        t2 = MeasurementTree.random(3, rng)
        for v in t2.directions.values():
            assert abs(np.linalg.norm(v) - 1.0) <= 1e-12

    def test_from_angles_round_trip(self):
        t = MeasurementTree.from_angles(2, np.array([0.0, 0.0, np.pi / 2, 0.0, np.pi / 2, np.pi / 2]))
        assert np.allclose(t.directions[""], [0, 0, 1], atol=1e-12)
        assert np.allclose(t.directions["0"], [1, 0, 0], atol=1e-12)
        assert np.allclose(t.directions["1"], [0, 1, 0], atol=1e-12)


class TestConditionalEnsemble:
    def test_family_first_level_probabilities(self, rng):
        params = sample_physical_family(rng, 3)
        rho = realize(build_symmetric_family(params))
        branches = conditional_ensemble(rho, Z_TREE3, 1)
        probs = sorted(b.probability for b in branches)
        expected = sorted([(1 + params.s) / 2, (1 - params.s) / 2])
        assert np.allclose(probs, expected, atol=1e-12)

    def test_maximally_mixed_uniform(self):
        rho = DensityMatrix(3, np.eye(8) / 8)
        for k in (1, 2):
            branches = conditional_ensemble(rho, Z_TREE3, k)
            assert np.allclose([b.probability for b in branches], 1 / 2**k, atol=1e-12)

    def test_ghz_pure_outcomes(self):
        rho = build_noisy_ghz_dense(GhzParams(2, 1.0))
        tree = MeasurementTree.uniform(1, [0, 0, 1])
        branches = conditional_ensemble(rho, tree, 1)
        assert np.allclose([b.probability for b in branches], 0.5, atol=1e-12)
        ket00 = np.zeros((4, 4))
        ket00[0, 0] = 1.0
        ket11 = np.zeros((4, 4))
        ket11[3, 3] = 1.0
        got = {b.prefix: b.state.entries for b in branches}
        assert np.allclose(got["0"], ket00, atol=1e-12)
        assert np.allclose(got["1"], ket11, atol=1e-12)

    def test_probabilities_sum_to_one(self, rng):
        params = sample_physical_family(rng, 3)
        rho = realize(build_symmetric_family(params))
        tree = MeasurementTree.random(2, rng)
        for k in (1, 2):
            branches = conditional_ensemble(rho, tree, k)
            assert sum(b.probability for b in branches) == pytest.approx(1.0, abs=1e-12)
            for b in branches:
                if not b.negligible:
                    ev = np.linalg.eigvalsh(b.state.entries)
                    assert ev[0] >= -1e-10

    def test_zero_probability_branch_flagged(self):
        # product |00><00| measured along z: the minus outcome never fires
        arr = np.zeros((4, 4), dtype=complex)
        arr[0, 0] = 1.0
        rho = DensityMatrix(2, arr)
        branches = conditional_ensemble(rho, MeasurementTree.uniform(1, [0, 0, 1]), 1)
        flags = {b.prefix: b.negligible for b in branches}
        assert flags == {"0": False, "1": True}
        assert [b for b in branches if b.negligible][0].state is None

    def test_invalid_k(self):
        rho = DensityMatrix(3, np.eye(8) / 8)
        with pytest.raises(ValueError):
            conditional_ensemble(rho, Z_TREE3, 3)


class TestMeasuredConditionalEntropy:
    def test_matches_ensemble_route(self, rng):
        params = sample_physical_family(rng, 3)
        rho = realize(build_symmetric_family(params))
        tree = MeasurementTree.random(2, rng)
        for k in (1, 2):
            fast = measured_conditional_entropy(rho, tree, k)
            slow = 0.0
            for b in conditional_ensemble(rho, tree, k):
                if b.negligible:
                    continue
                qubit = partial_trace(b.state, {k + 1})
                slow += b.probability * von_neumann_entropy(qubit)
            assert fast == pytest.approx(slow, abs=1e-10)

    def test_family_z_tree_matches_reduced_g(self, rng):
        params = sample_physical_family(rng, 3)
        rho = realize(build_symmetric_family(params))
        got = measured_conditional_entropy(rho, Z_TREE3, 1)
        g_at_one = reduced_objective(params, all_ones_point(3)).G
        assert got == pytest.approx(1.0 - g_at_one, abs=1e-11)

    def test_product_state_tree_independent(self, rng):
        # true product state: conditional entropy is the bare marginal entropy
        s1, s2, s3 = 0.4, -0.3, 0.2
        factors = [0.5 * (np.eye(2) + s * PAULI["Z"]) for s in (s1, s2, s3)]
        arr = np.kron(np.kron(factors[0], factors[1]), factors[2])
        rho = DensityMatrix(3, arr)
        marginal = -sum(p * np.log2(p) for p in ((1 + s2) / 2, (1 - s2) / 2))
        for _ in range(3):
            tree = MeasurementTree.random(2, rng)
            got = measured_conditional_entropy(rho, tree, 1)
            assert got == pytest.approx(marginal, abs=1e-11)

    def test_ghz_pure_branches_zero(self):
        rho = build_noisy_ghz_dense(GhzParams(3, 1.0))
        assert measured_conditional_entropy(rho, Z_TREE3, 2) == pytest.approx(0.0, abs=1e-12)


class TestDiscordObjective:
    def test_maximally_mixed_any_tree(self, rng):
        rho = DensityMatrix(3, np.eye(8) / 8)
        for _ in range(3):
            tree = MeasurementTree.random(2, rng)
            assert discord_objective(rho, tree) == pytest.approx(0.0, abs=1e-11)

    def test_bell_diagonal_z_tree_hand_value(self):
        params = FamilyParams(2, 0.3, 0.2, 0.1, 0.0)
        rho = realize(build_symmetric_family(params))
        tree = MeasurementTree.uniform(1, [0, 0, 1])
        slog = float(np.sum([lam * np.log2(lam) for lam in np.linalg.eigvalsh(rho.entries)]))
        expected = 2 + slog - 0.5 * binary_h(0.1)
        assert discord_objective(rho, tree) == pytest.approx(expected, abs=1e-11)

    def test_family_z_tree_reduced_composition(self, rng):
        params = sample_physical_family(rng, 3)
        rho = realize(build_symmetric_family(params))
        slog = float(np.sum([lam * np.log2(max(lam, 1e-300)) for lam in np.linalg.eigvalsh(rho.entries) if lam > 1e-14]))
        y_ones = reduced_objective(params, all_ones_point(3)).Y
        expected = slog + 3 - 0.5 * binary_h(params.s) - y_ones
        assert discord_objective(rho, Z_TREE3) == pytest.approx(expected, abs=1e-10)

    def test_sign_flip_invariance(self, rng):
        # negating every direction relabels all outcomes, so prefixes complement
        params = sample_physical_family(rng, 3)
        rho = realize(build_symmetric_family(params))

        def relabeled(tree):
            comp = lambda p: "".join("1" if b == "0" else "0" for b in p)
            return MeasurementTree(
                tree.n_measured, {p: -tree.directions[comp(p)] for p in tree.directions}
            )

        for _ in range(5):
            tree = MeasurementTree.random(2, rng)
            assert discord_objective(rho, tree) == pytest.approx(
                discord_objective(rho, relabeled(tree)), abs=1e-9
            )
        out = minimize_discord(rho, FAST)
        assert discord_objective(rho, relabeled(out.best_tree)) == pytest.approx(
            out.value, abs=1e-9
        )


class TestMinimizeDiscord:
    def test_ghz_closed_form(self):
        rho = build_noisy_ghz_dense(GhzParams(2, 0.5))
        out = minimize_discord(rho, FAST)
        assert out.value == pytest.approx(0.26248318376373436, abs=5e-3)
        assert out.starts_converged >= 1

    def test_bell_diagonal_spot(self):
        rho = realize(build_symmetric_family(FamilyParams(2, 0.3, 0.2, 0.1, 0.0)))
        out = minimize_discord(rho, FAST)
        assert out.value == pytest.approx(0.05068495714647761, abs=5e-3)

    def test_case2_3q_matches_analytic(self):
        params = FamilyParams(3, 0.3, 0.2, 0.1, 0.0)
        out = minimize_discord(realize(build_symmetric_family(params)), FAST)
        assert out.value == pytest.approx(discord_symmetric(params).value, abs=5e-3)

    def test_product_state_zero(self):
        factors = [0.5 * (np.eye(2) + s * PAULI["Z"]) for s in (0.4, -0.3, 0.2)]
        arr = np.kron(np.kron(factors[0], factors[1]), factors[2])
        out = minimize_discord(DensityMatrix(3, arr), OracleConfig(starts=6, seed=3))
        assert abs(out.value) <= 1e-6

    def test_minimizer_property(self, rng):
        params = sample_physical_family(rng, 3)
        rho = realize(build_symmetric_family(params))
        out = minimize_discord(rho, FAST)
        for _ in range(20):
            tree = MeasurementTree.random(2, rng)
            assert discord_objective(rho, tree) >= out.value - 1e-9

    def test_deterministic_given_seed(self):
        rho = realize(build_symmetric_family(FamilyParams(2, 0.25, -0.15, 0.1, 0.2)))
        a = minimize_discord(rho, OracleConfig(starts=8, seed=11))
        b = minimize_discord(rho, OracleConfig(starts=8, seed=11))
        assert a.value == b.value
        assert a.spread == b.spread
        assert a.starts_converged == b.starts_converged

    def test_cap(self):
        rho = DensityMatrix(5, np.eye(32) / 32)
        with pytest.raises(ValueError):
            minimize_discord(rho, FAST)

    def test_best_tree_reproduces_value(self):
        rho = realize(build_symmetric_family(FamilyParams(3, 0.1, 0.1, -0.2, 0.3)))
        out = minimize_discord(rho, FAST)
        assert discord_objective(rho, out.best_tree) == pytest.approx(out.value, abs=1e-8)


class TestReducedObjective:
    def test_g_values(self):
        params = FamilyParams(3, 0.1, 0.1, -0.2, 0.3)
        point0 = ReducedPoint({"": 0.0, "0": 1.0, "1": 1.0})
        point1 = ReducedPoint({"": 1.0, "0": 1.0, "1": 1.0})
        assert reduced_objective(params, point0).G == pytest.approx(
            0.06593194462450899, abs=1e-12
        )
        assert reduced_objective(params, point1).G == pytest.approx(
            0.07310400793180988, abs=1e-12
        )

    def test_w_all_ones_s_zero(self):
        for n in (2, 3, 4):
            params = FamilyParams(n, 0.1, 0.2, -0.35, 0.0)
            res = reduced_objective(params, all_ones_point(n))
            assert res.W == pytest.approx(0.5 * binary_h(0.35), abs=1e-12)

    def test_y_composition(self):
        p3 = FamilyParams(3, 0.1, 0.1, -0.2, 0.3)
        r3 = reduced_objective(p3, all_ones_point(3))
        assert r3.Y == pytest.approx(r3.G + r3.F, abs=1e-14)
        assert r3.F == r3.W
        p4 = FamilyParams(4, 0.1, 0.1, -0.2, 0.1)
        r4 = reduced_objective(p4, all_ones_point(4))
        assert r4.Y == pytest.approx(r4.G + r4.F + r4.T, abs=1e-14)
        assert r4.T == r4.W

    def test_all_ones_parity_matches_max_w(self, rng):
        # at the all-z reduction, the total equals the closed-form bracket
        from discordium import max_w

        params = sample_case1_family(rng, 3)
        res = reduced_objective(params, all_ones_point(3))
        total = res.Y + 0.5 * binary_h(params.s)
        assert total == pytest.approx(max_w(params, "parity"), abs=1e-11)

    def test_printed_cross_sign_matches_printed_pattern(self, rng):
        from discordium import max_w

        params = sample_case1_family(rng, 3)
        res = reduced_objective(params, all_ones_point(3), cross_sign="printed")
        total = res.Y + 0.5 * binary_h(params.s)
        assert total == pytest.approx(max_w(params, "printed"), abs=1e-11)

    def test_monotone_in_phi(self, rng):
        # Y never decreases when a final-level radicand auxiliary grows
        params = FamilyParams(3, 0.15, 0.1, -0.3, 0.2)
        for _ in range(100):
            z = {"": float(rng.uniform(0, 1)), "0": float(rng.uniform(0, 1)),
                 "1": float(rng.uniform(0, 1))}
            phi0 = {w: float(rng.uniform(0, 0.05)) for w in ("0", "1")}
            base = reduced_objective(params, ReducedPoint(z, phi0)).Y
            for w in ("0", "1"):
                bumped = dict(phi0)
                bumped[w] = phi0[w] + 1e-4
                up = reduced_objective(params, ReducedPoint(z, bumped)).Y
                assert up >= base - 1e-12

    def test_envelope_dominates_tight(self, rng):
        params = FamilyParams(3, 0.15, 0.1, -0.3, 0.2)
        for _ in range(20):
            z = {k: float(rng.uniform(0, 1)) for k in ("", "0", "1")}
            point = ReducedPoint(z)
            tight = reduced_objective(params, point, envelope=False).Y
            loose = reduced_objective(params, point, envelope=True).Y
            assert loose >= tight - 1e-12

    def test_out_of_range_coordinates(self):
        params = FamilyParams(3, 0.1, 0.1, -0.2, 0.3)
        with pytest.raises(ValueError):
            reduced_objective(params, ReducedPoint({"": 1.5, "0": 1.0, "1": 1.0}))


class TestMinimizeReduced:
    def test_case1_maximizer_at_ones(self):
        params = FamilyParams(3, 0.1, 0.1, -0.2, 0.3)
        out = minimize_reduced(params, OracleConfig(starts=4, seed=2))
        assert out.value == pytest.approx(discord_symmetric(params).value, abs=1e-7)
        assert all(abs(z - 1.0) <= 1e-5 for z in out.best_tree.z3.values())

    def test_s_zero_matches_case2(self, rng):
        params = sample_physical_family(rng, 4, s_zero=True)
        out = minimize_reduced(params, OracleConfig(starts=4, seed=2))
        assert out.value == pytest.approx(discord_symmetric(params).value, abs=1e-7)

    def test_region_none_finite_value(self):
        # this region-none point is marginally unphysical (smallest
        # eigenvalue -0.0486) so only the reduced route is required to be finite
        params = FamilyParams(3, 0.6, 0.6, 0.5, 0.2)
        assert classify_region(params).region == "none"
        red = minimize_reduced(params, OracleConfig(starts=4, seed=2))
        assert np.isfinite(red.value)

    def test_region_none_agrees_with_full_oracle(self):
        params = FamilyParams(3, 0.4, 0.3, 0.2, 0.1)
        assert classify_region(params).region == "none"
        red = minimize_reduced(params, OracleConfig(starts=4, seed=2))
        full = minimize_discord(
            realize(build_symmetric_family(params)), OracleConfig(starts=12, seed=2)
        )
        assert red.value == pytest.approx(full.value, abs=5e-3)

    def test_matches_full_oracle_random(self, rng):
        for n in (3, 4):
            params = sample_physical_family(rng, n)
            red = minimize_reduced(params, OracleConfig(starts=4, seed=5))
            full = minimize_discord(
                realize(build_symmetric_family(params)), OracleConfig(starts=10, seed=5)
            )
            assert red.value == pytest.approx(full.value, abs=5e-3)

    def test_cap(self):
        with pytest.raises(ValueError):
            minimize_reduced(FamilyParams(7, 0.05, 0.05, -0.1, 0.0), FAST)


class TestOracleConfig:
    def test_from_json(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"starts": 16, "max_iters": 500, "f_tol": 1e-8, "seed": 42}))
        cfg = OracleConfig.from_json(path)
        assert cfg == OracleConfig(starts=16, max_iters=500, f_tol=1e-8, seed=42)

    def test_starts_positive(self):
        with pytest.raises(ValueError):
            OracleConfig(starts=0)
