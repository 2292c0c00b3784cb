"""Bell-test: quantum violation, classical soundness, scans, Monte Carlo."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qptree.bell import (
    ASSIGNMENT_LABELS,
    HOLDS,
    VIOLATED,
    BellProbabilities,
    BellScenario,
    HiddenVariableModel,
    check_inequality,
    classical_bell,
    monte_carlo_bell,
    quantum_bell,
    random_models,
    violation_scan,
)
from qptree.spin import UnitVector

from test_spin import rotation_matrix


def half_sin_sq(deg: float) -> float:
    """Closed-form singlet (+,+) probability at relative angle ``deg``."""
    return 0.5 * math.sin(math.radians(deg) / 2.0) ** 2


# ---------------------------------------------------------------------------
# quantum side
# ---------------------------------------------------------------------------


class TestQuantumBell:
    def test_bisecting_45_violates(self):
        probs = quantum_bell(BellScenario.coplanar(45.0))
        assert probs.p_ab == pytest.approx(0.25, abs=1e-12)
        assert probs.p_ac == pytest.approx(0.07322330470336312, abs=1e-12)
        assert probs.p_cb == pytest.approx(0.07322330470336312, abs=1e-12)
        assert probs.margin == pytest.approx(-0.1035533905932737, abs=1e-12)
        assert check_inequality(probs) == VIOLATED

    def test_equal_directions_hold_trivially(self):
        z = UnitVector(0, 0, 1)
        probs = quantum_bell(BellScenario(a=z, b=z, c=UnitVector.from_angles(45.0, 0.0)))
        assert probs.p_ab == pytest.approx(0.0, abs=1e-12)
        assert check_inequality(probs) == HOLDS

    def test_bisecting_60(self):
        probs = quantum_bell(BellScenario.coplanar(60.0))
        assert probs.p_ab == pytest.approx(0.375, abs=1e-12)
        assert probs.p_ac == pytest.approx(0.125, abs=1e-12)
        assert probs.margin == pytest.approx(-0.125, abs=1e-12)

    @given(theta=st.floats(min_value=1.0, max_value=179.0))
    @settings(max_examples=40, deadline=None)
    def test_matches_closed_form(self, theta):
        probs = quantum_bell(BellScenario.coplanar(theta))
        assert probs.p_ab == pytest.approx(half_sin_sq(2 * theta), abs=1e-10)
        assert probs.p_ac == pytest.approx(half_sin_sq(theta), abs=1e-10)
        assert probs.p_cb == pytest.approx(half_sin_sq(theta), abs=1e-10)

    @pytest.mark.parametrize("seed", range(6))
    def test_frame_invariance(self, seed):
        gen = np.random.default_rng(seed)
        dirs = [UnitVector(*gen.normal(size=3)) for _ in range(3)]
        rot = rotation_matrix(gen.normal(size=3), gen.uniform(0.0, 2 * math.pi))
        turned = [UnitVector(*(rot @ d.as_array())) for d in dirs]
        base = quantum_bell(BellScenario(*dirs))
        moved = quantum_bell(BellScenario(*turned))
        assert moved.p_ab == pytest.approx(base.p_ab, abs=1e-10)
        assert moved.p_ac == pytest.approx(base.p_ac, abs=1e-10)
        assert moved.p_cb == pytest.approx(base.p_cb, abs=1e-10)

    def test_coplanar_rejects_out_of_range(self):
        for theta in (0.0, 180.0, -5.0, 200.0):
            with pytest.raises(ValueError, match="between 0 and 180"):
                BellScenario.coplanar(theta)


class TestBellProbabilities:
    def test_margin_definition(self):
        probs = BellProbabilities(p_ab=0.3, p_ac=0.2, p_cb=0.25)
        assert probs.margin == pytest.approx(0.15)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            BellProbabilities(p_ab=1.2, p_ac=0.0, p_cb=0.0)


# ---------------------------------------------------------------------------
# classical side
# ---------------------------------------------------------------------------


class TestClassicalBell:
    def test_uniform_model(self):
        probs = classical_bell(HiddenVariableModel.uniform())
        assert probs.p_ab == 0.25
        assert probs.p_ac == 0.25
        assert probs.p_cb == 0.25
        assert probs.margin == 0.25
        assert check_inequality(probs) == HOLDS

    def test_point_mass_boundary(self):
        probs = classical_bell(HiddenVariableModel.point_mass("+-+"))
        assert (probs.p_ab, probs.p_ac, probs.p_cb) == (1.0, 0.0, 1.0)
        assert probs.margin == 0.0
        assert check_inequality(probs) == HOLDS

    def test_all_corner_models_by_enumeration(self):
        # oracle: direct enumeration of each deterministic assignment
        for label in ASSIGNMENT_LABELS:
            probs = classical_bell(HiddenVariableModel.point_mass(label))
            expected_ab = 1.0 if label[0] == "+" and label[1] == "-" else 0.0
            expected_ac = 1.0 if label[0] == "+" and label[2] == "-" else 0.0
            expected_cb = 1.0 if label[2] == "+" and label[1] == "-" else 0.0
            assert (probs.p_ab, probs.p_ac, probs.p_cb) == (
                expected_ab,
                expected_ac,
                expected_cb,
            )
            assert probs.margin >= 0.0

    def test_event_inclusion_oracle(self):
        # {a+, b-} is contained in {a+, c-} union {c+, b-}: per-assignment
        # indicators obey I_ab <= I_ac + I_cb, hence the inequality
        for label in ASSIGNMENT_LABELS:
            i_ab = label[0] == "+" and label[1] == "-"
            i_ac = label[0] == "+" and label[2] == "-"
            i_cb = label[2] == "+" and label[1] == "-"
            assert int(i_ab) <= int(i_ac) + int(i_cb)

    def test_ten_thousand_random_models_hold(self):
        for model in random_models(10_000, seed=2024):
            assert classical_bell(model).margin >= -1e-12

    @given(
        raw=st.lists(
            st.floats(min_value=0.0, max_value=1.0), min_size=8, max_size=8
        ).filter(lambda ws: sum(ws) > 0.1)
    )
    def test_arbitrary_mixtures_hold(self, raw):
        total = math.fsum(raw)
        model = HiddenVariableModel(
            dict(zip(ASSIGNMENT_LABELS, (w / total for w in raw)))
        )
        assert classical_bell(model).margin >= -1e-12


class TestHiddenVariableModel:
    def test_rejects_missing_labels(self):
        with pytest.raises(ValueError, match="assignments"):
            HiddenVariableModel({"+++": 1.0})

    def test_rejects_negative_weight(self):
        weights = {label: 0.125 for label in ASSIGNMENT_LABELS}
        weights["+++"] = -0.125
        weights["---"] = 0.375
        with pytest.raises(ValueError, match="invalid weight"):
            HiddenVariableModel(weights)

    def test_rejects_bad_total(self):
        with pytest.raises(ValueError, match="sum to 1"):
            HiddenVariableModel({label: 0.2 for label in ASSIGNMENT_LABELS})


# ---------------------------------------------------------------------------
# verdicts and scans
# ---------------------------------------------------------------------------


class TestCheckInequality:
    def test_positive_margin_holds(self):
        assert check_inequality(BellProbabilities(0.0, 0.125, 0.125)) == HOLDS

    def test_negative_margin_violated(self):
        assert check_inequality(BellProbabilities(0.25, 0.0732233, 0.0732233)) == VIOLATED

    def test_zero_margin_boundary_holds(self):
        assert check_inequality(BellProbabilities(0.25, 0.125, 0.125)) == HOLDS


class TestViolationScan:
    def test_reference_rows(self):
        rows = violation_scan([45.0, 90.0, 120.0])
        assert [row.theta_deg for row in rows] == [45.0, 90.0, 120.0]

        assert rows[0].margin == pytest.approx(-0.1035533905932737, abs=1e-10)
        assert rows[0].verdict == VIOLATED

        assert rows[1].p_ab == pytest.approx(0.5, abs=1e-10)
        assert rows[1].p_ac + rows[1].p_cb == pytest.approx(0.5, abs=1e-10)
        assert rows[1].margin == pytest.approx(0.0, abs=1e-10)
        assert rows[1].verdict == HOLDS

        assert rows[2].p_ab == pytest.approx(0.375, abs=1e-10)
        assert rows[2].p_ac + rows[2].p_cb == pytest.approx(0.75, abs=1e-10)
        assert rows[2].margin == pytest.approx(0.375, abs=1e-10)
        assert rows[2].verdict == HOLDS

    def test_violation_exists_below_90(self):
        rows = violation_scan(list(range(5, 90, 5)))
        assert all(row.verdict == VIOLATED for row in rows)
        assert min(row.margin for row in rows) < -0.1

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            violation_scan([90.0, 180.0])


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


class TestMonteCarloBell:
    def test_estimates_within_four_standard_errors(self):
        scenario = BellScenario.coplanar(45.0)
        estimate = monte_carlo_bell(scenario, 10**6, seed=0)
        exact = quantum_bell(scenario)
        for est, true in [
            (estimate.probabilities.p_ab, exact.p_ab),
            (estimate.probabilities.p_ac, exact.p_ac),
            (estimate.probabilities.p_cb, exact.p_cb),
        ]:
            se = math.sqrt(true * (1.0 - true) / 10**6)
            assert abs(est - true) <= 4 * se

    def test_mc_margin_detects_violation(self):
        estimate = monte_carlo_bell(BellScenario.coplanar(45.0), 10**6, seed=0)
        margin_se = math.sqrt(
            estimate.se_ab**2 + estimate.se_ac**2 + estimate.se_cb**2
        )
        assert estimate.margin < -4 * margin_se
        assert check_inequality(estimate.probabilities) == VIOLATED

    def test_zero_probability_pair_never_drawn(self):
        z = UnitVector(0, 0, 1)
        scenario = BellScenario(a=z, b=z, c=UnitVector.from_angles(45.0, 0.0))
        estimate = monte_carlo_bell(scenario, 10**5, seed=3)
        assert estimate.probabilities.p_ab == 0.0

    def test_same_seed_identical(self):
        scenario = BellScenario.coplanar(30.0)
        first = monte_carlo_bell(scenario, 50_000, seed=11)
        second = monte_carlo_bell(scenario, 50_000, seed=11)
        assert first == second

    def test_different_seeds_differ(self):
        scenario = BellScenario.coplanar(30.0)
        assert monte_carlo_bell(scenario, 50_000, seed=1) != monte_carlo_bell(
            scenario, 50_000, seed=2
        )


def test_quantum_triple_outside_classical_reach():
    """No hidden-variable mixture approaches the quantum margin at 45 degrees.

    Oracle: the margin is linear in the weights with per-assignment
    coefficients I_ac + I_cb - I_ab, each >= 0 by event inclusion, so the
    minimum over 1e5 random mixtures stays nonnegative while the quantum
    value is about -0.104.
    """
    coeffs = np.array(
        [
            (label[0] == "+" and label[2] == "-")
            + (label[2] == "+" and label[1] == "-")
            - (label[0] == "+" and label[1] == "-")
            for label in ASSIGNMENT_LABELS
        ],
        dtype=float,
    )
    gen = np.random.default_rng(4242)
    weights = gen.dirichlet(np.ones(8), size=100_000)
    margins = weights @ coeffs
    assert margins.min() >= -1e-12
    assert quantum_bell(BellScenario.coplanar(45.0)).margin < -0.1
