"""Acceptance gate: one test per release criterion, each at its stated tolerance.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
pass/fail lines.
"""

import math
from contextlib import contextmanager

import numpy as np
import pytest

from qptree.bell import (
    ASSIGNMENT_LABELS,
    BellScenario,
    HiddenVariableModel,
    classical_bell,
    monte_carlo_bell,
    quantum_bell,
    random_models,
)
from qptree.channel import ChannelMatrix, InformationSource, attach, compose, quantum_channel
from qptree.cli import main
from qptree.errors import DimensionMismatchError
from qptree.spin import (
    Observable,
    UnitVector,
    joint_outcome_distribution,
    singlet_state,
)
from qptree.tree import (
    MeasurementClass,
    ProbabilityLaw,
    build_tree,
    compatible,
    formal_chain,
    pair_measurement_class,
    sample_factual_chain,
    singlet_preparation,
)

Z = UnitVector(0, 0, 1)


@contextmanager
def criterion(number: int, summary: str):
    try:
        yield
    except Exception:
        print(f"[criterion {number}] FAIL: {summary}")
        raise
    print(f"[criterion {number}] PASS: {summary}")


def test_criterion_1_singlet_anticorrelation():
    with criterion(1, "singlet z/z law is (0, 0.5, 0.5, 0) within 1e-12"):
        dist = joint_outcome_distribution(singlet_state(), Z, Z)
        expected = {("+", "+"): 0.0, ("+", "-"): 0.5, ("-", "+"): 0.5, ("-", "-"): 0.0}
        for key, value in expected.items():
            assert abs(dist[key] - value) <= 1e-12


def test_criterion_2_closed_form_agreement():
    with criterion(2, "(+,+) probability equals (1/2)sin^2(theta/2) on a 181-point grid"):
        for theta in range(0, 181):
            tilted = UnitVector.from_angles(float(theta), 0.0)
            got = joint_outcome_distribution(singlet_state(), Z, tilted)[("+", "+")]
            want = 0.5 * math.sin(math.radians(theta) / 2.0) ** 2
            assert abs(got - want) <= 1e-10, f"theta={theta}"


def test_criterion_3_classical_soundness():
    with criterion(3, "10^4 random hidden-variable laws keep margin >= -1e-12"):
        for model in random_models(10_000, seed=20240):
            assert classical_bell(model).margin >= -1e-12

        uniform = classical_bell(HiddenVariableModel.uniform())
        assert (uniform.p_ab, uniform.p_ac, uniform.p_cb) == (0.25, 0.25, 0.25)
        assert uniform.margin == 0.25

        point = classical_bell(HiddenVariableModel.point_mass("+-+"))
        assert (point.p_ab, point.p_ac, point.p_cb) == (1.0, 0.0, 1.0)
        assert point.margin == 0.0

        # every deterministic corner matches direct enumeration exactly
        for label in ASSIGNMENT_LABELS:
            probs = classical_bell(HiddenVariableModel.point_mass(label))
            assert probs.p_ab == float(label[0] == "+" and label[1] == "-")
            assert probs.p_ac == float(label[0] == "+" and label[2] == "-")
            assert probs.p_cb == float(label[2] == "+" and label[1] == "-")


def test_criterion_4_quantum_violation():
    with criterion(4, "theta=45 violates (margin -0.103553 within 1e-6); theta=90 is boundary"):
        at45 = quantum_bell(BellScenario.coplanar(45.0))
        assert abs(at45.p_ab - 0.25) <= 1e-6
        assert abs((at45.p_ac + at45.p_cb) - math.sin(math.radians(22.5)) ** 2) <= 1e-6
        assert abs(at45.margin - (-0.103553)) <= 1e-6

        at90 = quantum_bell(BellScenario.coplanar(90.0))
        assert abs(at90.margin) <= 1e-10


def test_criterion_5_total_probability_and_composition():
    with criterion(5, "worked channel gives (0.55, 0.45); attach/compose consistent on 10^3 trials"):
        source = InformationSource(
            "pairs", ("a+", "a-"), ProbabilityLaw({"a+": 0.5, "a-": 0.5})
        )
        channel = ChannelMatrix(("a+", "a-"), ("b+", "b-"), [[0.9, 0.1], [0.2, 0.8]])
        out = attach(source, channel)
        assert abs(out["b+"] - 0.55) <= 1e-12
        assert abs(out["b-"] - 0.45) <= 1e-12

        gen = np.random.default_rng(777)
        alpha = ("x0", "x1", "x2")
        beta = ("y0", "y1")
        gamma = ("z0", "z1", "z2")
        for _ in range(1000):
            src = InformationSource(
                "s", alpha, ProbabilityLaw(dict(zip(alpha, gen.dirichlet(np.ones(3)))))
            )
            c1 = ChannelMatrix(alpha, beta, gen.dirichlet(np.ones(2), size=3))
            c2 = ChannelMatrix(beta, gamma, gen.dirichlet(np.ones(3), size=2))
            direct = attach(src, compose(c1, c2))
            relay = InformationSource("relay", beta, attach(src, c1))
            staged = attach(relay, c2)
            for symbol in gamma:
                assert abs(direct[symbol] - staged[symbol]) <= 1e-12


def test_criterion_6_frequency_convergence():
    with criterion(6, "n=10^6 estimates all within 4 binomial standard errors"):
        scenario = BellScenario.coplanar(45.0)
        exact = quantum_bell(scenario)
        estimate = monte_carlo_bell(scenario, 10**6, seed=0)
        for est, true in [
            (estimate.probabilities.p_ab, exact.p_ab),
            (estimate.probabilities.p_ac, exact.p_ac),
            (estimate.probabilities.p_cb, exact.p_cb),
        ]:
            se = math.sqrt(true * (1.0 - true) / 10**6)
            assert abs(est - true) <= 4 * se

        measurement = pair_measurement_class("M12_z", Z)
        chain = sample_factual_chain(singlet_preparation(), measurement, 10**6, seed=0)
        law = formal_chain(singlet_state(), measurement).law
        for label in law:
            spread = max(law[label] * (1.0 - law[label]), 0.0)
            bound = 4 * math.sqrt(spread / 10**6) if spread else 0.0
            assert abs(chain.empirical_law[label] - law[label]) <= bound


def test_criterion_7_joint_source_rule(capsys):
    with criterion(7, "dim-2 class against the dim-4 source fails on the dedicated path"):
        single = MeasurementClass.from_observables(
            "M1_z", [Observable(np.diag([1.0, -1.0]).astype(complex))]
        )
        with pytest.raises(DimensionMismatchError):
            quantum_channel(singlet_preparation(), single)
        with pytest.raises(DimensionMismatchError):
            build_tree(singlet_preparation(), [single])

        code = main(["tree", "--dir", "0,0", "--single-particle"])
        capsys.readouterr()
        assert code == 3


def test_criterion_8_tree_structure():
    with criterion(8, "three distinct directions give 3 incompatible branches; compatible merge to 1"):
        classes = [
            pair_measurement_class("M12_a", Z),
            pair_measurement_class("M12_b", UnitVector.from_angles(90.0, 0.0)),
            pair_measurement_class("M12_c", UnitVector.from_angles(45.0, 0.0)),
        ]
        tree = build_tree(singlet_preparation(), classes)
        assert len(tree.branches) == 3
        for i, b1 in enumerate(tree.branches):
            assert abs(math.fsum(b1.law.values()) - 1.0) <= 1e-12
            for b2 in tree.branches[i + 1 :]:
                assert compatible(b1.measurement, b2.measurement) is False

        eye = Observable(np.eye(2, dtype=complex))
        sz = Observable(np.diag([1.0, -1.0]).astype(complex))
        from qptree.spin import tensor

        first = MeasurementClass.from_observables("Z1", [tensor(sz, eye)])
        second = MeasurementClass.from_observables("Z2", [tensor(eye, sz)])
        merged = build_tree(singlet_preparation(), [first, second])
        assert len(merged.branches) == 1
        assert abs(math.fsum(merged.branches[0].law.values()) - 1.0) <= 1e-12


def test_criterion_9_cli_reproducibility(capsys):
    with criterion(9, "repeated CLI runs with one config and seed are byte-identical"):
        commands = [
            ["tree", "--dir", "0,0", "--dir", "90,0", "--dir", "45,0"],
            ["bell", "--dir", "0,0", "--dir", "90,0", "--dir", "45,0"],
            ["scan", "--grid", "5:175:5"],
            ["sample", "--dir", "0,0", "--dir", "90,0", "--dir", "45,0", "--seed", "0"],
        ]
        for argv in commands:
            assert main(argv) == 0
            first = capsys.readouterr().out
            assert main(argv) == 0
            second = capsys.readouterr().out
            assert first.encode("utf-8") == second.encode("utf-8"), argv
