"""The three-direction correlation inequality and its two sides.

``P(a+, b+) <= P(a+, c+) + P(c+, b+)`` holds for every probability law over
simultaneous definite spin values along a, b, c (the hidden-variable side),
because an assignment with a+ and b- has either c- (first term) or c+
(second term).  The quantum side evaluates the same three probabilities on
the spin-singlet state, where coplanar direction triples with a small
bisecting angle violate the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from collections.abc import Iterable, Mapping

from . import rng
from .spin import UnitVector, joint_outcome_distribution, singlet_state
from .tree import (
    LAW_TOL,
    pair_measurement_class,
    sample_factual_chain,
    singlet_preparation,
)

HOLDS = "holds"
VIOLATED = "violated"
INEQUALITY_TOL = 1e-12

# particle-1 values along (a, b, c); particle 2 carries the opposite signs
ASSIGNMENT_LABELS = ("+++", "++-", "+-+", "+--", "-++", "-+-", "--+", "---")


@dataclass(frozen=True)
class BellScenario:
    """Measurement directions a, b, c (unit vectors, not necessarily orthogonal)."""

    a: UnitVector
    b: UnitVector
    c: UnitVector

    @classmethod
    def coplanar(cls, theta_deg: float) -> BellScenario:
        """Coplanar family with c bisecting a and b.

        theta is both the angle from a to c and from c to b, so the angle
        from a to b is 2*theta.  Directions lie in the x-z plane.
        """
        if not 0.0 < theta_deg < 180.0:
            raise ValueError(f"theta must lie strictly between 0 and 180 degrees, got {theta_deg!r}")
        return cls(
            a=UnitVector.from_angles(0.0, 0.0),
            c=UnitVector.from_angles(theta_deg, 0.0),
            b=UnitVector.from_angles(2.0 * theta_deg, 0.0),
        )


@dataclass(frozen=True)
class BellProbabilities:
    """The inequality's three joint probabilities and its margin.

    ``p_xy`` is the probability that particle one registers + along x and
    particle two registers + along y.  The margin p_ac + p_cb - p_ab is
    nonnegative exactly when the inequality holds.
    """

    p_ab: float
    p_ac: float
    p_cb: float

    def __post_init__(self):
        for name in ("p_ab", "p_ac", "p_cb"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be a probability, got {p!r}")

    @property
    def margin(self) -> float:
        return self.p_ac + self.p_cb - self.p_ab


@dataclass(frozen=True)
class HiddenVariableModel:
    """Probability law over definite particle-1 values along a, b, c.

    Keys are sign triples like ``"+-+"`` (values along a, b, c in that
    order); particle 2 is perfectly anticorrelated, carrying the opposite
    sign along each direction.
    """

    weights: Mapping[str, float]

    def __post_init__(self):
        weights = {str(k): float(v) for k, v in self.weights.items()}
        if set(weights) != set(ASSIGNMENT_LABELS):
            raise ValueError(f"weights must cover exactly the assignments {ASSIGNMENT_LABELS}")
        for label, w in weights.items():
            if not math.isfinite(w) or w < 0.0:
                raise ValueError(f"invalid weight {w!r} for assignment {label!r}")
        total = math.fsum(weights.values())
        if abs(total - 1.0) > LAW_TOL:
            raise ValueError(f"weights must sum to 1, got {total!r}")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls) -> HiddenVariableModel:
        return cls({label: 0.125 for label in ASSIGNMENT_LABELS})

    @classmethod
    def point_mass(cls, assignment: str) -> HiddenVariableModel:
        return cls({label: 1.0 if label == assignment else 0.0 for label in ASSIGNMENT_LABELS})


def quantum_bell(scenario: BellScenario) -> BellProbabilities:
    """The inequality's three probabilities for the spin-singlet state."""
    state = singlet_state()
    return BellProbabilities(
        p_ab=joint_outcome_distribution(state, scenario.a, scenario.b)[("+", "+")],
        p_ac=joint_outcome_distribution(state, scenario.a, scenario.c)[("+", "+")],
        p_cb=joint_outcome_distribution(state, scenario.c, scenario.b)[("+", "+")],
    )


def classical_bell(model: HiddenVariableModel) -> BellProbabilities:
    """The three probabilities under a hidden-variable law.

    Particle two registers + along y exactly when particle one's value
    along y is -, so P(x+, y+) sums the weights with v_x = + and v_y = -.
    """
    def total(x: int, y: int) -> float:
        return math.fsum(
            w for s, w in model.weights.items() if s[x] == "+" and s[y] == "-"
        )

    return BellProbabilities(p_ab=total(0, 1), p_ac=total(0, 2), p_cb=total(2, 1))


def check_inequality(probs: BellProbabilities) -> str:
    """Verdict on the inequality: HOLDS or VIOLATED (margin below -1e-12)."""
    return HOLDS if probs.margin >= -INEQUALITY_TOL else VIOLATED


@dataclass(frozen=True)
class ScanRow:
    theta_deg: float
    p_ab: float
    p_ac: float
    p_cb: float
    margin: float
    verdict: str


def violation_scan(thetas_deg: Iterable[float]) -> list[ScanRow]:
    """Evaluate the coplanar bisecting family on a grid of angles.

    Each grid angle must lie strictly between 0 and 180 degrees.  Rows are
    emitted in grid order.
    """
    rows = []
    for theta in thetas_deg:
        probs = quantum_bell(BellScenario.coplanar(theta))
        rows.append(
            ScanRow(
                theta_deg=float(theta),
                p_ab=probs.p_ab,
                p_ac=probs.p_ac,
                p_cb=probs.p_cb,
                margin=probs.margin,
                verdict=check_inequality(probs),
            )
        )
    return rows


@dataclass(frozen=True)
class BellEstimate:
    """Monte Carlo estimate of the three probabilities with standard errors."""

    probabilities: BellProbabilities
    se_ab: float
    se_ac: float
    se_cb: float
    n: int
    seed: int

    @property
    def margin(self) -> float:
        return self.probabilities.margin


def monte_carlo_bell(scenario: BellScenario, n: int, seed: int) -> BellEstimate:
    """Estimate the three probabilities by sampling factual chains.

    Each direction pair gets its own joint measurement class and its own
    deterministic substream of the seed; the estimate for P(x+, y+) is the
    frequency of the (+,+) needle position, with binomial standard error
    sqrt(p(1-p)/n).  Identical (seed, n) reproduce identical estimates.
    """
    prep = singlet_preparation()
    pairs = (
        ("ab", scenario.a, scenario.b),
        ("ac", scenario.a, scenario.c),
        ("cb", scenario.c, scenario.b),
    )
    freq = {}
    stderr = {}
    for stream, (name, d1, d2) in enumerate(pairs):
        measurement = pair_measurement_class(f"M12_{name}", d1, d2)
        chain = sample_factual_chain(prep, measurement, n, rng.derive_seed(seed, stream))
        p = chain.empirical_law["(+,+)"]
        freq[name] = p
        stderr[name] = math.sqrt(p * (1.0 - p) / n)
    return BellEstimate(
        probabilities=BellProbabilities(p_ab=freq["ab"], p_ac=freq["ac"], p_cb=freq["cb"]),
        se_ab=stderr["ab"],
        se_ac=stderr["ac"],
        se_cb=stderr["cb"],
        n=n,
        seed=seed,
    )


def random_models(count: int, seed: int) -> list[HiddenVariableModel]:
    """Seeded random hidden-variable laws (normalized exponential weights)."""
    laws = []
    for i in range(count):
        u = rng.uniforms(rng.derive_seed(seed, i), 0, len(ASSIGNMENT_LABELS))
        raw = [-math.log(1.0 - x) for x in u]
        total = math.fsum(raw)
        laws.append(
            HiddenVariableModel(dict(zip(ASSIGNMENT_LABELS, (w / total for w in raw))))
        )
    return laws
