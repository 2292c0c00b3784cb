"""Probability trees over one preparation and incompatible measurements.

A preparation fixes the state and forms the trunk.  Each branch is a class
of mutually commuting observables realized by one measurement evolution,
carrying the outcome law the state assigns to that class.  Two classes
whose observables all commute could be realized jointly, so they are merged
into a single branch; branches that remain are pairwise incompatible.

The theoretical side of a branch is a formal chain (state, class, spectrum,
outcome algebra, law); the empirical side is a factual chain built from a
seeded record of registered outcomes whose frequencies converge to the law.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .errors import DimensionMismatchError
from .spin import (
    IDENTITY_2,
    Observable,
    StateVector,
    UnitVector,
    born_probability,
    eigendecompose,
    singlet_state,
    spin_operator,
    tensor,
)

COMMUTE_TOL = 1e-10
LAW_TOL = 1e-12


def commutator_norm(a: Observable, b: Observable) -> float:
    """Frobenius norm of [A, B]; zero exactly when the pair commutes."""
    return float(np.linalg.norm(a.entries @ b.entries - b.entries @ a.entries))


@dataclass(frozen=True)
class SpaceTimeDomain:
    """Extent (delta_x, delta_t) of an operation; carried as inert metadata."""

    delta_x: float = 1.0
    delta_t: float = 1.0

    def __post_init__(self):
        if not (self.delta_x > 0 and self.delta_t > 0):
            raise ValueError("domain extents must be strictly positive")


@dataclass(frozen=True)
class NeedlePosition:
    """A registered macroscopic outcome: a label plus its eigenvalue tuple."""

    label: str
    eigenvalue_tuple: tuple[float, ...]


class ProbabilityLaw(Mapping):
    """Immutable probability assignment over outcome labels; total is 1."""

    def __init__(self, probs: Mapping[str, float]):
        items = {str(k): float(v) for k, v in probs.items()}
        if not items:
            raise ValueError("a probability law needs at least one outcome")
        for label, p in items.items():
            if not math.isfinite(p) or p < 0.0:
                raise ValueError(f"invalid probability {p!r} for outcome {label!r}")
        total = math.fsum(items.values())
        if abs(total - 1.0) > LAW_TOL:
            raise ValueError(f"law entries must sum to 1, got {total!r}")
        self._probs = items

    def __getitem__(self, label: str) -> float:
        return self._probs[label]

    def __iter__(self):
        return iter(self._probs)

    def __len__(self) -> int:
        return len(self._probs)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {v:.6g}" for k, v in self._probs.items())
        return f"ProbabilityLaw({{{inner}}})"


@dataclass(frozen=True)
class OutcomeAlgebra:
    """Atoms of an outcome space; events are arbitrary subsets of the atoms."""

    atoms: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("outcome atoms must be distinct")


def event_probability(law: ProbabilityLaw, event: Iterable[str]) -> float:
    """Total probability of an event given as a set of outcome labels."""
    labels = set(event)
    unknown = labels.difference(law)
    if unknown:
        raise KeyError(f"unknown outcome labels: {sorted(unknown)}")
    return math.fsum(law[label] for label in law if label in labels)


def _eigen_label(values: tuple[float, ...]) -> str:
    def fmt(w: float) -> str:
        if abs(w - 1.0) < 1e-9:
            return "+"
        if abs(w + 1.0) < 1e-9:
            return "-"
        return f"{w:g}"

    return "(" + ",".join(fmt(w) for w in values) + ")"


@dataclass(frozen=True, eq=False)
class MeasurementClass:
    """A set of mutually commuting observables measured in one evolution.

    ``outcomes`` enumerates the joint eigenvalue spectrum, one needle
    position per combination with a nonzero joint eigenprojector, and
    ``projectors`` holds those projectors in the same order.
    """

    label: str
    observables: tuple[Observable, ...]
    outcomes: tuple[NeedlePosition, ...]
    projectors: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        if not self.observables:
            raise ValueError("a measurement class needs at least one observable")
        dims = {obs.dim for obs in self.observables}
        if len(dims) != 1:
            raise ValueError("all observables in a class must share one dimension")
        for a, b in itertools.combinations(self.observables, 2):
            norm = commutator_norm(a, b)
            if norm > COMMUTE_TOL:
                raise ValueError(
                    f"observables within class {self.label!r} must commute "
                    f"(commutator norm {norm:.3g})"
                )
        labels = [o.label for o in self.outcomes]
        if len(set(labels)) != len(labels):
            raise ValueError("outcome labels must be unique within a class")
        if len(self.outcomes) != len(self.projectors):
            raise ValueError("outcomes and projectors must align")
        total = sum(self.projectors)
        if np.max(np.abs(total - np.eye(self.dim))) > COMMUTE_TOL:
            raise ValueError("joint projectors must resolve the identity")

    @property
    def dim(self) -> int:
        return self.observables[0].dim

    @classmethod
    def from_observables(cls, label: str, observables: Iterable[Observable]) -> MeasurementClass:
        """Build a class from commuting observables, enumerating joint outcomes."""
        obs = tuple(observables)
        if not obs:
            raise ValueError("a measurement class needs at least one observable")
        decomps = [eigendecompose(o) for o in obs]
        outcomes: list[NeedlePosition] = []
        projectors: list[np.ndarray] = []
        for combo in itertools.product(*(range(len(d.eigenvalues)) for d in decomps)):
            joint = decomps[0].projectors[combo[0]]
            for d, k in zip(decomps[1:], combo[1:]):
                joint = joint @ d.projectors[k]
            # rank of the joint projector; zero rank means the combination
            # never occurs and is dropped from the spectrum
            if float(np.real(np.trace(joint))) < 0.5:
                continue
            joint = (joint + joint.conj().T) / 2.0
            joint.setflags(write=False)
            values = tuple(d.eigenvalues[k] for d, k in zip(decomps, combo))
            outcomes.append(NeedlePosition(_eigen_label(values), values))
            projectors.append(joint)
        return cls(label, obs, tuple(outcomes), tuple(projectors))


def pair_measurement_class(
    label: str, direction: UnitVector, second_direction: UnitVector | None = None
) -> MeasurementClass:
    """Joint spin measurement of both particles in one evolution.

    Particle one is measured along ``direction`` and particle two along
    ``second_direction`` (same direction when omitted).  The class holds
    the commuting pair (spin of particle one) x identity and identity x
    (spin of particle two) on the 4-dimensional joint space, so a single
    registration yields both eigenvalues.
    """
    identity = Observable(IDENTITY_2)
    first = spin_operator(direction)
    second = spin_operator(second_direction if second_direction is not None else direction)
    return MeasurementClass.from_observables(
        label, [tensor(first, identity), tensor(identity, second)]
    )


def compatible(mx: MeasurementClass, my: MeasurementClass) -> bool:
    """Whether one measurement evolution could register both classes.

    True exactly when every observable of one class commutes with every
    observable of the other, so a single joint refinement exists.
    """
    if mx.dim != my.dim:
        raise DimensionMismatchError(
            f"classes {mx.label!r} (dim {mx.dim}) and {my.label!r} (dim {my.dim}) "
            "act on different spaces"
        )
    return all(
        commutator_norm(a, b) <= COMMUTE_TOL for a in mx.observables for b in my.observables
    )


@dataclass(frozen=True)
class PreparationOp:
    """State preparation: the trunk operation fixing the system's state."""

    label: str
    prepared_state: StateVector
    system_dim: int
    domain: SpaceTimeDomain = field(default_factory=SpaceTimeDomain)

    def __post_init__(self):
        if self.prepared_state.dim != self.system_dim:
            raise ValueError(
                f"prepared state dimension {self.prepared_state.dim} does not match "
                f"declared system dimension {self.system_dim}"
            )


def singlet_preparation(label: str = "singlet") -> PreparationOp:
    """Preparation of the two-particle spin-singlet state."""
    return PreparationOp(label, singlet_state(), 4)


@dataclass(frozen=True, eq=False)
class FormalChain:
    """Theoretical chain: state and class determine spectrum, algebra, law."""

    state: StateVector
    observable_class: MeasurementClass
    eigenvalues: tuple[tuple[float, ...], ...]
    algebra: OutcomeAlgebra
    law: ProbabilityLaw


def formal_chain(state: StateVector, measurement: MeasurementClass) -> FormalChain:
    """Outcome law a state assigns to a measurement class."""
    if state.dim != measurement.dim:
        raise DimensionMismatchError(
            f"class {measurement.label!r} acts on dimension {measurement.dim}, "
            f"state has dimension {state.dim}"
        )
    law = ProbabilityLaw(
        {
            outcome.label: born_probability(state, projector)
            for outcome, projector in zip(measurement.outcomes, measurement.projectors)
        }
    )
    return FormalChain(
        state=state,
        observable_class=measurement,
        eigenvalues=tuple(o.eigenvalue_tuple for o in measurement.outcomes),
        algebra=OutcomeAlgebra(tuple(o.label for o in measurement.outcomes)),
        law=law,
    )


@dataclass(frozen=True, eq=False)
class FactualChain:
    """Empirical chain: a registered outcome record and its frequency law."""

    prep: PreparationOp
    measurement: MeasurementClass
    registered: tuple[NeedlePosition, ...]
    empirical_law: ProbabilityLaw


@dataclass(frozen=True, eq=False)
class TreeBranch:
    measurement: MeasurementClass
    law: ProbabilityLaw
    domain: SpaceTimeDomain


@dataclass(frozen=True, eq=False)
class ProbabilityTree:
    """Trunk preparation plus one branch per incompatible measurement class."""

    trunk: PreparationOp
    branches: tuple[TreeBranch, ...]


def _check_acts_on_system(prep: PreparationOp, measurement: MeasurementClass) -> None:
    if measurement.dim != prep.system_dim:
        raise DimensionMismatchError(
            f"measurement class {measurement.label!r} acts on dimension "
            f"{measurement.dim}, but preparation {prep.label!r} emits the joint "
            f"system of dimension {prep.system_dim}; classes addressing a "
            "subsystem cannot be attached to the joint source"
        )


def _merged_class(members: list[MeasurementClass]) -> MeasurementClass:
    """Union of pairwise-compatible classes as one class.

    Members are ordered by label so the merged outcome labels do not depend
    on the order the classes were supplied in.
    """
    members = sorted(members, key=lambda m: m.label)
    label = "+".join(m.label for m in members)
    observables: list[Observable] = []
    for member in members:
        for obs in member.observables:
            if not any(np.allclose(obs.entries, seen.entries, atol=1e-12) for seen in observables):
                observables.append(obs)
    try:
        return MeasurementClass.from_observables(label, observables)
    except ValueError as exc:
        raise ValueError(
            f"classes {[m.label for m in members]} are pairwise compatible only "
            f"in part; no unambiguous merge exists ({exc})"
        ) from exc


def build_tree(prep: PreparationOp, classes: Iterable[MeasurementClass]) -> ProbabilityTree:
    """Assemble the probability tree of a preparation.

    Compatible classes are merged into a single branch (grouped by the
    transitive closure of pairwise compatibility, so the result does not
    depend on input order); the remaining branches are pairwise
    incompatible.  Branch order follows the first appearance of each
    group's members in the input.
    """
    class_list = list(classes)
    if not class_list:
        raise ValueError("a tree needs at least one measurement class")
    for measurement in class_list:
        _check_acts_on_system(prep, measurement)

    n = len(class_list)
    groups: list[list[int]] = []
    assigned = [-1] * n
    for i in range(n):
        if assigned[i] >= 0:
            continue
        component = [i]
        assigned[i] = len(groups)
        frontier = [i]
        while frontier:
            j = frontier.pop()
            for k in range(n):
                if assigned[k] < 0 and compatible(class_list[j], class_list[k]):
                    assigned[k] = len(groups)
                    component.append(k)
                    frontier.append(k)
        groups.append(sorted(component))

    branches = []
    for group in groups:
        if len(group) == 1:
            merged = class_list[group[0]]
        else:
            merged = _merged_class([class_list[i] for i in group])
        law = formal_chain(prep.prepared_state, merged).law
        branches.append(TreeBranch(merged, law, SpaceTimeDomain()))
    return ProbabilityTree(prep, tuple(branches))


def sample_factual_chain(
    prep: PreparationOp,
    measurement: MeasurementClass,
    n: int,
    seed: int,
    partitions: int = 1,
) -> FactualChain:
    """Draw a seeded record of n outcomes from the class's formal law.

    The generator is counter-based (see :mod:`qptree.rng`), so the record is
    a pure function of (seed, n): splitting the index range over any number
    of partitions reproduces the identical record.
    """
    _check_acts_on_system(prep, measurement)
    if n < 1:
        raise ValueError("sample size must be at least 1")
    if partitions < 1 or partitions > n:
        raise ValueError("partitions must be between 1 and n")

    law = formal_chain(prep.prepared_state, measurement).law
    probs = np.array([law[o.label] for o in measurement.outcomes])
    cumulative = np.cumsum(probs)
    cumulative /= cumulative[-1]

    bounds = np.linspace(0, n, partitions + 1).astype(int)
    chunks = [
        np.searchsorted(cumulative, rng.uniforms(seed, start, stop - start), side="right")
        for start, stop in zip(bounds[:-1], bounds[1:])
        if stop > start
    ]
    indices = np.concatenate(chunks)

    counts = np.bincount(indices, minlength=len(measurement.outcomes))
    empirical = ProbabilityLaw(
        {o.label: c / n for o, c in zip(measurement.outcomes, counts)}
    )
    registered = tuple(measurement.outcomes[i] for i in indices)
    return FactualChain(prep, measurement, registered, empirical)


def _round12(x: float) -> float:
    # + 0.0 folds negative zero into plain zero
    return float(f"{x:.12g}") + 0.0


def _complex_pairs(matrix: np.ndarray) -> list[list[float]]:
    """Row-major [re, im] pairs of a complex matrix."""
    flat = np.asarray(matrix, dtype=complex).reshape(-1)
    return [[_round12(z.real), _round12(z.imag)] for z in flat]


def tree_document(tree: ProbabilityTree) -> dict:
    """Plain-dict dump of a tree for serialization."""
    trunk = tree.trunk
    return {
        "trunk": {
            "label": trunk.label,
            "system_dim": trunk.system_dim,
            "state": _complex_pairs(trunk.prepared_state.amplitudes),
            "domain": {
                "delta_x": _round12(trunk.domain.delta_x),
                "delta_t": _round12(trunk.domain.delta_t),
            },
        },
        "branches": [
            {
                "class": branch.measurement.label,
                "observables": [
                    {"dim": obs.dim, "entries": _complex_pairs(obs.entries)}
                    for obs in branch.measurement.observables
                ],
                "outcomes": [o.label for o in branch.measurement.outcomes],
                "law": {label: _round12(p) for label, p in branch.law.items()},
                "domain": {
                    "delta_x": _round12(branch.domain.delta_x),
                    "delta_t": _round12(branch.domain.delta_t),
                },
            }
            for branch in tree.branches
        ],
    }
