"""Exact small-dimension complex linear algebra for spin-1/2 systems.

States, observables, tensor products, eigendecompositions, and the
projective (Born-rule) probability of registering an outcome.  Everything
here is a plain value: arrays are copied in and frozen, and every function
is pure, so all objects are safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

NORM_TOL = 1e-12
PROJECTOR_TOL = 1e-10
EIGENVALUE_MERGE_TOL = 1e-9

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def _frozen_array(values, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized complex amplitude vector over a fixed outcome basis.

    For two spin-1/2 particles the basis order is (++, +-, -+, --) with the
    first factor belonging to particle one.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size == 0:
            raise ValueError("state vector must have at least one amplitude")
        if not np.all(np.isfinite(amps.view(float))):
            raise ValueError("state vector amplitudes must be finite")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"state vector is not normalized: |psi|^2 = {norm_sq!r}")
        object.__setattr__(self, "amplitudes", _frozen_array(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian matrix on the system Hilbert space."""

    entries: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"observable must be a square matrix, got shape {mat.shape}")
        if not np.all(np.isfinite(mat.view(float))):
            raise ValueError("observable entries must be finite")
        if np.max(np.abs(mat - mat.conj().T)) > NORM_TOL:
            raise ValueError("observable must be Hermitian")
        object.__setattr__(self, "entries", _frozen_array(mat))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class UnitVector:
    """Direction in 3-space; rescaled to unit length at construction."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        comps = (float(self.x), float(self.y), float(self.z))
        if not all(math.isfinite(c) for c in comps):
            raise ValueError("direction components must be finite")
        norm = math.sqrt(sum(c * c for c in comps))
        if norm < 1e-12:
            raise ValueError("cannot normalize a zero direction")
        object.__setattr__(self, "x", comps[0] / norm)
        object.__setattr__(self, "y", comps[1] / norm)
        object.__setattr__(self, "z", comps[2] / norm)

    @classmethod
    def from_angles(cls, theta_deg: float, phi_deg: float) -> UnitVector:
        """Direction from polar angle theta and azimuth phi, in degrees."""
        theta = math.radians(theta_deg)
        phi = math.radians(phi_deg)
        return cls(math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Distinct eigenvalues with one orthogonal eigenspace projector each."""

    eigenvalues: tuple[float, ...]
    projectors: tuple[np.ndarray, ...] = field(repr=False)


def spin_operator(direction) -> Observable:
    """Spin component along ``direction`` as a 2x2 observable.

    Eigenvalues are the outcome labels +1 and -1 (the physical hbar/2 scale
    is left out; only probabilities feed the rest of the package).  Accepts
    a UnitVector or any length-3 sequence that is already unit length.
    """
    if isinstance(direction, UnitVector):
        nx, ny, nz = direction.x, direction.y, direction.z
    else:
        vec = np.asarray(direction, dtype=float).reshape(-1)
        if vec.shape != (3,):
            raise ValueError("direction must have three components")
        norm_sq = float(vec @ vec)
        if abs(norm_sq - 1.0) > 1e-9:
            raise ValueError(f"direction is not a unit vector: |n|^2 = {norm_sq!r}")
        nx, ny, nz = vec
    return Observable(nx * PAULI_X + ny * PAULI_Y + nz * PAULI_Z)


def singlet_state() -> StateVector:
    """Two-particle spin-singlet state (|+-> - |-+>)/sqrt(2)."""
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    return StateVector([0.0, inv_sqrt2, -inv_sqrt2, 0.0])


def tensor(a: Observable, b: Observable) -> Observable:
    """Kronecker product of two observables; first factor is particle one."""
    return Observable(np.kron(a.entries, b.entries))


def _phase_fixed(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column's phase so its first nonzero component is real >= 0."""
    fixed = vectors.copy()
    for k in range(fixed.shape[1]):
        col = fixed[:, k]
        nonzero = np.flatnonzero(np.abs(col) > 1e-12)
        if nonzero.size:
            pivot = col[nonzero[0]]
            fixed[:, k] = col * (abs(pivot) / pivot)
    return fixed


def eigendecompose(obs: Observable) -> EigenDecomposition:
    """Eigenvalues (descending, merged within 1e-9) and eigenspace projectors."""
    values, vectors = np.linalg.eigh(obs.entries)
    vectors = _phase_fixed(vectors)

    groups: list[list[int]] = [[0]]
    for k in range(1, values.size):
        if values[k] - values[groups[-1][0]] <= EIGENVALUE_MERGE_TOL:
            groups[-1].append(k)
        else:
            groups.append([k])

    eigenvalues = []
    projectors = []
    for group in reversed(groups):
        eigenvalues.append(float(np.mean(values[group])))
        basis = vectors[:, group]
        projectors.append(_frozen_array(basis @ basis.conj().T))
    return EigenDecomposition(tuple(eigenvalues), tuple(projectors))


def born_probability(state: StateVector, projector) -> float:
    """Probability of the outcome projected by ``projector`` in ``state``.

    Computed as <psi|P|psi>, which for a rank-1 projector onto |u> reduces
    to |<u|psi>|^2 and extends it to degenerate eigenspaces.
    """
    proj = np.asarray(projector, dtype=complex)
    if proj.shape != (state.dim, state.dim):
        raise ValueError(
            f"projector shape {proj.shape} does not match state dimension {state.dim}"
        )
    if np.max(np.abs(proj @ proj - proj)) > PROJECTOR_TOL:
        raise ValueError("projector is not idempotent")
    psi = state.amplitudes
    value = float(np.real(np.vdot(psi, proj @ psi)))
    return min(max(value, 0.0), 1.0)


def projector_for_sign(direction: UnitVector, sign: int) -> np.ndarray:
    """Eigenspace projector of the spin observable along ``direction``.

    ``sign`` selects the +1 or -1 eigenvalue.
    """
    decomp = eigendecompose(spin_operator(direction))
    for value, proj in zip(decomp.eigenvalues, decomp.projectors):
        if abs(value - sign) < 0.5:
            return proj
    raise ValueError(f"no eigenvalue matching sign {sign}")


def joint_outcome_distribution(
    state: StateVector, dir1: UnitVector, dir2: UnitVector
) -> dict[tuple[str, str], float]:
    """Joint law of a simultaneous two-particle spin measurement.

    Particle one is measured along ``dir1`` and particle two along ``dir2``
    in a single evolution; the four outcome pairs are keyed as
    ``("+", "+")`` through ``("-", "-")`` and their probabilities sum to 1.
    """
    if state.dim != 4:
        raise ValueError(f"joint distribution needs a 4-dimensional state, got dim {state.dim}")
    proj1 = {s: projector_for_sign(dir1, +1 if s == "+" else -1) for s in ("+", "-")}
    proj2 = {s: projector_for_sign(dir2, +1 if s == "+" else -1) for s in ("+", "-")}
    return {
        (s1, s2): born_probability(state, np.kron(proj1[s1], proj2[s2]))
        for s1 in ("+", "-")
        for s2 in ("+", "-")
    }


def is_product_state(state: StateVector) -> tuple[bool, int]:
    """Whether a bipartite 2x2 state factorizes, plus its Schmidt rank.

    The state is reshaped to a 2x2 amplitude matrix; the Schmidt rank is the
    number of singular values above 1e-10, and the state is a product state
    exactly when that rank is 1.
    """
    if state.dim != 4:
        raise ValueError(f"product-state check needs a 4-dimensional state, got dim {state.dim}")
    singular = np.linalg.svd(state.amplitudes.reshape(2, 2), compute_uv=False)
    rank = int(np.sum(singular > 1e-10))
    return rank == 1, rank
