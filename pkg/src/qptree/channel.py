"""Information sources, channel matrices, and output laws.

A zero-memory source emits symbols under a fixed law; a channel is a
row-stochastic conditional-probability table from input symbols to output
symbols.  Attaching a channel to a source gives the total-probability
output law P(b) = sum_a P(a) M(b|a).

A quantum measurement class is a channel in this sense: the preparation is
a one-symbol source (it always emits the prepared state), and the single
channel row is the class's outcome law, so the output law reduces to the
projective probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .tree import (
    LAW_TOL,
    MeasurementClass,
    PreparationOp,
    ProbabilityLaw,
    _round12,
    formal_chain,
)


@dataclass(frozen=True, eq=False)
class InformationSource:
    """Zero-memory symbol source with its emission law."""

    label: str
    alphabet: tuple[str, ...]
    law: ProbabilityLaw
    system_dim: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet symbols must be distinct")
        if set(self.alphabet) != set(self.law):
            raise ValueError("source law must cover exactly the alphabet")


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """Row-stochastic table of conditional probabilities P(out | in)."""

    input_alphabet: tuple[str, ...]
    output_alphabet: tuple[str, ...]
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "input_alphabet", tuple(self.input_alphabet))
        object.__setattr__(self, "output_alphabet", tuple(self.output_alphabet))
        mat = np.asarray(self.entries, dtype=float)
        expected = (len(self.input_alphabet), len(self.output_alphabet))
        if mat.shape != expected:
            raise ValueError(f"channel entries must have shape {expected}, got {mat.shape}")
        if np.any(mat < 0) or not np.all(np.isfinite(mat)):
            raise ValueError("channel entries must be finite and nonnegative")
        row_sums = mat.sum(axis=1)
        if np.max(np.abs(row_sums - 1.0)) > LAW_TOL:
            raise ValueError(f"channel rows must each sum to 1, got {row_sums!r}")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "entries", mat)

    @property
    def is_noiseless(self) -> bool:
        """True when every row is a point mass (diagnostic only)."""
        return bool(np.all(np.max(self.entries, axis=1) >= 1.0 - LAW_TOL))


def attach(source: InformationSource, channel: ChannelMatrix) -> ProbabilityLaw:
    """Output law of a source connected to a channel."""
    if source.alphabet != channel.input_alphabet:
        raise ValueError(
            f"source alphabet {source.alphabet!r} does not match channel input "
            f"alphabet {channel.input_alphabet!r}"
        )
    out = {}
    for j, symbol in enumerate(channel.output_alphabet):
        out[symbol] = math.fsum(
            source.law[a] * channel.entries[i, j] for i, a in enumerate(channel.input_alphabet)
        )
    return ProbabilityLaw(out)


@dataclass(frozen=True, eq=False)
class InformationSystem:
    """A source-channel pair together with its output law."""

    source: InformationSource
    channel: ChannelMatrix
    output_law: ProbabilityLaw

    def __post_init__(self):
        expected = attach(self.source, self.channel)
        drift = max(abs(self.output_law[s] - expected[s]) for s in expected)
        if drift > LAW_TOL:
            raise ValueError("output law does not match the attached source and channel")

    @classmethod
    def connect(cls, source: InformationSource, channel: ChannelMatrix) -> InformationSystem:
        return cls(source, channel, attach(source, channel))


def quantum_channel(
    prep: PreparationOp, measurement: MeasurementClass
) -> tuple[InformationSource, ChannelMatrix]:
    """Source and channel realized by measuring a prepared state.

    The source emits the prepared state's symbol with probability 1; the
    channel's single row is the outcome law of the measurement class, so
    its output alphabet is the class's outcome labels.
    """
    if measurement.dim != prep.system_dim:
        raise DimensionMismatchError(
            f"measurement class {measurement.label!r} acts on dimension "
            f"{measurement.dim}, but the source {prep.label!r} emits the joint "
            f"system of dimension {prep.system_dim}; channels for a subsystem "
            "cannot be connected to the joint source"
        )
    law = formal_chain(prep.prepared_state, measurement).law
    symbol = prep.label
    source = InformationSource(
        label=prep.label,
        alphabet=(symbol,),
        law=ProbabilityLaw({symbol: 1.0}),
        system_dim=prep.system_dim,
    )
    outputs = tuple(o.label for o in measurement.outcomes)
    channel = ChannelMatrix(
        input_alphabet=(symbol,),
        output_alphabet=outputs,
        entries=np.array([[law[o] for o in outputs]]),
    )
    return source, channel


def compose(first: ChannelMatrix, second: ChannelMatrix) -> ChannelMatrix:
    """Cascade two channels; the composite table is the matrix product."""
    if first.output_alphabet != second.input_alphabet:
        raise ValueError(
            f"cannot compose: first channel outputs {first.output_alphabet!r}, "
            f"second channel expects {second.input_alphabet!r}"
        )
    return ChannelMatrix(
        input_alphabet=first.input_alphabet,
        output_alphabet=second.output_alphabet,
        entries=first.entries @ second.entries,
    )


def channel_document(channel: ChannelMatrix) -> dict:
    """Plain-dict dump of a channel for serialization."""
    return {
        "input_alphabet": list(channel.input_alphabet),
        "output_alphabet": list(channel.output_alphabet),
        "rows": [[_round12(x) for x in row] for row in channel.entries],
    }
