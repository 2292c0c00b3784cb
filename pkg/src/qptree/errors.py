"""Shared exception types."""


class DimensionMismatchError(ValueError):
    """Hilbert-space dimensions of connected objects disagree.

    The central case is the joint-source rule: a prepared two-particle state
    is one entity of dimension 4, so only measurement classes acting on the
    whole system can be attached to it.  A single-particle class (dimension
    2) addresses a subsystem that the preparation never emits on its own,
    and connecting one is rejected with this error.
    """
