"""Quantum probability trees, information channels, and Bell-inequality checks."""

from .bell import (
    BellEstimate,
    BellProbabilities,
    BellScenario,
    HiddenVariableModel,
    ScanRow,
    check_inequality,
    classical_bell,
    monte_carlo_bell,
    quantum_bell,
    violation_scan,
)
from .channel import (
    ChannelMatrix,
    InformationSource,
    InformationSystem,
    attach,
    compose,
    quantum_channel,
)
from .errors import DimensionMismatchError
from .spin import (
    EigenDecomposition,
    Observable,
    StateVector,
    UnitVector,
    born_probability,
    eigendecompose,
    is_product_state,
    joint_outcome_distribution,
    singlet_state,
    spin_operator,
    tensor,
)
from .tree import (
    FactualChain,
    FormalChain,
    MeasurementClass,
    NeedlePosition,
    OutcomeAlgebra,
    PreparationOp,
    ProbabilityLaw,
    ProbabilityTree,
    SpaceTimeDomain,
    TreeBranch,
    build_tree,
    compatible,
    event_probability,
    formal_chain,
    pair_measurement_class,
    sample_factual_chain,
    singlet_preparation,
    tree_document,
)

__version__ = "0.1.0"

__all__ = [
    "BellEstimate",
    "BellProbabilities",
    "BellScenario",
    "ChannelMatrix",
    "DimensionMismatchError",
    "EigenDecomposition",
    "FactualChain",
    "FormalChain",
    "HiddenVariableModel",
    "InformationSource",
    "InformationSystem",
    "MeasurementClass",
    "NeedlePosition",
    "Observable",
    "OutcomeAlgebra",
    "PreparationOp",
    "ProbabilityLaw",
    "ProbabilityTree",
    "ScanRow",
    "SpaceTimeDomain",
    "StateVector",
    "TreeBranch",
    "UnitVector",
    "attach",
    "born_probability",
    "build_tree",
    "check_inequality",
    "classical_bell",
    "compatible",
    "compose",
    "eigendecompose",
    "event_probability",
    "formal_chain",
    "is_product_state",
    "joint_outcome_distribution",
    "monte_carlo_bell",
    "pair_measurement_class",
    "quantum_bell",
    "quantum_channel",
    "sample_factual_chain",
    "singlet_preparation",
    "singlet_state",
    "spin_operator",
    "tensor",
    "tree_document",
    "violation_scan",
]
