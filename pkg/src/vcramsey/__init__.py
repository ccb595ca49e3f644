"""VC-dimension, ultra-strong regularity and Ramsey-type extraction for graphs and hypergraphs."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    BudgetExceeded,
    Graph,
    Hypergraph,
    InputError,
    Partition,
    Refusal,
    SetSystem,
    VerificationError,
    VertexSet,
    density,
    is_epsilon_homogeneous,
    parse_graph,
    parse_hypergraph,
    symmetric_difference_size,
    tuple_neighborhood,
)

__all__ = [
    "__version__",
    "BudgetExceeded",
    "Graph",
    "Hypergraph",
    "InputError",
    "Partition",
    "Refusal",
    "SetSystem",
    "VerificationError",
    "VertexSet",
    "density",
    "is_epsilon_homogeneous",
    "parse_graph",
    "parse_hypergraph",
    "symmetric_difference_size",
    "tuple_neighborhood",
]
