"""Occupation-gender statistics knowledge graph and corpus analytics."""

from .errors import (
    DegenerateVector,
    DuplicateCode,
    FormatError,
    GostError,
    InvalidCode,
    InvalidGraph,
    InvalidStatistics,
    MissingLexicon,
    MissingNode,
    MissingStatistics,
)
from .graph import (
    ContextKind,
    CountryNode,
    DatasetSource,
    Graph,
    OccupationNode,
    Relation,
    StatisticsNode,
    SurveySource,
    load_graph,
    save_graph,
)

__version__ = "0.1.0"

__all__ = [
    "ContextKind", "CountryNode", "DatasetSource", "DegenerateVector",
    "DuplicateCode", "FormatError", "GostError", "Graph", "InvalidCode",
    "InvalidGraph", "InvalidStatistics", "MissingLexicon", "MissingNode",
    "MissingStatistics", "OccupationNode", "Relation", "StatisticsNode",
    "SurveySource", "load_graph", "save_graph", "__version__",
]
