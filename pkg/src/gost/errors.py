"""Exception hierarchy shared across the package."""


class GostError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidCode(GostError):
    """Occupation code does not match the 1-4 digit format."""


class DuplicateCode(GostError):
    """An occupation with the same (scheme, code) already exists."""


class MissingNode(GostError):
    """A statistics record references a node that is not in the graph."""


class InvalidStatistics(GostError):
    """A statistics record violates a percentage/count/relation invariant."""


class InvalidGraph(GostError):
    """Graph-level validation failed; carries the violation list."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"graph validation failed: {lines}")


class FormatError(GostError):
    """An input file does not conform to its documented schema."""


class DegenerateVector(GostError):
    """Cosine similarity is undefined for an all-zero vector."""


class MissingStatistics(GostError):
    """A report needs a statistic (corpus or survey side) that is absent."""

    def __init__(self, side: str, detail: str = ""):
        self.side = side
        super().__init__(f"missing {side} statistics" + (f": {detail}" if detail else ""))


class MissingLexicon(GostError):
    """No gazetteer/gender lexicon is available for a corpus language."""
