"""Exception types shared across the package."""


class PairvisError(Exception):
    """Base class for all pairvis errors."""


class InvalidPolygon(PairvisError):
    """Input vertex sequence does not describe a usable simple polygon."""


class TooFewVertices(InvalidPolygon):
    pass


class DuplicateVertices(InvalidPolygon):
    def __init__(self, index):
        self.index = index
        super().__init__(f"consecutive duplicate vertices at index {index}")


class NotSimple(InvalidPolygon):
    """Self-intersecting boundary; carries a witness pair of edge indices."""

    def __init__(self, edge_a, edge_b):
        self.edge_a = edge_a
        self.edge_b = edge_b
        super().__init__(f"boundary edges {edge_a} and {edge_b} intersect")


class OutsidePolygon(PairvisError):
    """A query point lies strictly outside the polygon."""

    def __init__(self, point):
        self.point = tuple(point)
        super().__init__(f"point {self.point} lies outside the polygon")


class DegenerateInput(PairvisError):
    """The operation requires a non-trivial configuration (e.g. s not visible from t)."""


class EmptyInterval(PairvisError):
    """An interval minimization was requested over an empty angle range."""


class QueryFormatError(PairvisError):
    """Serialized query structure is unreadable or has a mismatched version."""


class InternalError(PairvisError):
    """An invariant the algorithms rely on was violated; indicates a bug."""
