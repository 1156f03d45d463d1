"""Exception types raised by nbcentrality."""


class NBCentralityError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(NBCentralityError, ValueError):
    """A graph violates a structural requirement."""


class EmptyGraphError(GraphError):
    pass


class DisconnectedGraphError(GraphError):
    pass


class ParseError(NBCentralityError, ValueError):
    """Malformed edge-list input."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ParameterError(NBCentralityError, ValueError):
    """Model or solver parameters outside their valid domain."""


class DimensionError(NBCentralityError, ValueError):
    pass


class DegenerateResultError(NBCentralityError, ArithmeticError):
    """A centrality computation produced a meaningless vector."""


class BranchError(NBCentralityError, ValueError):
    """A closed form was evaluated outside its real branch."""
