class LagrangeError(Exception):
    """Base class for every error raised by this package."""


class InvalidEdgeError(LagrangeError, ValueError):
    pass


class HypergraphFormatError(LagrangeError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class AlphaError(LagrangeError, ValueError):
    pass


class DimensionError(LagrangeError, ValueError):
    pass


class InfeasibleWeightingError(LagrangeError, ValueError):
    pass


class PreconditionError(LagrangeError, ValueError):
    pass


class HypothesisError(LagrangeError, ValueError):
    def __init__(self, inequality, message=None):
        self.inequality = inequality
        super().__init__(message or f"hypothesis failed: {inequality}")


class OracleLimitError(LagrangeError, ValueError):
    pass


class UnknownTheoremError(LagrangeError, ValueError):
    pass
