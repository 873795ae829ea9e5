"""Exception types shared across the package."""


class LabError(Exception):
    """Base class for errors raised by cglocality."""


class DimensionError(LabError, ValueError):
    """Operands have incompatible shapes."""


class AssemblyError(LabError, ValueError):
    """A triplet could not be placed into a sparse matrix."""


class SizeGuardError(LabError, MemoryError):
    """A dense expansion would exceed the desk-scale size limit."""


class NotSPDError(LabError, ValueError):
    """A matrix that must be symmetric positive definite is not."""


class DisconnectedGraphError(LabError, ValueError):
    """The matrix graph has more than one connected component."""

    def __init__(self, message, n_components):
        super().__init__(message)
        self.n_components = n_components


class MatrixMarketError(LabError, ValueError):
    """Malformed Matrix Market input."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(LabError, ValueError):
    """Invalid scenario configuration; ``field`` names the offending key."""

    def __init__(self, message, field=None):
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field
