"""
WaveBench Custom Exceptions
Hierarchical exception system for clean error handling.
"""


class WaveBenchError(Exception):
    """Base exception for all WaveBench errors."""

    def __init__(self, message: str, details: str | None = None) -> None:
        self.message = message
        self.details = details
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.details:
            return f"{self.message} | Details: {self.details}"
        return self.message


# ═══════════════════════════════════════════════════════════════
# CONFIGURATION ERRORS
# ═══════════════════════════════════════════════════════════════

class ConfigurationError(WaveBenchError):
    """Raised when there's a configuration problem."""
    pass


class ConfigParseError(ConfigurationError):
    """Raised when a config file line cannot be parsed or validated."""

    def __init__(self, line: int | None, reason: str) -> None:
        self.line = line
        where = f"line {line}" if line is not None else "config"
        super().__init__(f"{where}: {reason}")


class UnknownKeyError(ConfigParseError):
    """Raised when a config file names a key that does not exist."""

    def __init__(self, key: str, line: int | None = None, section: str | None = None) -> None:
        self.key = key
        scope = f"[{section}] " if section else ""
        super().__init__(line, f"unknown key '{scope}{key}'")


# ═══════════════════════════════════════════════════════════════
# GEOMETRY / PROPAGATION ERRORS
# ═══════════════════════════════════════════════════════════════

class GeometryError(WaveBenchError):
    """Raised for invalid apertures, directions or carrier settings."""
    pass


class PropagationError(WaveBenchError):
    """Base exception for channel-construction errors."""
    pass


class SingularityError(PropagationError):
    """Raised when two radiating elements coincide (d = 0)."""
    pass


class DimensionError(PropagationError):
    """Raised when matrices or vectors do not chain."""

    def __init__(self, operation: str, reason: str) -> None:
        super().__init__(f"Dimension mismatch in {operation}", reason)


# ═══════════════════════════════════════════════════════════════
# SYNTHESIS ERRORS
# ═══════════════════════════════════════════════════════════════

class SynthesisError(WaveBenchError):
    """Base exception for architecture configuration errors."""
    pass


class DegenerateChannelError(SynthesisError):
    """Raised when a channel (or coupling) is identically zero."""

    def __init__(self, what: str = "channel") -> None:
        super().__init__("degenerate channel", f"{what} is all-zero")


class ResonantConfigurationError(SynthesisError):
    """Raised when (I + Z0·Y) is singular."""

    def __init__(self) -> None:
        super().__init__("resonant configuration", "(I + Z0*Y) is singular")


class InvalidTreeError(SynthesisError):
    """Raised when an impedance network is not a spanning tree."""
    pass


# ═══════════════════════════════════════════════════════════════
# SENSING ERRORS
# ═══════════════════════════════════════════════════════════════

class SensingError(WaveBenchError):
    """Base exception for sensing errors."""
    pass


class UnobservableError(SensingError):
    """Raised when no candidate angle produces a nonzero response."""

    def __init__(self) -> None:
        super().__init__("unobservable", "v(theta) is zero on the whole estimation grid")


class UnidentifiableGeometryError(SensingError):
    """Raised when the Fisher information matrix is singular."""

    def __init__(self, reason: str = "Fisher information matrix is singular") -> None:
        super().__init__("unidentifiable geometry", reason)


# ═══════════════════════════════════════════════════════════════
# EXPERIMENT / OUTPUT ERRORS
# ═══════════════════════════════════════════════════════════════

class ExperimentError(WaveBenchError):
    """Base exception for Monte Carlo experiment errors."""
    pass


class FailureThresholdError(ExperimentError):
    """Raised when too many trials fail to configure."""

    def __init__(self, failed: int, total: int) -> None:
        self.failed = failed
        self.total = total
        super().__init__(
            "Experiment aborted: failure threshold exceeded",
            f"{failed}/{total} trials failed",
        )


class OutputError(WaveBenchError):
    """Raised when the output directory cannot be written."""
    pass


class ResultFormatError(WaveBenchError):
    """Raised when a result CSV is malformed."""

    def __init__(self, path: str, column: str) -> None:
        self.column = column
        super().__init__(f"Malformed result file '{path}'", f"missing column '{column}'")
