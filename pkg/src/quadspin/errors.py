"""Exception types shared across the package."""


class QuadspinError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(QuadspinError):
    """Operands act on different Hilbert-space dimensions."""


class NotHermitianError(QuadspinError):
    """A matrix required to be Hermitian failed the symmetry check."""


class SpinTooSmallError(QuadspinError):
    """Quadrupole couplings need I >= 1; spin-1/2 carries no quadrupole moment."""


class DegenerateEfgError(QuadspinError):
    """All principal field-gradient values vanish, so the biaxiality is undefined."""


class MixedStateUnsupportedError(QuadspinError):
    """The requested quantity is defined for pure states only."""


class InfiniteBoundError(QuadspinError):
    """The orthogonalization-time bound diverges (stationary input state)."""


class IntegratorDivergedError(QuadspinError):
    """The master-equation integrator failed its accuracy contract."""


class ConfigError(QuadspinError):
    """Invalid run configuration: a bad field value or a malformed file."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        prefix = f"{field}: " if field else ""
        suffix = f" (line {line})" if line is not None else ""
        super().__init__(f"{prefix}{message}{suffix}")
