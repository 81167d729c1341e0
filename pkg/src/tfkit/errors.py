"""Exception types shared across the package."""


class GroupMismatchError(ValueError):
    """Operands live on different groups (orders or Haar weights differ)."""


class LatticeError(ValueError):
    """Invalid lattice step, or a phase point outside the lattice."""


class WindowError(ValueError):
    """Window unusable for the requested operation (zero, or not normalized)."""


class FrameError(ValueError):
    """A Gabor system is not a frame; carries the computed bounds."""

    def __init__(self, message: str, bounds=None):
        super().__init__(message)
        self.bounds = bounds


class ConfigError(ValueError):
    """Malformed experiment configuration."""
