"""Exception types shared across the package."""


class FexError(Exception):
    """Base class for all errors raised by this package."""


class GroupError(FexError, ValueError):
    """Invalid group specification or group element."""


class SideMismatchError(FexError, ValueError):
    """A function tagged with the wrong side (time vs frequency) was passed."""


class PeakError(FexError, ValueError):
    """Invalid base set or a peak incompatible with the requested point set."""


class ResolutionError(FexError, ValueError):
    """Phase-grid resolution below the supported minimum."""


class BudgetError(FexError, ValueError):
    """An enumeration guard (grid size or sign-pattern count) was exceeded."""


class ConfigError(FexError, ValueError):
    """Malformed or inconsistent run configuration."""
