"""Exception types shared across the package."""


class MubkitError(Exception):
    """Base class for all mubkit errors."""


class DimensionMismatchError(MubkitError):
    """Operands live in incompatible spaces (different d or particle count)."""


class EnumerationCapError(MubkitError):
    """Full enumeration was requested beyond the configured size cap."""


class BudgetRefusalError(MubkitError):
    """Exhaustive partition search refused; the instance needs sampled mode."""


class PhaseLiftError(MubkitError):
    """Lifted class representatives failed to close into a group of order M."""


class DegenerateProjectorError(MubkitError):
    """A character projector was not rank one within tolerance."""


class PairingError(MubkitError):
    """Invalid basis pairing for a tensor construction."""


class IncompleteSetError(MubkitError):
    """An operation requiring a complete MUB set received a partial one."""


class DataIntegrityError(MubkitError):
    """A serialized artifact failed its digest check."""
