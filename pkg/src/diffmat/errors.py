"""Exception hierarchy shared by every module."""


class DiffMatError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(DiffMatError, ValueError):
    """Mismatched groups, malformed shapes, ill-defined maps."""


class CapacityError(DiffMatError):
    """An enumeration would exceed the configured cap."""


class VerificationError(DiffMatError):
    """A construction required a verified input or failed its own gate."""


class UnsupportedError(DiffMatError):
    """The construction does not apply to the requested group."""


class SchemaError(DiffMatError, ValueError):
    """A serialized design or system does not match the expected schema."""
