"""Exception hierarchy; the CLI maps each class to an exit status."""


class FlagvecError(Exception):
    exit_status = 4


class InputError(FlagvecError, ValueError):
    """Malformed object, file, or argument."""

    exit_status = 2


class ResourceError(FlagvecError):
    """A desk-scale guard was exceeded."""

    exit_status = 3


class InvariantError(FlagvecError, AssertionError):
    """An internal consistency check failed.

    ``witness`` carries a serialized instance for replay when one exists.
    """

    exit_status = 4

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
