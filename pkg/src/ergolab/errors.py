"""Domain errors shared across modules.

Domain errors (as opposed to usage errors) map to exit code 1 in the CLI.
"""


class ErgolabError(Exception):
    """Base class for all domain errors raised by this package."""


class Infeasible(ErgolabError):
    """No object satisfying the requested constraints exists at this finite scale."""


class CapExceeded(ErgolabError):
    """An exact computation would exceed its configured enumeration cap."""


class DesignError(ErgolabError):
    """Construction parameters cannot be derived from the given data."""
