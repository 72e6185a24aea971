"""Exception hierarchy shared by all modules.

Each class carries the process exit code the CLI uses when it propagates.
"""


class NbestlexError(Exception):
    exit_code = 1


class ConfigurationError(NbestlexError):
    """A command or cascade was configured inconsistently (missing resource,
    bad filter name, impossible sizes)."""

    exit_code = 2


class FormatError(NbestlexError):
    """An input file violates its documented format."""

    exit_code = 3


class ContractViolationError(NbestlexError):
    """An internal precondition was violated by a caller (crossing loci,
    candidates with unknown provenance)."""

    exit_code = 4
