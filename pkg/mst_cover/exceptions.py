"""Errors raised by the multiagent MST cover solver.

Every error carries a stable ``code`` so that callers (and the command line
front end) can tell failures apart without parsing messages.
"""
from __future__ import annotations


class MstCoverError(Exception):
    """Base class for all solver errors."""

    code = "error"


class MalformedInstanceError(MstCoverError, ValueError):
    """An instance, solution or configuration does not follow its schema."""

    code = "malformed"


class LengthMismatchError(MalformedInstanceError):
    """A per-edge vector does not have one entry per edge."""

    code = "length-mismatch"


class DisconnectedGraphError(MalformedInstanceError):
    """The graph does not connect all of its nodes."""

    code = "disconnected"


class InvalidCostError(MalformedInstanceError):
    """A singleton edge cost is zero or negative."""

    code = "non-positive-cost"


class SizeGuardError(MstCoverError, ValueError):
    """An instance is too large for a brute-force oracle."""

    code = "size-guard"


class SolverError(MstCoverError, RuntimeError):
    """A solver reached a state that a correct implementation never reaches."""

    code = "solver"
