"""Exception hierarchy shared by all modules.

Only ``cli.py`` turns these into process exit codes; library code just raises.
"""
from __future__ import annotations

EXIT_OK = 0
EXIT_BAD_CONFIG = 2
EXIT_CAP_EXCEEDED = 3
EXIT_VERIFICATION_FAILED = 4
EXIT_INTERNAL = 5


class GelfandError(Exception):
    exit_code = EXIT_INTERNAL


class ConfigError(GelfandError, ValueError):
    exit_code = EXIT_BAD_CONFIG


class FieldError(ConfigError):
    """Invalid field parameters or arithmetic outside the field (e.g. 1/0)."""


class NotInvertible(GelfandError, ValueError):
    exit_code = EXIT_BAD_CONFIG


class NotASubgroup(GelfandError, ValueError):
    exit_code = EXIT_INTERNAL


class CapExceeded(GelfandError, RuntimeError):
    exit_code = EXIT_CAP_EXCEEDED

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class VerificationFailure(GelfandError, AssertionError):
    exit_code = EXIT_VERIFICATION_FAILED


class InternalAssertion(GelfandError, RuntimeError):
    exit_code = EXIT_INTERNAL
