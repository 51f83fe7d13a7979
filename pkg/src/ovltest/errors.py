"""Exception types raised by ovltest."""

from __future__ import annotations


class OvlError(Exception):
    """Base class for all ovltest errors."""


class InputError(OvlError, ValueError):
    """Malformed or out-of-domain input."""


class TieError(OvlError):
    """Duplicate observations were found and the tie policy rejects them."""

    def __init__(self, value: float, message: str | None = None):
        self.value = value
        super().__init__(message or f"tied observations at value {value!r}")


class UnequalSizesError(OvlError, ValueError):
    """An operation that needs m == n was given unequal sample sizes."""

    def __init__(self, m: int, n: int):
        self.m, self.n = m, n
        super().__init__(f"operation requires m == n, got m={m}, n={n}")


class SizeLimitError(OvlError):
    """Brute-force evaluation would exceed its configured cost cap."""

    def __init__(self, cost: int, cap: int):
        self.cost, self.cap = cost, cap
        super().__init__(f"brute force needs {cost} evaluations, cap is {cap}")


class CostCapError(OvlError):
    """Enumerating the rank-sequence space would exceed the cost cap.

    Recoverable: callers may route to a band, fast or Monte Carlo method.
    """

    def __init__(self, required: int, cap: int):
        self.required, self.cap = required, cap
        super().__init__(
            f"enumeration needs {_magnitude(required)} rank sequences, cap is {cap}"
        )


def _magnitude(v: int) -> str:
    s = str(v)
    return s if len(s) <= 15 else f"about {s[0]}.{s[1:3]}e{len(s) - 1}"


class NotInvertibleError(OvlError, ArithmeticError):
    """Integer power series without a unit constant term."""
