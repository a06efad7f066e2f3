"""Exception types shared across the package."""


class QuandleForgeError(Exception):
    """Base class for domain errors raised by this package."""


class BudgetExceeded(QuandleForgeError):
    """Enumeration did not close within the allotted element budget.

    Usually a sign that the presented object is infinite.
    """

    def __init__(self, message: str, allocated: int | None = None):
        super().__init__(message)
        self.allocated = allocated


class CapExceeded(QuandleForgeError):
    """Input size exceeds the configured cap for an exhaustive search."""


class ParseError(QuandleForgeError):
    """Malformed presentation or table text."""

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.expected = tuple(expected)


class NotFound(QuandleForgeError):
    """No object matching the requested constraints exists."""


class NotAKnot(QuandleForgeError):
    """Braid closure has more than one component."""


class InvalidMonodromy(QuandleForgeError):
    """Automorphism does not have the order required by the twist parameters."""


class OutsideFiniteCatalog(QuandleForgeError):
    """Twist-spin spec is not in any finiteness family, so no finite verdict exists."""


class OutsideCatalog(QuandleForgeError):
    """Requested instance is not realized in the built-in catalog."""


class CatalogInconsistent(QuandleForgeError):
    """A load-time cross-check of the built-in catalog failed."""
