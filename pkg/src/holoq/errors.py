"""Exception hierarchy shared by every holoq module."""


class HoloqError(Exception):
    """Base class for all holoq errors."""


class DomainError(HoloqError, ValueError):
    """A function was evaluated at a point of its singular set."""


class BranchCutError(DomainError):
    """The principal logarithm was evaluated on the closed negative real axis."""


class StencilError(HoloqError):
    """A finite-difference stencil point hit a singularity."""


class PreconditionError(HoloqError, ValueError):
    pass


class UnsupportedNode(HoloqError, TypeError):
    """A raw-mode tree was passed to an operation that needs a catalog tree."""


class UnsupportedOrder(HoloqError, ValueError):
    pass


class ParseError(HoloqError, ValueError):
    """Base for expression parse errors.

    ``span`` is a ``(start, end)`` pair of byte offsets into the source text.
    """

    def __init__(self, message: str, span: tuple[int, int], text: str = ""):
        super().__init__(message)
        self.message = message
        self.span = span
        self.text = text

    def render(self) -> str:
        """Return the message with a caret line pointing at the span."""
        if not self.text:
            return f"{self.message} at {self.span[0]}:{self.span[1]}"
        raw = self.text.encode()
        col = len(raw[: self.span[0]].decode(errors="replace"))
        width = max(1, len(raw[self.span[0]: self.span[1]].decode(errors="replace")))
        return f"{self.message} at {self.span[0]}:{self.span[1]}\n  {self.text}\n  {' ' * col}{'^' * width}"


class ExprSyntaxError(ParseError):
    pass


class NonIntegerExponent(ParseError):
    pass


class UnknownIdentifier(ParseError):
    pass
