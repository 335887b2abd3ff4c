"""Exception hierarchy shared by every module of the package."""


class ModalSpecError(Exception):
    """Base class for all errors raised by modalspec."""


class InvalidState(ModalSpecError):
    """A state index lies outside ``0..n-1``."""


class InconsistentMust(ModalSpecError):
    """A must-branch ``(a, t)`` of ``s -> N`` has no may-transition ``s -a-> t``."""


class InvalidBound(ModalSpecError):
    """An unsupported switch bound, e.g. the ready flag combined with ``k = inf``."""


class SizeLimit(ModalSpecError):
    """A computation would exceed a configured size cap."""


class ParseError(ModalSpecError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CountMismatch(ParseError):
    """The header of an ``.aut`` file disagrees with its body."""


class IllegalStrategy(ModalSpecError):
    """A strategy picks a move that is not a move of the game graph."""
