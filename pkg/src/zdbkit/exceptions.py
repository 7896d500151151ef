class ZdbError(Exception):
    """Base class for errors raised by zdbkit."""


class PreconditionError(ZdbError, ValueError):
    """A construction or operation was called outside its stated hypotheses."""


class VerificationError(ZdbError):
    """An exhaustively computed quantity disagrees with the claimed value."""
