"""Exception hierarchy shared by every module."""


class FoldlangError(Exception):
    """Base class for all toolkit errors."""


class ParseError(FoldlangError, ValueError):
    def __init__(self, reason, position=None):
        self.reason = reason
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"parse error{where}: {reason}")


class AlphabetMismatch(FoldlangError, ValueError):
    pass


class InvalidResidue(FoldlangError, ValueError):
    pass


class CapExceeded(FoldlangError, ValueError):
    pass


class LengthMismatch(FoldlangError, ValueError):
    pass


class NotLinear(FoldlangError, ValueError):
    pass


class NotRightLinear(FoldlangError, ValueError):
    pass


class NotNormalForm(FoldlangError, ValueError):
    pass


class ProcAlphabetError(FoldlangError, ValueError):
    pass


class UnknownNonterminal(FoldlangError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class PreconditionViolation(FoldlangError, ValueError):
    pass


class TooShort(FoldlangError, ValueError):
    pass
