"""Exception hierarchy shared by every module."""


class LexTypesError(ValueError):
    """Base class. ``path`` locates the offending node of an input document, if any."""

    def __init__(self, message, path=()):
        super().__init__(message)
        self.path = tuple(path)

    def where(self):
        out = "$"
        for key in self.path:
            out += f"[{key}]" if isinstance(key, int) else f".{key}"
        return out


# core model
class MalformedInput(LexTypesError):
    pass


class NonProbability(LexTypesError):
    pass


class DanglingReference(LexTypesError):
    pass


class EmptyLps(LexTypesError):
    pass


class TooFewPlayers(LexTypesError):
    pass


class IncompletePayoffs(LexTypesError):
    pass


# decisions
class LengthMismatch(LexTypesError):
    pass


class UnknownStrategy(LexTypesError):
    pass


class UnknownType(LexTypesError):
    pass


# epistemic
class EmptyEvent(LexTypesError):
    pass


class LevelOutOfRange(LexTypesError):
    pass


# hierarchies and harness
class MismatchedGames(LexTypesError):
    pass


class DepthTooLarge(LexTypesError):
    pass


class InvalidMorphism(LexTypesError):
    pass


class InfeasibleBounds(LexTypesError):
    pass


class InstanceSyntaxError(LexTypesError):
    """The document is not well-formed JSON; ``line``/``column`` locate the fault."""

    def __init__(self, message, line=0, column=0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
