"""Exceptions raised across the library.

Every error carries a short machine-readable ``code`` which the command line
prints as ``error: CODE message``.
"""


class DiagramError(Exception):
    code = "DiagramError"


class TypeMismatch(DiagramError, TypeError):
    code = "TypeMismatch"


class UnknownBox(DiagramError, KeyError):
    code = "UnknownBox"

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class UnknownMethod(DiagramError, AttributeError):
    code = "UnknownMethod"


class Connected(DiagramError, ValueError):
    code = "Connected"


class Disconnected(DiagramError, ValueError):
    code = "Disconnected"


class IllTyped(DiagramError, ValueError):
    code = "IllTyped"


class NoMatch(DiagramError, ValueError):
    code = "NoMatch"


class ShapeMismatch(DiagramError, ValueError):
    code = "ShapeMismatch"


class RigMismatch(DiagramError, TypeError):
    code = "RigMismatch"


class NotPure(DiagramError, ValueError):
    code = "NotPure"


class UnboundVariable(DiagramError, KeyError):
    code = "UnboundVariable"

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class UnknownWord(DiagramError, KeyError):
    code = "UnknownWord"

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class IllFormedTree(DiagramError, ValueError):
    code = "IllFormedTree"


class NoRecipe(DiagramError, ValueError):
    code = "NoRecipe"


class NonGeneric(DiagramError, ValueError):
    code = "NonGeneric"


class NonProgressive(DiagramError, ValueError):
    code = "NonProgressive"


class EmptyData(DiagramError, ValueError):
    code = "EmptyData"
