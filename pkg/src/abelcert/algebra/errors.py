"""Exception types shared by the exact-arithmetic layer."""


class AlgebraError(ArithmeticError):
    """Base class for exact-arithmetic failures."""


class VariableMismatch(AlgebraError):
    """Operands carry different variable tags."""


class InexactDivision(AlgebraError):
    """Polynomial division left a nonzero remainder."""


class ZeroInput(AlgebraError):
    """An operation that needs a nonzero polynomial received zero."""


class PoleAtBasePoint(AlgebraError):
    """A series was requested at a pole."""
