"""
Affine expressions c0 + c1 v1 + ... + cn vn in named real variables, used as
gate phases. They are hashable so that boxes holding them can be compared.

>>> v = Var('v')
>>> phase = 2 * v - .5
>>> phase.eval({'v': 1}), phase.diff('v')
(1.5, 2.0)
"""

import re

from diagrammar.errors import UnboundVariable


class AffineExpr:
    def __init__(self, constant=0.0, coefficients=None):
        self.constant = float(constant)
        coefficients = coefficients or {}
        self.coefficients = {k: float(c) for k, c in sorted(coefficients.items()) if c != 0}

    @property
    def free_variables(self):
        return set(self.coefficients)

    def eval(self, assignment=None):
        assignment = assignment or {}
        total = self.constant
        for name, c in self.coefficients.items():
            if name not in assignment:
                raise UnboundVariable(f"no value for {name}")
            total += c * float(assignment[name])
        return total

    def diff(self, var):
        return self.coefficients.get(var, 0.0)

    def __add__(self, other):
        other = as_expr(other)
        coefficients = dict(self.coefficients)
        for name, c in other.coefficients.items():
            coefficients[name] = coefficients.get(name, 0.0) + c
        return AffineExpr(self.constant + other.constant, coefficients)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + -as_expr(other)

    def __rsub__(self, other):
        return as_expr(other) - self

    def __mul__(self, scalar):
        if isinstance(scalar, AffineExpr):
            if scalar.coefficients and self.coefficients:
                raise TypeError("the product of two variables is not affine")
            if not scalar.coefficients:
                scalar = scalar.constant
            else:
                return scalar * self.constant
        scalar = float(scalar)
        return AffineExpr(self.constant * scalar,
                          {k: c * scalar for k, c in self.coefficients.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / float(scalar))

    def _key(self):
        return self.constant, tuple(self.coefficients.items())

    def __eq__(self, other):
        if isinstance(other, (int, float)):
            other = AffineExpr(other)
        if not isinstance(other, AffineExpr):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if not self.coefficients:
            return hash(self.constant)
        return hash(self._key())

    def __float__(self):
        if self.coefficients:
            raise UnboundVariable(f"{self} has free variables")
        return self.constant

    def __repr__(self):
        return f"AffineExpr({self.constant!r}, {self.coefficients!r})"

    def __str__(self):
        parts = []
        for name, c in self.coefficients.items():
            parts.append(name if c == 1 else f"-{name}" if c == -1 else f"{c:g}*{name}")
        if self.constant or not parts:
            parts.append(f"{self.constant:g}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def to_json(self):
        return {"constant": self.constant, "coefficients": dict(self.coefficients)}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, (int, float)):
            return cls(data)
        if isinstance(data, str):
            return parse(data)
        return cls(data.get("constant", 0.0), data.get("coefficients", {}))


def Var(name):
    return AffineExpr(0.0, {name: 1.0})


def as_expr(value):
    return value if isinstance(value, AffineExpr) else AffineExpr(value)


_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+\.?\d*(?:e[+-]?\d+)?|\.\d+)\s*\*?\s*)?([A-Za-z_]\w*)?\s*")


def parse(text):
    """
    Read an expression such as ``2*v - .5`` or ``theta + 0.25``.

    >>> parse("2*v - .5") == 2 * Var('v') - .5
    True
    """
    result, position, text = AffineExpr(), 0, text.strip()
    if not text:
        raise ValueError("empty expression")
    while position < len(text):
        match = _TERM.match(text, position)
        sign, number, name = match.groups()
        if match.end() == position or (number is None and name is None):
            raise ValueError(f"cannot parse {text!r} at position {position}")
        if position > 0 and not sign:
            raise ValueError(f"missing operator in {text!r} at position {position}")
        value = (-1.0 if sign == "-" else 1.0) * (float(number) if number else 1.0)
        result = result + (value * Var(name) if name else AffineExpr(value))
        position = match.end()
    return result
