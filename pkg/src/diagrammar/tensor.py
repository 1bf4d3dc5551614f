"""
Matrices and tensors over a rig (bool, int, float or complex), with the
structure needed to evaluate diagrams: composition, Kronecker product, cups,
caps, swaps, spiders and elementwise bubbles.

>>> Matrix([[1, 2]], 1, 2).then(Matrix([[3], [5]], 2, 1))
Matrix([[13]], dom=1, cod=1)
"""

import math

import numpy as np

from diagrammar import core, symmetric
from diagrammar.errors import RigMismatch, ShapeMismatch, TypeMismatch
from diagrammar.rigid import Ty

ATOL = 1e-9


def rig_of(array):
    return "bool" if array.dtype.kind == "b" else "number"


def check_rigs(a, b):
    if rig_of(a) != rig_of(b):
        raise RigMismatch(f"cannot mix {a.dtype} with {b.dtype}")


def matmul(a, b):
    check_rigs(a, b)
    if a.dtype.kind == "b":
        return (a.astype(int) @ b.astype(int)) > 0
    return a @ b


def close(a, b):
    if a.shape != b.shape:
        return False
    if a.dtype.kind in "bi" and b.dtype.kind in "bi":
        return bool(np.array_equal(a, b))
    return bool(np.allclose(a, b, atol=ATOL, rtol=0))


def logistic(x):
    return 1 / (1 + np.exp(-x))


class Matrix:
    """A ``dom`` by ``cod`` array, composed by matrix multiplication."""

    def __init__(self, inside, dom, cod):
        array = np.asarray(inside)
        if array.size != dom * cod:
            raise ShapeMismatch(f"{array.size} entries for a {dom} x {cod} matrix")
        self.array, self.dom, self.cod = array.reshape(dom, cod), dom, cod

    @classmethod
    def id(cls, x=0):
        return cls(np.eye(x, dtype=int), x, x)

    @classmethod
    def zero(cls, dom, cod):
        return cls(np.zeros((dom, cod), dtype=int), dom, cod)

    def then(self, *others):
        result = self
        for other in others:
            if result.cod != other.dom:
                raise ShapeMismatch(f"cannot compose {result.cod} with {other.dom}")
            result = Matrix(matmul(result.array, other.array), result.dom, other.cod)
        return result

    def __rshift__(self, other):
        return self.then(other)

    def tensor(self, *others):
        result = self
        for other in others:
            check_rigs(result.array, other.array)
            result = Matrix(np.kron(result.array, other.array),
                            result.dom * other.dom, result.cod * other.cod)
        return result

    def __matmul__(self, other):
        return self.tensor(other)

    def direct_sum(self, other):
        check_rigs(self.array, other.array)
        dtype = np.result_type(self.array, other.array)
        array = np.zeros((self.dom + other.dom, self.cod + other.cod), dtype=dtype)
        array[:self.dom, :self.cod] = self.array
        array[self.dom:, self.cod:] = other.array
        return Matrix(array, self.dom + other.dom, self.cod + other.cod)

    def __add__(self, other):
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise ShapeMismatch("cannot add matrices of different shapes")
        check_rigs(self.array, other.array)
        if self.array.dtype.kind == "b":
            return Matrix(self.array | other.array, self.dom, self.cod)
        return Matrix(self.array + other.array, self.dom, self.cod)

    def dagger(self):
        return Matrix(self.array.conj().T, self.cod, self.dom)

    @property
    def T(self):
        return Matrix(self.array.T, self.cod, self.dom)

    transpose = T.fget

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.dom, self.cod) == (other.dom, other.cod) and close(self.array, other.array)

    def __repr__(self):
        return f"Matrix({self.array.tolist()}, dom={self.dom}, cod={self.cod})"


def kron(a, b):
    # np.kron is slow on the small matrices diagrams produce
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(rows, cols)


def _prod(dims):
    return math.prod(dims) if dims else 1


class Tensor:
    """
    A tensor with lists of dimensions as domain and codomain, stored as a
    ``prod(dom)`` by ``prod(cod)`` array, row-major in the dimensions.

    ``Tensor[bool]`` is the same class restricted to booleans.
    """

    dtype = None
    _rigs = {}

    def __class_getitem__(cls, dtype):
        if dtype not in cls._rigs:
            cls._rigs[dtype] = type(f"Tensor[{dtype.__name__}]", (cls, ), {"dtype": dtype})
        return cls._rigs[dtype]

    def __init__(self, inside, dom, cod):
        dom, cod = [int(d) for d in dom], [int(c) for c in cod]
        array = np.asarray(inside, dtype=self.dtype)
        rows, cols = _prod(dom), _prod(cod)
        if array.size != rows * cols:
            raise ShapeMismatch(f"{array.size} entries for a tensor {dom} -> {cod}")
        self.array, self.dom, self.cod = array.reshape(rows, cols), dom, cod

    def _new(self, array, dom, cod):
        return type(self)(array, dom, cod)

    @classmethod
    def id(cls, dom=()):
        dom = list(dom)
        return cls(np.eye(_prod(dom), dtype=cls.dtype or int), dom, dom)

    @classmethod
    def zero(cls, dom, cod):
        return cls(np.zeros((_prod(dom), _prod(cod)), dtype=cls.dtype or int), dom, cod)

    def then(self, *others):
        result = self
        for other in others:
            if result.cod != other.dom:
                raise TypeMismatch(f"cannot compose {result.cod} with {other.dom}")
            result = result._new(matmul(result.array, other.array), result.dom, other.cod)
        return result

    def __rshift__(self, other):
        return self.then(other)

    def tensor(self, *others):
        result = self
        for other in others:
            check_rigs(result.array, other.array)
            result = result._new(kron(result.array, other.array),
                                 result.dom + other.dom, result.cod + other.cod)
        return result

    def __matmul__(self, other):
        return self.tensor(other)

    def __add__(self, other):
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise ShapeMismatch(f"cannot add {self.dom} -> {self.cod} and {other.dom} -> {other.cod}")
        check_rigs(self.array, other.array)
        if self.array.dtype.kind == "b":
            return self._new(self.array | other.array, self.dom, self.cod)
        return self._new(self.array + other.array, self.dom, self.cod)

    def __mul__(self, scalar):
        return self._new(self.array * scalar, self.dom, self.cod)

    __rmul__ = __mul__

    def dagger(self):
        return self._new(self.array.conj().T, self.cod, self.dom)

    def transpose(self, left=False):
        """The diagrammatic transpose: axes reversed, dom and cod exchanged."""
        dom, cod = self.dom, self.cod
        array = self.array.reshape(dom + cod)
        n, m = len(dom), len(cod)
        axes = list(range(n + m - 1, n - 1, -1)) + list(range(n - 1, -1, -1))
        return self._new(np.transpose(array, axes), cod[::-1], dom[::-1])

    def downgrade(self):
        return Matrix(self.array, _prod(self.dom), _prod(self.cod))

    @property
    def shaped(self):
        """The array with one axis per dimension, dom first."""
        return self.array.reshape(self.dom + self.cod)

    @classmethod
    def swap(cls, x, y):
        x, y = list(x), list(y)
        px, py = _prod(x), _prod(y)
        array = np.zeros((px * py, py * px), dtype=cls.dtype or int)
        i, j = np.meshgrid(np.arange(px), np.arange(py), indexing="ij")
        array[(i * py + j).ravel(), (j * px + i).ravel()] = 1
        return cls(array, x + y, y + x)

    braid = swap

    @classmethod
    def cups(cls, x, y):
        x, y = list(x), list(y)
        if y != x[::-1]:
            raise TypeMismatch(f"no cups between {x} and {y}")
        k = len(x)
        eye = np.eye(_prod(x), dtype=cls.dtype or int).reshape(x + x)
        array = np.transpose(eye, list(range(k)) + list(range(2 * k - 1, k - 1, -1)))
        return cls(array, x + y, [])

    @classmethod
    def caps(cls, x, y):
        return cls.cups(x, y).dagger()

    @classmethod
    def spider_factor(cls, n, phase):
        if phase is None:
            return np.ones(n, dtype=cls.dtype or int)
        if isinstance(phase, (list, tuple, np.ndarray)):
            return np.asarray(phase)
        factor = np.ones(n, dtype=complex)
        factor[1:] = np.exp(1j * float(phase))
        return factor

    @classmethod
    def spiders(cls, a, b, x, phase=None):
        """
        The spider sum over i of phase_i |i><i| with a legs in and b legs out
        on each dimension of ``x``, phase_0 = 1 and phase_i = exp(i phase)
        otherwise.
        """
        x = [x] if isinstance(x, int) else list(x)
        shape = x * a + x * b
        factors = [cls.spider_factor(n, phase) for n in x]
        dtype = np.result_type(*factors) if factors else (cls.dtype or int)
        array = np.zeros(shape, dtype=dtype)
        for index in np.ndindex(*x) if x else [()]:
            value = 1
            for n, i in enumerate(index):
                value = value * factors[n][i]
            array[tuple(index) * (a + b)] += value
        return cls(array, x * a, x * b)

    @classmethod
    def copy(cls, x, n=2):
        return cls.spiders(1, n, x)

    @classmethod
    def merge(cls, x, n=2):
        return cls.spiders(n, 1, x)

    def map(self, func):
        return self._new(func(self.array), self.dom, self.cod)

    def identity(self, dom=None, cod=None):
        return self

    def negate(self, dom=None, cod=None):
        if self.array.dtype.kind != "b":
            raise RigMismatch("negation needs a boolean tensor")
        return self.map(np.logical_not)

    def squared_amplitude(self, dom=None, cod=None):
        return type(self)(np.abs(self.array) ** 2, self.dom, self.cod)

    def relu(self, dom=None, cod=None):
        return self.map(lambda a: np.maximum(np.real(a), 0))

    def logistic(self, dom=None, cod=None):
        return self.map(lambda a: logistic(np.real(a)))

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            if np.ndim(other) == 0 and self.array.size == 1:
                return bool(abs(self.array.item() - other) <= ATOL)
            return NotImplemented
        return (self.dom, self.cod) == (other.dom, other.cod) and close(self.array, other.array)

    def __bool__(self):
        return bool(np.any(self.array))

    def item(self):
        return self.array.item()

    def __repr__(self):
        return f"{type(self).__name__}({self.array.tolist()}, dom={self.dom}, cod={self.cod})"


def apply_layer(result, left, box):
    """
    ``result >> id(left) @ box @ id(right)``, contracting the box into the
    matching axes instead of building a Kronecker product with identities.
    """
    n_left, n_dom, n_cod = len(left), len(box.dom), len(box.cod)
    if result.cod[n_left:n_left + n_dom] != box.dom:
        raise TypeMismatch(f"cannot apply {box.dom} -> {box.cod} at {n_left} of {result.cod}")
    check_rigs(result.array, box.array)
    state = result.array.reshape([result.array.shape[0]] + result.cod)
    matrix = box.array.reshape(box.dom + box.cod)
    boolean = state.dtype.kind == "b"
    if boolean:
        state, matrix = state.astype(int), matrix.astype(int)
    axes = list(range(1 + n_left, 1 + n_left + n_dom))
    out = np.tensordot(state, matrix, axes=(axes, list(range(n_dom))))
    # tensordot leaves the box outputs last, move them back in place
    n_right = len(result.cod) - n_left - n_dom
    order = list(range(1 + n_left)) \
        + list(range(1 + n_left + n_right, 1 + n_left + n_right + n_cod)) \
        + list(range(1 + n_left, 1 + n_left + n_right))
    out = np.transpose(out, order)
    cod = result.cod[:n_left] + box.cod + result.cod[n_left + n_dom:]
    return result._new(out > 0 if boolean else out, result.dom, cod)


def contract(functor, arrow):
    """Evaluate a layered diagram layer by layer with ``apply_layer``."""
    result = functor.cod.ar.id(functor(arrow.dom))
    for layer in arrow.inside:
        result = apply_layer(result, functor(layer.left), functor(layer.box))
    return result


class Functor(symmetric.Functor):
    """
    Evaluate diagrams as tensors: objects go to dimensions and boxes to
    arrays, given as nested lists or tensors.

    >>> from diagrammar.rigid import Box
    >>> n = Ty('n')
    >>> F = Functor(ob={n: 2}, ar={Box('f', n, n): [[0, 1], [1, 0]]})
    >>> F(Box('f', n, n) >> Box('f', n, n)) == Tensor.id([2])
    True
    """

    dom = core.Category(Ty, symmetric.Diagram)
    cod = core.Category(list, Tensor)

    def __init__(self, ob, ar, dom=None, cod=None, dtype=None):
        if cod is None and dtype is not None:
            cod = core.Category(list, Tensor[dtype])
        super().__init__(ob, ar, dom, cod)

    def map_arrow(self, arrow):
        if issubclass(self.cod.ar, Tensor) and hasattr(arrow.inside[0] if arrow.inside else None, "box"):
            return contract(self, arrow)
        return super().map_arrow(arrow)


Eval = Functor
