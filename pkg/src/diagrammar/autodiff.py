"""
Derivatives of diagrams with respect to a named variable: formal sums by
the product rule, the parameter-shift recipe for rotations, a forward-mode
tensor evaluation with chain rules for bubbles, a finite-difference oracle
and a small variational trainer.

>>> from diagrammar.quantum import Ket, Measure, Rz, Rx
>>> from diagrammar.affine import Var
>>> circuit = Ket(0) >> Rx(Var('v')) >> Measure()
>>> exact = grad_mixed_eval(circuit, 'v', {'v': .3}).array
>>> approx = finite_difference(lambda a: mixed_eval(circuit, a).array, 'v', {'v': .3})
>>> bool(abs(exact - approx).max() < 1e-6)
True
"""

import csv
import math

import numpy as np

from diagrammar import core, rigid, symmetric
from diagrammar.core import Sum
from diagrammar.errors import EmptyData, NoRecipe, UnknownMethod
from diagrammar.quantum import (
    Channel, Circuit, HADAMARD, closed_value, Ket, PureEval, Rotation, Rx, Rz, Scalar, X,
    mixed_eval, qubit, rotation_matrix)
from diagrammar.rigid import Ty
from diagrammar.tensor import Tensor, logistic

ComplexTensor = Tensor[complex]


def shift_recipe(gate, var):
    """
    The derivative of a rotation as a difference of shifted rotations,
    valid once doubled: pi * d(phase) * (R(phase + 1/4) - R(phase - 1/4)).
    """
    coefficient = gate.phase.diff(var)
    if coefficient == 0:
        return Sum([], gate.dom, gate.cod)
    scale = Scalar(math.pi * coefficient)
    return Sum([scale @ gate.shift(.25), scale @ Scalar(-1) @ gate.shift(-.25)])


RECIPES = {Rz: shift_recipe, Rx: shift_recipe}


def register_recipe(cls, recipe):
    RECIPES[cls] = recipe


def free_variables(box):
    if isinstance(box, core.Bubble):
        inner = box.inner
        terms = inner.terms if isinstance(inner, Sum) else [inner]
        return set().union(*(free_variables(b) for t in terms for b in t.boxes))
    found = getattr(box, "free_variables", None)
    if found is not None:
        return set(found)
    data = box.data
    return set(getattr(data, "free_variables", set()))


def box_grad(box, var):
    """The gradient of a single box, an empty sum when it is constant."""
    if var not in free_variables(box):
        return Sum([], box.dom, box.cod)
    for cls in type(box).__mro__:
        if cls in RECIPES:
            return RECIPES[cls](box, var)
    raise NoRecipe(f"no gradient recipe for {box}")


class DualDiagram:
    """
    A diagram plus an epsilon part, both formal sums. Composition and tensor
    follow the product rule and epsilon squared vanishes.
    """

    def __init__(self, real, epsilon):
        self.real = real if isinstance(real, Sum) else Sum([real])
        self.epsilon = epsilon if isinstance(epsilon, Sum) else Sum([epsilon])

    @property
    def dom(self):
        return self.real.dom

    @property
    def cod(self):
        return self.real.cod

    @classmethod
    def lift(cls, box, var):
        return cls(box, box_grad(box, var))

    def then(self, other):
        epsilon = _add(_compose(self.epsilon, other.real), _compose(self.real, other.epsilon))
        return DualDiagram(self.real >> other.real, epsilon)

    __rshift__ = then

    def tensor(self, other):
        epsilon = _add(_tensor(self.epsilon, other.real), _tensor(self.real, other.epsilon))
        return DualDiagram(self.real @ other.real, epsilon)

    __matmul__ = tensor


def _compose(f, g):
    if not f.terms or not g.terms:
        return Sum([], f.dom, g.cod)
    return f >> g


def _tensor(f, g):
    if not f.terms or not g.terms:
        return Sum([], f.dom @ g.dom, f.cod @ g.cod)
    return f @ g


def _add(f, g):
    return Sum(f.terms + g.terms, f.dom, f.cod)


def grad(diagram, var):
    """
    The formal derivative of a diagram: one term per occurrence of a box
    that depends on ``var``, the box replaced by its recipe.
    """
    if isinstance(diagram, Sum):
        terms = [t for term in diagram.terms for t in grad(term, var).terms]
        return Sum(terms, diagram.dom, diagram.cod)
    terms = []
    for i, layer in enumerate(diagram.inside):
        derivative = box_grad(layer.box, var)
        if not derivative.terms:
            continue
        middle = layer.left @ derivative @ layer.right
        terms += (diagram[:i] >> middle >> diagram[i + 1:]).terms
    return Sum(terms, diagram.dom, diagram.cod)


def dual_grad(diagram, var):
    """The same derivative, computed by folding dual diagrams layer by layer."""
    result = DualDiagram(diagram.id(diagram.dom), Sum([], diagram.dom, diagram.dom))
    for layer in diagram.inside:
        left, right = diagram.id(layer.left), diagram.id(layer.right)
        lifted = DualDiagram(left, Sum([], left.dom, left.cod)) \
            @ DualDiagram.lift(layer.box, var) \
            @ DualDiagram(right, Sum([], right.dom, right.cod))
        result = result >> lifted
    return result.epsilon


def grad_mixed_eval(circuit, var, assignment=None):
    derivative = grad(circuit, var)
    if not derivative.terms:
        F = mixed_eval(circuit.id(circuit.dom), assignment)
        G = mixed_eval(circuit.id(circuit.cod), assignment)
        return Channel.zero(F.dom, G.cod)
    return mixed_eval(derivative, assignment)


def finite_difference(function, var, assignment, h=1e-4):
    """Central differences of an array-valued function of the assignment."""
    up, down = dict(assignment), dict(assignment)
    up[var] = assignment[var] + h
    down[var] = assignment[var] - h
    return (np.asarray(function(up)) - np.asarray(function(down))) / (2 * h)


# forward mode on tensors

class DualTensor:
    """A complex tensor with its derivative, composed by the product rule."""

    def __init__(self, real, epsilon=None):
        self.real = real
        self.epsilon = ComplexTensor.zero(real.dom, real.cod) if epsilon is None else epsilon

    @property
    def dom(self):
        return self.real.dom

    @property
    def cod(self):
        return self.real.cod

    @classmethod
    def constant(cls, tensor):
        return cls(ComplexTensor(tensor.array, tensor.dom, tensor.cod))

    @classmethod
    def id(cls, x=()):
        return cls.constant(ComplexTensor.id(x))

    @classmethod
    def zero(cls, dom, cod):
        return cls.constant(ComplexTensor.zero(dom, cod))

    @classmethod
    def swap(cls, x, y):
        return cls.constant(ComplexTensor.swap(x, y))

    braid = swap

    @classmethod
    def cups(cls, x, y):
        return cls.constant(ComplexTensor.cups(x, y))

    @classmethod
    def caps(cls, x, y):
        return cls.constant(ComplexTensor.caps(x, y))

    @classmethod
    def spiders(cls, a, b, x, phase=None):
        return cls.constant(ComplexTensor.spiders(a, b, x, phase))

    def then(self, other):
        return DualTensor(self.real >> other.real,
                          (self.epsilon >> other.real) + (self.real >> other.epsilon))

    __rshift__ = then

    def tensor(self, other):
        return DualTensor(self.real @ other.real,
                          (self.epsilon @ other.real) + (self.real @ other.epsilon))

    __matmul__ = tensor

    def __add__(self, other):
        return DualTensor(self.real + other.real, self.epsilon + other.epsilon)

    def dagger(self):
        return DualTensor(self.real.dagger(), self.epsilon.dagger())

    def _elementwise(self, value, derivative):
        f, df = self.real.array, self.epsilon.array
        real = ComplexTensor(value(f), self.dom, self.cod)
        return DualTensor(real, ComplexTensor(derivative(f, df), self.dom, self.cod))

    # chain rules, one per bubble operator
    def identity(self, dom=None, cod=None):
        return self

    def squared_amplitude(self, dom=None, cod=None):
        return self._elementwise(lambda f: np.abs(f) ** 2,
                                 lambda f, df: 2 * np.real(np.conj(f) * df))

    def logistic(self, dom=None, cod=None):
        def derivative(f, df):
            s = logistic(np.real(f))
            return s * (1 - s) * np.real(df)
        return self._elementwise(lambda f: logistic(np.real(f)), derivative)

    def relu(self, dom=None, cod=None):
        return self._elementwise(lambda f: np.maximum(np.real(f), 0),
                                 lambda f, df: (np.real(f) > 0) * np.real(df))


CHAIN_RULES = ("identity", "squared_amplitude", "logistic", "relu")


def rotation_derivative(gate, var, assignment):
    value = gate.phase.eval(assignment)
    coefficient = gate.phase.diff(var)
    half_theta = math.pi * value
    d_rz = math.pi * coefficient * np.array(
        [[-1j * np.exp(-1j * half_theta), 0], [0, 1j * np.exp(1j * half_theta)]])
    if isinstance(gate, Rz):
        return d_rz
    return HADAMARD @ d_rz @ HADAMARD


class DualEval(symmetric.Functor):
    """Pure circuits to tensors with their derivative in ``var``."""

    dom = core.Category(Ty, Circuit)
    cod = core.Category(list, DualTensor)

    def __init__(self, var, assignment=None):
        super().__init__(ob={}, ar={})
        self.var, self.assignment = var, assignment or {}
        self.pure = PureEval(self.assignment)

    def map_simple_ob(self, ob):
        return self.pure.map_simple_ob(ob)

    def map_box(self, box):
        if isinstance(box, (symmetric.Braid, symmetric.Spider)):
            return symmetric.Functor.map_box(self, box)
        if isinstance(box, core.Bubble):
            inner = self(box.inner)
            if box.method not in CHAIN_RULES:
                raise UnknownMethod(f"no chain rule for {box.method!r}")
            return getattr(inner, box.method)()
        value = self.pure(box)
        if isinstance(box, Rotation):
            derivative = ComplexTensor(rotation_derivative(box, self.var, self.assignment),
                                       value.dom, value.cod)
            return DualTensor(value, derivative)
        if self.var in free_variables(box):
            raise NoRecipe(f"no derivative for {box}")
        return DualTensor.constant(value)


def dual_eval(diagram, var, assignment=None):
    return DualEval(var, assignment)(diagram)


def bubble_grad(diagram, var, assignment=None):
    """The derivative of a pure expression with bubbles, by the chain rule."""
    return dual_eval(diagram, var, assignment).epsilon


# training

def default_ansatz(word, ty, ob):
    """
    One parameter per word: the first qubit is rotated by Rx of a variable
    named after the word and the other qubits are flipped.
    """
    width = len(rigid.Functor(ob=ob, ar={}, cod=core.Category(Ty, Circuit))(ty))
    if width == 0:
        return Circuit.id(Ty())
    rotate, flips = Rx(_var(word)), Circuit.id(qubit)
    for _ in range(width - 1):
        rotate, flips = rotate @ qubit, flips @ X
    return Ket(*[0] * width) >> rotate >> flips


def _var(name):
    from diagrammar.affine import Var
    return Var(name)


class Model:
    """
    A parameterised functor from grammatical structures to circuits, the
    probability of a sentence being its mixed evaluation.
    """

    def __init__(self, dictionary, ob=None, ansatz=default_ansatz):
        self.dictionary = dictionary
        self.ob = ob or {Ty('n'): qubit, dictionary.sentence: Ty()}
        self.ansatz = ansatz
        self._grads = {}
        self.functor = rigid.Functor(
            ob=self.ob, ar=lambda word: self.ansatz(word.name, word.cod, self.ob),
            cod=core.Category(Ty, Circuit))

    @property
    def variables(self):
        return sorted(self.dictionary.entries)

    def circuit(self, diagram):
        return self.functor(diagram)

    def probability(self, circuit, params):
        return float(np.real(closed_value(circuit, params)))

    def probability_grad(self, circuit, var, params):
        key = id(circuit), var
        if key not in self._grads:
            self._grads[key] = circuit, grad(circuit, var).terms
        terms = self._grads[key][1]
        return float(np.real(sum(closed_value(term, params) for term in terms)))


def compile_data(model, data):
    from diagrammar.grammar import parse
    compiled = []
    for sentence, label in data:
        parses = parse(model.dictionary, sentence)
        if not parses:
            raise ValueError(f"{sentence!r} is not grammatical")
        compiled.append((model.circuit(parses[0]), float(label)))
    return compiled


def loss(model, compiled, params):
    return sum((model.probability(c, params) - label) ** 2 for c, label in compiled)


def loss_grad(model, compiled, params):
    result = {}
    errors = [model.probability(c, params) - label for c, label in compiled]
    for var in params:
        result[var] = sum(2 * e * model.probability_grad(c, var, params)
                          for e, (c, _) in zip(errors, compiled))
    return result


def train(model, data, epochs, seed, optimizer="gradient-descent", learning_rate=0.05,
          a=0.1, c=0.1, alpha=0.602, gamma=0.101):
    """
    Fit the parameters to (sentence, label) pairs. Returns the parameters and
    the loss before each step and after the last one.
    """
    if not data:
        raise EmptyData("no training data")
    rng = np.random.default_rng(seed)
    compiled = compile_data(model, data)
    used = sorted({v for circuit, _ in compiled for v in circuit.free_variables})
    params = {v: float(rng.uniform(0, 1)) for v in used}
    trace = [loss(model, compiled, params)]
    for k in range(epochs):
        if optimizer in ("gradient-descent", "gd"):
            gradient = loss_grad(model, compiled, params)
            params = {v: params[v] - learning_rate * gradient[v] for v in used}
        elif optimizer == "spsa":
            ak, ck = a / (k + 1) ** alpha, c / (k + 1) ** gamma
            delta = rng.choice([-1.0, 1.0], size=len(used))
            plus = {v: params[v] + ck * d for v, d in zip(used, delta)}
            minus = {v: params[v] - ck * d for v, d in zip(used, delta)}
            slope = (loss(model, compiled, plus) - loss(model, compiled, minus)) / (2 * ck)
            params = {v: params[v] - ak * slope / d for v, d in zip(used, delta)}
        else:
            raise ValueError(f"unknown optimizer {optimizer!r}")
        trace.append(loss(model, compiled, params))
    return params, trace


def write_trace(path, trace):
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["iteration", "loss"])
        for i, value in enumerate(trace):
            writer.writerow([i, repr(float(value))])


def read_corpus(text):
    """``sentence<TAB>label`` lines, ``#`` comments allowed."""
    data = []
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "\t" not in line:
            raise ValueError(f"line {number}: expected sentence<TAB>label")
        sentence, label = line.rsplit("\t", 1)
        data.append((sentence.strip(), int(label)))
    return data
