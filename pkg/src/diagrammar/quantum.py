"""
Quantum circuits with classical and quantum wires, evaluated either as pure
tensors or as classical-quantum maps where each qudit is doubled.

>>> circuit = Ket(0, 0) >> H @ qubit >> CX >> Measure() @ Measure()
>>> circuit.eval() == Channel([[.5, 0, 0, .5]], CQ(), C([2, 2]))
True
"""

import math

import numpy as np

from diagrammar import core, rigid, symmetric
from diagrammar.affine import AffineExpr, as_expr
from diagrammar.errors import NotPure, TypeMismatch, UnknownBox
from diagrammar.rigid import Ty
from diagrammar.tensor import Tensor, close, contract

ComplexTensor = Tensor[complex]


class CQ:
    """Classical and quantum dimensions, the quantum ones counted twice."""

    def __init__(self, classical=(), quantum=()):
        self.classical, self.quantum = tuple(classical), tuple(quantum)

    def tensor(self, *others):
        result = self
        for other in others:
            result = CQ(result.classical + other.classical, result.quantum + other.quantum)
        return result

    __matmul__ = tensor

    def downgrade(self):
        return list(self.classical + 2 * self.quantum)

    @property
    def l(self):
        return self

    r = l

    def __eq__(self, other):
        return isinstance(other, CQ) and (self.classical, self.quantum) == (other.classical, other.quantum)

    def __hash__(self):
        return hash((self.classical, self.quantum))

    def __repr__(self):
        if not self.quantum:
            return f"C({list(self.classical)})" if self.classical else "CQ()"
        if not self.classical:
            return f"Q({list(self.quantum)})"
        return f"CQ({list(self.classical)}, {list(self.quantum)})"


def C(dims):
    return CQ(classical=dims)


def Q(dims):
    return CQ(quantum=dims)


def _labels(x, tag):
    c, q = len(x.classical), len(x.quantum)
    return ([(tag, "c", i) for i in range(c)] + [(tag, "q", i) for i in range(q)]
            + [(tag, "p", i) for i in range(q)])


def _grouped(x, y):
    """Axis labels of x @ y in the order of its downgrade."""
    lx, ly = _labels(x, 0), _labels(y, 1)
    return ([a for a in lx + ly if a[1] == "c"] + [a for a in lx + ly if a[1] == "q"]
            + [a for a in lx + ly if a[1] == "p"])


def permutation(dims, perm):
    """The tensor sending axis ``perm[k]`` of the domain to axis k of the codomain."""
    dims = list(dims)
    n = len(dims)
    size = math.prod(dims) if dims else 1
    eye = np.eye(size, dtype=complex).reshape(dims + dims)
    axes = list(range(n)) + [n + p for p in perm]
    return ComplexTensor(np.transpose(eye, axes), dims, [dims[p] for p in perm])


class Channel:
    """
    A classical-quantum map, i.e. a complex tensor on downgraded dimensions.
    """

    def __init__(self, inside, dom, cod):
        if not isinstance(inside, Tensor):
            inside = ComplexTensor(inside, dom.downgrade(), cod.downgrade())
        elif inside.dom != dom.downgrade() or inside.cod != cod.downgrade():
            raise TypeMismatch(f"tensor {inside.dom} -> {inside.cod} is not a channel {dom} -> {cod}")
        self.inside = ComplexTensor(inside.array.astype(complex), inside.dom, inside.cod)
        self.dom, self.cod = dom, cod

    @property
    def array(self):
        return self.inside.array

    @classmethod
    def id(cls, x=None):
        x = CQ() if x is None else x
        return cls(ComplexTensor.id(x.downgrade()), x, x)

    @classmethod
    def zero(cls, dom, cod):
        return cls(ComplexTensor.zero(dom.downgrade(), cod.downgrade()), dom, cod)

    def then(self, *others):
        result = self
        for other in others:
            if result.cod != other.dom:
                raise TypeMismatch(f"cannot compose {result.cod} with {other.dom}")
            result = Channel(result.inside >> other.inside, result.dom, other.cod)
        return result

    def __rshift__(self, other):
        return self.then(other)

    def tensor(self, *others):
        result = self
        for other in others:
            kron = result.inside @ other.inside
            dom, cod = result.dom @ other.dom, result.cod @ other.cod
            before = _labels(result.dom, 0) + _labels(other.dom, 1)
            after = _labels(result.cod, 0) + _labels(other.cod, 1)
            dom_perm = [before.index(a) for a in _grouped(result.dom, other.dom)]
            cod_perm = [after.index(a) for a in _grouped(result.cod, other.cod)]
            n = len(before)
            array = kron.array.reshape(kron.dom + kron.cod)
            array = np.transpose(array, dom_perm + [n + p for p in cod_perm])
            result = Channel(array, dom, cod)
        return result

    def __matmul__(self, other):
        return self.tensor(other)

    def __add__(self, other):
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise TypeMismatch("cannot add channels of different types")
        return Channel(self.inside + other.inside, self.dom, self.cod)

    def __mul__(self, scalar):
        return Channel(self.inside * scalar, self.dom, self.cod)

    __rmul__ = __mul__

    def dagger(self):
        return Channel(self.inside.dagger(), self.cod, self.dom)

    @classmethod
    def swap(cls, x, y):
        before = _grouped(x, y)
        after = _grouped(y, x)
        dims = (x @ y).downgrade()
        # relabel so that tags refer to the same systems on both sides
        after = [(1 - tag, kind, i) for tag, kind, i in after]
        return cls(permutation(dims, [before.index(a) for a in after]), x @ y, y @ x)

    braid = swap

    @staticmethod
    def double(f):
        return Channel(f @ f.map(np.conj), Q(f.dom), Q(f.cod))

    @staticmethod
    def single(f):
        return Channel(ComplexTensor(f.array, f.dom, f.cod), C(f.dom), C(f.cod))

    @staticmethod
    def measure(x):
        return Channel(ComplexTensor.spiders(2, 1, list(x)), Q(x), C(x))

    @staticmethod
    def encode(x):
        return Channel(ComplexTensor.spiders(1, 2, list(x)), C(x), Q(x))

    @staticmethod
    def discard(x):
        # the trace pairs each quantum dimension with its conjugate copy
        size = math.prod(x.quantum) if x.quantum else 1
        trace = ComplexTensor(np.eye(size).ravel(), 2 * list(x.quantum), [])
        inside = ComplexTensor.spiders(1, 0, list(x.classical)) @ trace
        return Channel(inside, x, CQ())

    @staticmethod
    def mixed_state(x):
        return Channel.discard(x).dagger()

    def is_causal(self):
        return self >> Channel.discard(self.cod) == Channel.discard(self.dom)

    def __eq__(self, other):
        if not isinstance(other, Channel):
            return NotImplemented
        return (self.dom, self.cod) == (other.dom, other.cod) \
            and close(self.array, other.array)

    def __repr__(self):
        return f"Channel({self.array.tolist()}, {self.dom!r}, {self.cod!r})"


double, single = Channel.double, Channel.single
measure, encode = Channel.measure, Channel.encode
discard, mixed_state = Channel.discard, Channel.mixed_state


def is_causal(channel):
    """Discarding the outputs is the same as discarding the inputs."""
    return channel.is_causal()


class Digit(rigid.Ob):
    """A classical system with ``n`` states, its own adjoint."""

    def __init__(self, n, z=0):
        self.n = n
        super().__init__("bit" if n == 2 else f"Digit({n})")

    l = r = property(lambda self: self)

    def __repr__(self):
        return f"Digit({self.n})"


class Qudit(rigid.Ob):
    """A quantum system of dimension ``n``, its own adjoint."""

    def __init__(self, n, z=0):
        self.n = n
        super().__init__("qubit" if n == 2 else f"Qudit({n})")

    l = r = property(lambda self: self)

    def __repr__(self):
        return f"Qudit({self.n})"


bit, qubit = Ty(Digit(2)), Ty(Qudit(2))


def _box_is_pure(box):
    if isinstance(box, core.Bubble):
        return is_pure(box.inner)
    return getattr(box, "is_pure", True)


def is_pure(circuit):
    if isinstance(circuit, core.Sum):
        return all(is_pure(term) for term in circuit.terms)
    objects = (circuit.dom @ circuit.cod).inside
    return all(_box_is_pure(box) for box in circuit.boxes) \
        and all(isinstance(ob, Qudit) for ob in objects)


class Circuit(symmetric.Diagram):
    """A diagram of qudits, digits and the gates below."""

    @property
    def is_pure(self):
        return is_pure(self)

    @classmethod
    def cups(cls, x, y):
        return rigid.nesting(cls, lambda a, b: bell(a, b).dagger(), x, y, cups=True)

    @classmethod
    def caps(cls, x, y):
        return rigid.nesting(cls, bell, x, y, cups=False)

    def eval(self, assignment=None, mixed=True):
        if not mixed and self.is_pure:
            return pure_eval(self, assignment)
        return mixed_eval(self, assignment)

    @property
    def free_variables(self):
        return set().union(*(box.free_variables for box in self.boxes
                             if hasattr(box, "free_variables")))


Circuit.factory = Circuit


class Box(symmetric.Box, Circuit):
    is_pure = True

    __eq__, __hash__ = symmetric.Box.__eq__, symmetric.Box.__hash__
    __repr__, __str__ = symmetric.Box.__repr__, symmetric.Box.__str__

    @property
    def free_variables(self):
        return set(getattr(self.data, "free_variables", ()))


Box.box_factory = Box


class Gate(Box):
    """A box with a unitary matrix as pure interpretation."""

    def __init__(self, name, dom, cod, array, is_dagger=False, data=None):
        self._array = np.asarray(array, dtype=complex)
        Box.__init__(self, name, dom, cod, is_dagger=is_dagger, data=data)

    def matrix(self, assignment=None):
        return self._array.conj().T if self.is_dagger else self._array

    @property
    def array(self):
        return self.matrix()

    def dagger(self):
        return Gate(self.name, self.cod, self.dom, self._array, not self.is_dagger, self.data)

    def __repr__(self):
        if self.name in GATES:
            return self.name + ("[::-1]" if self.is_dagger else "")
        return Box.__repr__(self)


class Rotation(Gate):
    """A one-qubit rotation by an affine phase, in half turns."""

    def __init__(self, phase):
        phase = as_expr(phase)
        self.phase = phase
        Gate.__init__(self, f"{type(self).__name__}({phase})", qubit, qubit, np.eye(2), data=phase)

    @property
    def free_variables(self):
        return self.phase.free_variables

    def matrix(self, assignment=None):
        return rotation_matrix(type(self).__name__, self.phase.eval(assignment))

    def dagger(self):
        return type(self)(-self.phase)

    def shift(self, delta):
        return type(self)(self.phase + delta)

    def __repr__(self):
        return f"{type(self).__name__}({self.phase})"


def rotation_matrix(kind, value):
    half_theta = math.pi * value
    rz = np.array([[np.exp(-1j * half_theta), 0], [0, np.exp(1j * half_theta)]])
    if kind == "Rz":
        return rz
    return HADAMARD @ rz @ HADAMARD


class Rz(Rotation):
    pass


class Rx(Rotation):
    pass


class Ket(Box):
    def __init__(self, *digits, base=2):
        self.digits, self.base = tuple(digits), base
        if any(not 0 <= d < base for d in digits):
            raise ValueError(f"digits {digits} out of range for base {base}")
        Box.__init__(self, f"Ket({', '.join(map(str, digits))})", Ty(), Ty(*[Qudit(base)] * len(digits)))

    def matrix(self, assignment=None):
        vector = np.zeros(self.base ** len(self.digits), dtype=complex)
        vector[int("".join(map(str, self.digits)) or "0", self.base) if self.digits else 0] = 1
        return vector.reshape(1, -1)

    def dagger(self):
        return Bra(*self.digits, base=self.base)

    def __repr__(self):
        return self.name


class Bra(Box):
    def __init__(self, *digits, base=2):
        self.digits, self.base = tuple(digits), base
        Box.__init__(self, f"Bra({', '.join(map(str, digits))})", Ty(*[Qudit(base)] * len(digits)), Ty())

    def matrix(self, assignment=None):
        return Ket(*self.digits, base=self.base).matrix().T

    def dagger(self):
        return Ket(*self.digits, base=self.base)

    def __repr__(self):
        return self.name


class Sqrt(Gate):
    """The pure scalar sqrt(x), squared by the Born rule."""

    def __init__(self, x):
        self.x = x
        Gate.__init__(self, f"Sqrt({x})", Ty(), Ty(), [[math.sqrt(x)]], data=x)

    def dagger(self):
        return self

    def __repr__(self):
        return self.name


class Scalar(Box):
    """A scalar, applied after the Born rule unless ``is_pure``."""

    def __init__(self, z, is_pure=False):
        self.z, self.is_pure = z, is_pure
        Box.__init__(self, f"Scalar({z}, is_pure={is_pure})", Ty(), Ty(), data=(z, is_pure))

    def matrix(self, assignment=None):
        if not self.is_pure:
            raise NotPure(f"{self} is a mixed scalar")
        return np.array([[self.z]], dtype=complex)

    def dagger(self):
        return Scalar(np.conj(self.z) if isinstance(self.z, complex) else self.z, self.is_pure)

    def __repr__(self):
        return self.name


class Measure(Box):
    is_pure = False

    def __init__(self, dom=None):
        dom = qubit if dom is None else dom
        obj, = dom.inside
        if not isinstance(obj, Qudit):
            raise TypeMismatch(f"cannot measure {dom}")
        Box.__init__(self, f"Measure({obj.n})", dom, Ty(Digit(obj.n)))

    def dagger(self):
        return Encode(self.cod)

    def __repr__(self):
        return "Measure()" if self.dom == qubit else f"Measure({self.dom!r})"


class Encode(Box):
    is_pure = False

    def __init__(self, dom=None):
        dom = bit if dom is None else dom
        obj, = dom.inside
        if not isinstance(obj, Digit):
            raise TypeMismatch(f"cannot encode {dom}")
        Box.__init__(self, f"Encode({obj.n})", dom, Ty(Qudit(obj.n)))

    def dagger(self):
        return Measure(self.cod)

    def __repr__(self):
        return "Encode()" if self.dom == bit else f"Encode({self.dom!r})"


class Discard(Box):
    is_pure = False

    def __init__(self, x=None):
        x = qubit if x is None else x
        Box.__init__(self, f"Discard({x})", x, Ty())

    def dagger(self):
        return MixedState(self.dom)

    def __repr__(self):
        return f"Discard({self.dom!r})"


class MixedState(Box):
    is_pure = False

    def __init__(self, x=None):
        x = qubit if x is None else x
        Box.__init__(self, f"MixedState({x})", Ty(), x)

    def dagger(self):
        return Discard(self.cod)

    def __repr__(self):
        return f"MixedState({self.cod!r})"


HADAMARD = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
X = Gate("X", qubit, qubit, [[0, 1], [1, 0]])
Y = Gate("Y", qubit, qubit, [[0, -1j], [1j, 0]])
Z = Gate("Z", qubit, qubit, [[1, 0], [0, -1]])
H = Gate("H", qubit, qubit, HADAMARD)
CX = Gate("CX", qubit ** 2, qubit ** 2, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
GATES = {"X": X, "Y": Y, "Z": Z, "H": H, "CX": CX}


def bell(left, right):
    """The scaled Bell state on two qubits."""
    if left != qubit or right != qubit:
        raise NotImplementedError(f"no Bell state on {left} and {right}")
    return Sqrt(2) @ Ket(0, 0) >> H @ qubit >> CX


def _dims(ob):
    if isinstance(ob, (Digit, Qudit)):
        return ob.n
    raise TypeMismatch(f"{ob} is not a digit or qudit")


class PureEval(symmetric.Functor):
    """Circuits to complex tensors, for circuits without measurements."""

    dom = core.Category(Ty, Circuit)
    cod = core.Category(list, ComplexTensor)

    def __init__(self, assignment=None):
        super().__init__(ob={}, ar={})
        self.assignment = assignment or {}

    def map_simple_ob(self, ob):
        return [_dims(ob)]

    def map_box(self, box):
        if isinstance(box, (symmetric.Braid, symmetric.Spider, symmetric.Copy, symmetric.Merge)):
            return symmetric.Functor.map_box(self, box)
        if not _box_is_pure(box):
            raise NotPure(f"{box} has no pure interpretation")
        if hasattr(box, "matrix"):
            return ComplexTensor(box.matrix(self.assignment), self(box.dom), self(box.cod))
        raise UnknownBox(f"no pure interpretation for {box}")

    def map_arrow(self, arrow):
        return contract(self, arrow)


class MixedEval(symmetric.Functor):
    """Circuits to classical-quantum maps, doubling every pure gate."""

    dom = core.Category(Ty, Circuit)
    cod = core.Category(CQ, Channel)

    def __init__(self, assignment=None):
        super().__init__(ob={}, ar={})
        self.assignment = assignment or {}

    def map_simple_ob(self, ob):
        if isinstance(ob, Qudit):
            return Q([ob.n])
        if isinstance(ob, Digit):
            return C([ob.n])
        raise TypeMismatch(f"{ob} is not a digit or qudit")

    def map_box(self, box):
        if isinstance(box, symmetric.Braid):
            return symmetric.Functor.map_box(self, box)
        if isinstance(box, Scalar) and not box.is_pure:
            return Channel([[box.z]], CQ(), CQ())
        if isinstance(box, Measure):
            return Channel.measure([box.dom.inside[0].n])
        if isinstance(box, Encode):
            return Channel.encode([box.dom.inside[0].n])
        if isinstance(box, Discard):
            return Channel.discard(self(box.dom))
        if isinstance(box, MixedState):
            return Channel.mixed_state(self(box.cod))
        if isinstance(box, core.Bubble):
            return core.Functor.map_bubble(self, box)
        if hasattr(box, "matrix"):
            return Channel.double(PureEval(self.assignment)(box))
        raise UnknownBox(f"no interpretation for {box}")


def pure_eval(circuit, assignment=None):
    if not is_pure(circuit):
        raise NotPure("the circuit has measurements, mixed scalars or classical wires")
    return PureEval(assignment)(circuit)


def mixed_eval(circuit, assignment=None):
    return MixedEval(assignment)(circuit)


def probabilities(circuit, assignment=None):
    """The flattened distribution of a circuit with only classical outputs."""
    return np.real(mixed_eval(circuit, assignment).array).ravel()


def random_circuit(rng, n_qubits, depth, variables=(), pure=True):
    """A random circuit from the gateset, phases affine in ``variables``."""
    circuit = Circuit.id(Ty()) >> Ket(*[0] * n_qubits)
    for _ in range(depth):
        choice = rng.randrange(6 if n_qubits > 1 else 5)
        i = rng.randrange(n_qubits)
        if choice < 3:
            gate = [X, Y, Z, H][rng.randrange(4)]
        elif choice < 5:
            phase = AffineExpr(round(rng.uniform(-1, 1), 3),
                               {v: round(rng.uniform(-2, 2), 3) for v in variables if rng.random() < .7})
            gate = (Rz if choice == 3 else Rx)(phase)
        else:
            i = rng.randrange(n_qubits - 1)
            gate = CX
        circuit = circuit >> qubit ** i @ gate @ qubit ** (n_qubits - i - len(gate.dom))
    if not pure:
        measured = Circuit.id(Ty())
        for _ in range(n_qubits):
            measured = measured @ Measure()
        circuit = circuit >> measured
    return circuit


def strip_scalars(circuit):
    """
    Remove the scalar boxes of a circuit. Returns the remaining circuit and
    the factor they contribute to its mixed evaluation.
    """
    pairs, factor = [], 1.0
    for box, offset in zip(circuit.boxes, circuit.offsets):
        if len(box.dom) == 0 and len(box.cod) == 0 and isinstance(box, (Sqrt, Scalar)):
            if isinstance(box, Sqrt):
                factor *= box.x
            else:
                factor *= abs(box.z) ** 2 if box.is_pure else box.z
            continue
        pairs.append((box, offset))
    return Circuit.decode(circuit.dom, pairs), factor


def post_selection_probability(circuit, assignment=None):
    """
    The probability that a closed circuit's effects all succeed, with its
    scalars removed: the effects are doubled into projectors.
    """
    stripped, factor = strip_scalars(circuit)
    value = mixed_eval(stripped, assignment).array
    if value.size != 1:
        raise TypeMismatch("expected a closed circuit")
    return float(np.real(value.item())), factor


def closed_value(circuit, assignment=None):
    """
    The mixed evaluation of a closed circuit as a number. Pure parts are
    evaluated as amplitudes and doubled by taking the squared modulus, which
    avoids building density matrices.
    """
    stripped, factor = strip_scalars(circuit)
    if len(stripped.dom) or len(stripped.cod):
        raise TypeMismatch("expected a closed circuit")
    if is_pure(stripped):
        amplitude = pure_eval(stripped, assignment).array.item()
        return factor * abs(amplitude) ** 2
    return factor * mixed_eval(stripped, assignment).array.item()
