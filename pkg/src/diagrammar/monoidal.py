"""
Free monoidal categories: types are lists of objects and diagrams are lists
of layers, each layer a single box with identity wires on both sides.

>>> x, y, z, w = map(Ty, "xyzw")
>>> f, g = Box('f', x, y), Box('g', z, w)
>>> [(str(layer.left), layer.box.name, str(layer.right)) for layer in f @ g]
[('Ty()', 'f', 'z'), ('y', 'g', 'Ty()')]
"""

from diagrammar import core
from diagrammar.core import Ob, Sum
from diagrammar.errors import Connected, Disconnected, IllTyped, TypeMismatch


class Ty:
    """
    A type, i.e. a list of generating objects. Strings are turned into objects
    with ``ob_factory``.

    >>> x, y = Ty('x'), Ty('y')
    >>> (x @ y)[1:] == y and x @ Ty() == x
    True
    """

    ob_factory = Ob

    def __init__(self, *inside):
        self.inside = tuple(ob if isinstance(ob, Ob) else self.ob_factory(ob) for ob in inside)

    def tensor(self, *others):
        result = self
        for other in others:
            if not isinstance(other, Ty):
                return NotImplemented
            cls = type(other) if issubclass(type(other), type(result)) else type(result)
            result = cls(*(result.inside + other.inside))
        return result

    def __matmul__(self, other):
        return self.tensor(other)

    def __pow__(self, n):
        return type(self)(*(self.inside * n))

    @property
    def l(self):
        return type(self)(*[ob.l for ob in reversed(self.inside)])

    @property
    def r(self):
        return type(self)(*[ob.r for ob in reversed(self.inside)])

    def __len__(self):
        return len(self.inside)

    def __iter__(self):
        return (type(self)(ob) for ob in self.inside)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return type(self)(*self.inside[key])
        return type(self)(self.inside[key])

    def __eq__(self, other):
        if not isinstance(other, Ty):
            return NotImplemented
        return self.inside == other.inside

    def __hash__(self):
        return hash(self.inside)

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(map(repr, self.inside))})"

    def __str__(self):
        return " @ ".join(map(str, self.inside)) or "Ty()"

    def count(self, obj):
        return sum(1 for ob in self if ob == obj)


class Layer:
    """A box with a type on either side."""

    def __init__(self, left, box, right):
        self.left, self.box, self.right = left, box, right

    @property
    def dom(self):
        return self.left @ self.box.dom @ self.right

    @property
    def cod(self):
        return self.left @ self.box.cod @ self.right

    def dagger(self):
        return Layer(self.left, self.box.dagger(), self.right)

    def __iter__(self):
        yield from (self.left, self.box, self.right)

    def __eq__(self, other):
        return isinstance(other, Layer) and tuple(self) == tuple(other)

    def __hash__(self):
        return hash(self.box)

    def __repr__(self):
        return f"Layer({self.left!r}, {self.box!r}, {self.right!r})"

    def __str__(self):
        parts = [str(t) for t in (self.left, ) if len(t)] + [str(self.box)]
        return " @ ".join(parts + [str(t) for t in (self.right, ) if len(t)])


def as_diagram(cls, other):
    return cls.id(other) if isinstance(other, Ty) else other


class Diagram(core.Arrow):
    """A domain type with a list of layers."""

    ty_factory = Ty

    def __init__(self, inside, dom, cod, _scan=True):
        core.Arrow.__init__(self, inside, dom, cod, _scan)

    @classmethod
    def id(cls, dom=None):
        dom = cls.ty_factory() if dom is None else dom
        return cls.factory((), dom, dom, _scan=False)

    @property
    def boxes(self):
        return [layer.box for layer in self.inside]

    @property
    def offsets(self):
        return [len(layer.left) for layer in self.inside]

    def then(self, *others):
        return core.Arrow.then(self, *others)

    def __rshift__(self, other):
        return self.then(as_diagram(type(self), other))

    def __rrshift__(self, other):
        return as_diagram(type(self), other).then(self)

    def whisker(self, left, right):
        return self.factory(
            [Layer(left @ lay.left, lay.box, lay.right @ right) for lay in self.inside],
            left @ self.dom @ right, left @ self.cod @ right, _scan=False)

    def tensor(self, *others):
        result = self
        for other in others:
            if isinstance(other, Sum):
                result = Sum([result]).tensor(other)
                continue
            other = as_diagram(type(result), other)
            unit = type(result.dom)()
            result = result.whisker(unit, other.dom).then(other.whisker(result.cod, unit))
        return result

    def __matmul__(self, other):
        if not isinstance(other, (Ty, Diagram, Sum)):
            return NotImplemented
        return self.tensor(other)

    def __rmatmul__(self, other):
        if not isinstance(other, Ty):
            return NotImplemented
        return self.id(other).tensor(self)

    def __repr__(self):
        if not self.inside:
            return f"{type(self).__name__}.id({self.dom!r})"
        pairs = ", ".join(f"({layer.box!r}, {len(layer.left)})" for layer in self.inside)
        return f"{type(self).__name__}.decode({self.dom!r}, [{pairs}])"

    def __str__(self):
        if not self.inside:
            return f"id({self.dom})"
        return " >> ".join(map(str, self.inside))

    def interchange(self, i, left=False):
        """
        Swap the boxes at layers ``i`` and ``i + 1`` when they are not
        connected. When an effect is followed by a state both directions are
        possible, ``left`` picks the one that moves the state to the right.
        """
        if not 0 <= i < len(self) - 1:
            raise IndexError(f"no layers {i} and {i + 1} in a diagram of length {len(self)}")
        boxes, offsets = self.boxes, self.offsets
        swapped = swap_layers(boxes[i], offsets[i], boxes[i + 1], offsets[i + 1], left)
        if swapped is None:
            raise Connected(f"boxes {i} and {i + 1} are connected")
        (b0, o0), (b1, o1) = swapped
        pairs = list(zip(boxes, offsets))
        pairs[i:i + 2] = [(b0, o0), (b1, o1)]
        return self.decode(self.dom, pairs)

    def normalize(self, left=False):
        """Yield the successive rewrites towards the normal form."""
        boxes, offsets = self.boxes, self.offsets
        order = list(range(len(boxes)))
        seen = {(tuple(order), tuple(offsets))}
        while True:
            for i in range(len(boxes) - 1):
                if can_move_up(boxes[i], offsets[i], boxes[i + 1], offsets[i + 1], left):
                    (b0, o0), (b1, o1) = swap_layers(
                        boxes[i], offsets[i], boxes[i + 1], offsets[i + 1], left)
                    boxes[i:i + 2], offsets[i:i + 2] = [b0, b1], [o0, o1]
                    order[i:i + 2] = order[i + 1], order[i]
                    break
            else:
                return
            key = (tuple(order), tuple(offsets))
            if key in seen:
                raise Disconnected("interchanger rewriting loops: the diagram is disconnected")
            seen.add(key)
            yield self.decode(self.dom, list(zip(boxes, offsets)))

    def normal_form(self, left=False):
        result = self
        for result in self.normalize(left):
            pass
        return result

    def encode(self):
        return self.dom, list(zip(self.boxes, self.offsets))

    @classmethod
    def decode(cls, dom, pairs):
        layers, cod = [], dom
        for step, (box, offset) in enumerate(pairs):
            if offset < 0 or cod[offset:offset + len(box.dom)] != box.dom \
                    or offset + len(box.dom) > len(cod):
                raise IllTyped(f"step {step}: {box} does not fit at offset {offset} of {cod}")
            layer = Layer(cod[:offset], box, cod[offset + len(box.dom):])
            layers.append(layer)
            cod = layer.cod
        return cls.factory(layers, dom, cod, _scan=False)

    def match(self, pattern):
        """Yield every occurrence of ``pattern`` as a subdiagram, on the nose."""
        types = [layer.dom for layer in self.inside] + [self.cod]
        for i in range(len(self) - len(pattern) + 1):
            for j in range(len(types[i]) - len(pattern.dom) + 1):
                left, right = types[i][:j], types[i][j + len(pattern.dom):]
                bottom_dom = types[i + len(pattern)]
                if left @ pattern.dom @ right != types[i] \
                        or left @ pattern.cod @ right != bottom_dom:
                    continue
                found = Match(self[:i], self[i + len(pattern):], left, right)
                if found.subs(pattern) == self:
                    yield found

    def __getitem__(self, key):
        if isinstance(key, slice) and not self.inside:
            return self
        return core.Arrow.__getitem__(self, key)

    def bubble(self, **params):
        return Bubble(self, **params)

    def depth(self):
        return len(self)


Diagram.factory = Diagram


def can_move_up(b0, o0, b1, o1, left=False):
    """Whether the normal form rewrite applies to this pair of layers."""
    if left:
        return o1 >= o0 + len(b0.cod)
    return o1 + len(b1.dom) <= o0


def swap_layers(b0, o0, b1, o1, left=False):
    """Interchange two consecutive (box, offset) pairs, or None if connected."""
    b1_left = o1 + len(b1.dom) <= o0
    b1_right = o1 >= o0 + len(b0.cod)
    if b1_left and (not b1_right or not left):
        return (b1, o1), (b0, o0 - len(b1.dom) + len(b1.cod))
    if b1_right:
        return (b1, o1 - len(b0.cod) + len(b0.dom)), (b0, o0)
    return None


class Match:
    """The context of a subdiagram: diagrams above and below, types either side."""

    def __init__(self, top, bottom, left, right):
        self.top, self.bottom, self.left, self.right = top, bottom, left, right

    def subs(self, target):
        middle = self.left @ target @ self.right
        return self.top >> middle >> self.bottom

    def __repr__(self):
        return f"Match(top={self.top!r}, bottom={self.bottom!r}, left={self.left!r}, right={self.right!r})"


def simplify(diagram, rules):
    """Rewrite with the first matching rule until none applies."""
    while True:
        for source, target in rules:
            found = next(diagram.match(source), None)
            if found is not None:
                diagram = found.subs(target)
                break
        else:
            return diagram


class Box(core.Box, Diagram):
    """A box with types as domain and codomain."""

    def __init__(self, name, dom, cod, is_dagger=False, data=None):
        if not isinstance(dom, Ty) or not isinstance(cod, Ty):
            raise TypeMismatch(f"box {name} needs types, got {dom!r} and {cod!r}")
        core.Box.__init__(self, name, dom, cod, is_dagger, data)
        unit = type(dom)()
        self.inside = (Layer(unit, self, unit), )

    __eq__, __hash__ = core.Box.__eq__, core.Box.__hash__
    __repr__, __str__ = core.Box.__repr__, core.Box.__str__


Box.box_factory = Box


class Bubble(core.Bubble, Box):
    """A monoidal box wrapping a diagram, with an optional dom/cod override."""

    def __init__(self, inner, dom=None, cod=None, method="bubble"):
        core.Bubble.__init__(self, inner, dom, cod, method)
        unit = type(self.dom)()
        self.inside = (Layer(unit, self, unit), )

    __eq__, __hash__, __repr__ = core.Bubble.__eq__, core.Bubble.__hash__, core.Bubble.__repr__


class Functor(core.Functor):
    """
    A monoidal functor. Codomain objects are combined with ``@``, or by list
    concatenation when the codomain objects are dimension lists.
    """

    dom = cod = core.Category(Ty, Diagram)

    def map_ob(self, ty):
        if not isinstance(ty, Ty):
            return core.lookup(self.ob, ty)
        if self.cod.ob is int:
            return sum(self.map_simple_ob(ob) for ob in ty.inside)
        if self.cod.ob is list:
            result = []
            for ob in ty.inside:
                value = self.map_simple_ob(ob)
                result += list(value) if isinstance(value, (list, tuple)) else [value]
            return result
        result = self.cod.ob()
        for ob in ty.inside:
            result = result @ self.map_simple_ob(ob)
        return result

    def map_simple_ob(self, ob):
        ty = Ty(ob)
        if isinstance(self.ob, dict) and ty not in self.ob and ob in self.ob:
            return self.ob[ob]
        return core.lookup(self.ob, ty)

    def map_layer(self, layer):
        ar = self.cod.ar
        return ar.id(self(layer.left)).tensor(self(layer.box)).tensor(ar.id(self(layer.right)))

    def map_arrow(self, arrow):
        result = self.cod.ar.id(self(arrow.dom))
        for layer in arrow.inside:
            result = result.then(self.map_layer(layer))
        return result


def spiral(length, x=None):
    """The worst case for interchanger normal form, a diagram of ``length`` boxes."""
    x = Ty('x') if x is None else x
    unit = type(x)()
    f, g = Box('f', unit, x @ x), Box('g', x @ x, unit)
    u, v = Box('u', unit, x), Box('v', x, unit)
    diagram, n = Diagram.id(unit) >> u, length // 2 - 1
    for i in range(n):
        diagram = diagram >> x ** i @ f @ x ** (i + 1)
    diagram = diagram >> x ** n @ v @ x ** n
    for i in range(n):
        diagram = diagram >> x ** (n - i - 1) @ g @ x ** (n - i - 1)
    return diagram
