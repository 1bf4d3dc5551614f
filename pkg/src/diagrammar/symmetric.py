"""
Braids and swaps, spiders and the copy/merge structure of cartesian
categories, with finite functions as a decision procedure for the latter.

>>> x, y, z = map(Ty, "xyz")
>>> Diagram.braid(x, y @ z) == Braid(x, y) @ z >> y @ Braid(x, z)
True
"""

from diagrammar import core, rigid
from diagrammar.errors import NoMatch, TypeMismatch
from diagrammar.monoidal import Match
from diagrammar.rigid import Ty


def hexagon(cls, factory, x, y):
    """Braids of arbitrary types from braids of single objects."""
    if len(x) == 0:
        return cls.id(y)
    if len(y) == 0:
        return cls.id(x)
    if len(x) == 1:
        if len(y) == 1:
            return factory(x, y)
        return (hexagon(cls, factory, x, y[:1]) @ y[1:]
                >> y[:1] @ hexagon(cls, factory, x, y[1:]))
    return (x[:1] @ hexagon(cls, factory, x[1:], y)
            >> hexagon(cls, factory, x[:1], y) @ x[1:])


def coherence(cls, factory, a, b, x, phase=None):
    """
    Spiders on arbitrary types from spiders on single objects: units and
    counits go elementwise, binary (co)products interleave with swaps and
    the rest is built from those.
    """
    if len(x) == 0 and phase is None:
        return cls.id(x)
    if len(x) == 1:
        return factory(a, b, x, phase)
    if phase is not None:
        shift = cls.id(type(x)())
        for obj in x:
            shift = shift @ factory(1, 1, obj, phase)
        return coherence(cls, factory, a, 1, x) >> shift >> coherence(cls, factory, 1, b, x)
    if (a, b) in [(1, 0), (0, 1)]:
        result = cls.id(type(x)())
        for obj in x:
            result = result @ factory(a, b, obj, None)
        return result
    if (a, b) == (1, 2):
        spiders = factory(1, 2, x[:1], None) @ coherence(cls, factory, 1, 2, x[1:])
        return spiders >> x[:1] @ cls.swap(x[:1], x[1:]) @ x[1:]
    if (a, b) == (2, 1):
        spiders = factory(2, 1, x[:1], None) @ coherence(cls, factory, 2, 1, x[1:])
        return x[:1] @ cls.swap(x[1:], x[:1]) @ x[1:] >> spiders
    if a == 1:
        if b == 1:
            return cls.id(x)
        return (coherence(cls, factory, 1, b - 1, x)
                >> coherence(cls, factory, 1, 2, x) @ x ** (b - 2))
    if b == 1:
        if a == 0:
            return coherence(cls, factory, 0, 1, x)
        return (coherence(cls, factory, 2, 1, x) @ x ** (a - 2)
                >> coherence(cls, factory, a - 1, 1, x))
    return coherence(cls, factory, a, 1, x) >> coherence(cls, factory, 1, b, x)


class Diagram(rigid.Diagram):
    """Diagrams with braids, swaps, spiders and copies."""

    @classmethod
    def braid(cls, x, y):
        return hexagon(cls, Braid, x, y)

    @classmethod
    def swap(cls, x, y):
        return hexagon(cls, Swap, x, y)

    @classmethod
    def spiders(cls, a, b, x, phase=None):
        if (a, b) == (1, 1) and phase is None:
            return cls.id(x)
        return coherence(cls, lambda a, b, x, p: Spider(a, b, x, p), a, b, x, phase)

    @classmethod
    def copy(cls, x, n=2):
        if len(x) == 1 and n == 1:
            return cls.id(x)

        def factory(a, b, obj, _):
            if a != 1:
                raise ValueError("copies have a single input")
            return cls.id(obj) if b == 1 else Copy(obj, b)
        return coherence(cls, factory, 1, n, x)

    @classmethod
    def merge(cls, x, n=2):
        return cls.copy(x, n).dagger()

    def simplify(self):
        """Cancel every braid followed by its inverse."""
        boxes, offsets = self.boxes, self.offsets
        i = 0
        while i < len(boxes) - 1:
            f, g = boxes[i], boxes[i + 1]
            if offsets[i] == offsets[i + 1] and isinstance(f, Braid) and f == g.dagger():
                del boxes[i:i + 2], offsets[i:i + 2]
                i = max(i - 1, 0)
            else:
                i += 1
        return self.decode(self.dom, list(zip(boxes, offsets)))

    def naturality(self, i, left=True, down=True, braid=None):
        """
        Slide box ``i`` through the braid next to it. ``left`` says on which
        side of the box the crossing wire is, ``down`` whether the box goes
        down or up.
        """
        braid = braid or self.braid
        if not 0 <= i < len(self):
            raise NoMatch(f"no layer {i}")
        layer = self.inside[i]
        box = layer.box
        wire = layer.left[-1:] if left else layer.right[:1]
        if not len(wire):
            raise NoMatch(f"no wire on the {'left' if left else 'right'} of box {i}")
        if left and down:
            source = wire @ box >> braid(wire, box.cod)
            target = braid(wire, box.dom) >> box @ wire
        elif left:
            source = braid(box.dom, wire) >> wire @ box
            target = box @ wire >> braid(box.cod, wire)
        elif down:
            source = box @ wire >> braid(box.cod, wire)
            target = braid(box.dom, wire) >> wire @ box
        else:
            source = braid(wire, box.dom) >> box @ wire
            target = wire @ box >> braid(wire, box.cod)
        start = i if down else i - len(source) + 1
        if start < 0 or start + len(source) > len(self):
            raise NoMatch(f"box {i} is not next to a braid")
        found = Match(top=self[:start], bottom=self[start + len(source):],
                      left=layer.left[:-1] if left else layer.left,
                      right=layer.right if left else layer.right[1:])
        try:
            matches = found.subs(source) == self
        except TypeMismatch:
            matches = False
        if not matches:
            raise NoMatch(f"box {i} does not match the naturality shape")
        return found.subs(target)


Diagram.factory = Diagram


class Box(rigid.Box, Diagram):
    """A box in a free symmetric category."""

    __eq__, __hash__ = rigid.Box.__eq__, rigid.Box.__hash__
    __repr__, __str__ = rigid.Box.__repr__, rigid.Box.__str__


Box.box_factory = Box


class Braid(Box):
    """The crossing of two single wires, ``x`` over ``y``."""

    def __init__(self, x, y, is_dagger=False):
        if len(x) != 1 or len(y) != 1:
            raise TypeMismatch("braids cross single objects")
        self.left, self.right = x, y
        name = f"{type(self).__name__}({y}, {x})[::-1]" if is_dagger \
            else f"{type(self).__name__}({x}, {y})"
        Box.__init__(self, name, x @ y, y @ x, is_dagger)

    def dagger(self):
        return type(self)(self.cod[:1], self.cod[1:], not self.is_dagger)

    def __str__(self):
        return self.name

    def __repr__(self):
        extra = ", is_dagger=True" if self.is_dagger else ""
        return f"{type(self).__name__}({self.left!r}, {self.right!r}{extra})"


class Swap(Braid):
    """A symmetric braid, its own inverse."""

    def __init__(self, x, y):
        Braid.__init__(self, x, y)

    def dagger(self):
        return Swap(self.right, self.left)


class Spider(Box):
    """
    A spider with ``a`` legs in and ``b`` legs out on a single object, with an
    optional real phase.
    """

    def __init__(self, a, b, x, phase=None):
        if len(x) != 1:
            raise TypeMismatch("spiders live on single objects, use Diagram.spiders")
        self.a, self.b, self.object, self.phase = a, b, x, phase
        name = f"Spider({a}, {b}, {x}" + (f", {phase})" if phase is not None else ")")
        Box.__init__(self, name, x ** a, x ** b, data=phase)

    def dagger(self):
        return Spider(self.b, self.a, self.object, None if self.phase is None else -self.phase)

    def __repr__(self):
        extra = f", {self.phase!r}" if self.phase is not None else ""
        return f"Spider({self.a}, {self.b}, {self.object!r}{extra})"


class Copy(Box):
    """Copy a single object ``n`` times, discard when ``n == 0``."""

    def __init__(self, x, n=2):
        self.object, self.n = x, n
        Box.__init__(self, f"Copy({x}, {n})", x, x ** n)

    def dagger(self):
        return Merge(self.object, self.n)

    def __repr__(self):
        return f"Copy({self.object!r}, {self.n})"


class Merge(Box):
    """The dagger of ``Copy``."""

    def __init__(self, x, n=2):
        self.object, self.n = x, n
        Box.__init__(self, f"Merge({x}, {n})", x ** n, x)

    def dagger(self):
        return Copy(self.object, self.n)

    def __repr__(self):
        return f"Merge({self.object!r}, {self.n})"


class Functor(rigid.Functor):
    """Sends braids, swaps, spiders and copies to the codomain's own."""

    dom = cod = core.Category(Ty, Diagram)

    def map_box(self, box):
        ar = self.cod.ar
        if isinstance(box, Swap):
            return ar.swap(self(box.left), self(box.right))
        if isinstance(box, Braid) and not box.is_dagger:
            return ar.braid(self(box.left), self(box.right))
        if isinstance(box, Spider):
            return ar.spiders(box.a, box.b, self(box.object), box.phase)
        if isinstance(box, Copy):
            return ar.copy(self(box.object), box.n)
        if isinstance(box, Merge):
            return ar.merge(self(box.object), box.n)
        return rigid.Functor.map_box(self, box)


class FinFun:
    """
    A function between finite sets, read backwards: ``table[i]`` is the
    input wire that output wire ``i`` comes from. This is the free cartesian
    category on one object.
    """

    def __init__(self, table, dom, cod):
        table = dict(table) if not isinstance(table, dict) else table
        if sorted(table) != list(range(cod)) or any(not 0 <= v < dom for v in table.values()):
            raise TypeMismatch(f"table {table} is not a function from {cod} to {dom}")
        self.table, self.dom, self.cod = table, dom, cod

    def __getitem__(self, key):
        return self.table[key]

    @classmethod
    def id(cls, x=0):
        return cls({i: i for i in range(x)}, x, x)

    def then(self, other):
        if self.cod != other.dom:
            raise TypeMismatch(f"cannot compose {self.cod} with {other.dom}")
        return FinFun({i: self[other[i]] for i in range(other.cod)}, self.dom, other.cod)

    def tensor(self, other):
        table = {i: self[i] for i in range(self.cod)}
        table.update({self.cod + i: self.dom + other[i] for i in range(other.cod)})
        return FinFun(table, self.dom + other.dom, self.cod + other.cod)

    @classmethod
    def swap(cls, x, y):
        return cls({i: i + x if i < x else i - x for i in range(x + y)}, x + y, x + y)

    braid = swap

    @classmethod
    def copy(cls, x, n=2):
        return cls({i: i % x for i in range(n * x)}, x, n * x)

    def __eq__(self, other):
        if not isinstance(other, FinFun):
            return NotImplemented
        return (self.table, self.dom, self.cod) == (other.table, other.dom, other.cod)

    def __repr__(self):
        return f"FinFun({self.table}, dom={self.dom}, cod={self.cod})"
