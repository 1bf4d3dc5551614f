"""
Free categories: objects, boxes, arrows as sequences of boxes, daggers,
formal sums, bubbles and functors.

>>> x, y, z = Ob('x'), Ob('y'), Ob('z')
>>> f, g = Box('f', x, y), Box('g', y, z)
>>> (f >> g).dagger() == g.dagger() >> f.dagger()
True
"""

from functools import reduce

from diagrammar.errors import TypeMismatch, UnknownBox, UnknownMethod


class Ob:
    """A generating object, equal to any other object with the same name."""

    def __init__(self, name):
        if not isinstance(name, str) or not name:
            raise ValueError(f"object names must be non-empty strings, got {name!r}")
        self.name = name

    def __eq__(self, other):
        if not isinstance(other, Ob):
            return NotImplemented
        return self.name == other.name and getattr(self, "z", 0) == getattr(other, "z", 0)

    def __hash__(self):
        return hash((self.name, getattr(self, "z", 0)))

    def __repr__(self):
        return f"Ob({self.name!r})"

    def __str__(self):
        return self.name


def join_factory(f, g):
    """The more specific of the two arrow classes."""
    return g.factory if issubclass(g.factory, f.factory) else f.factory


class Arrow:
    """
    A path of boxes with a domain and codomain.

    The ``inside`` elements only need ``dom``, ``cod`` and ``dagger``, so the
    monoidal diagrams reuse this class with layers in place of boxes.
    """

    def __init__(self, inside, dom, cod, _scan=True):
        inside = tuple(inside)
        if _scan:
            current = dom
            for i, box in enumerate(inside):
                if box.dom != current:
                    raise TypeMismatch(f"step {i}: expected dom {current}, got {box.dom}")
                current = box.cod
            if current != cod:
                raise TypeMismatch(f"expected cod {cod}, got {current}")
        self.inside, self.dom, self.cod = inside, dom, cod

    @classmethod
    def id(cls, dom):
        return cls.factory((), dom, dom, _scan=False)

    def then(self, *others):
        result = self
        for other in others:
            if isinstance(other, Sum):
                result = Sum([result]).then(other)
                continue
            if result.cod != other.dom:
                raise TypeMismatch(f"cannot compose {result.cod} with {other.dom}")
            factory = join_factory(result, other)
            result = factory(result.inside + other.inside, result.dom, other.cod, _scan=False)
        return result

    def __rshift__(self, other):
        return self.then(other)

    def __lshift__(self, other):
        return other.then(self)

    def dagger(self):
        return self.factory(
            tuple(box.dagger() for box in reversed(self.inside)),
            self.cod, self.dom, _scan=False)

    def __len__(self):
        return len(self.inside)

    def __iter__(self):
        return iter(self.inside)

    def __getitem__(self, key):
        if isinstance(key, slice):
            if key.step == -1 and key.start is None and key.stop is None:
                return self.dagger()
            inside = self.inside[key]
            if not inside:
                start = key.start or 0
                dom = self.inside[start].dom if start < len(self.inside) else self.cod
                return self.id(dom)
            return self.factory(inside, inside[0].dom, inside[-1].cod, _scan=False)
        return self.inside[key]

    def __eq__(self, other):
        if isinstance(other, Sum):
            return other == self
        if not isinstance(other, Arrow):
            return NotImplemented
        return (self.dom, self.cod, self.inside) == (other.dom, other.cod, other.inside)

    def __hash__(self):
        if len(self.inside) == 1:
            return hash(self.inside[0])
        return hash((self.dom, self.cod, self.inside))

    def __add__(self, other):
        return Sum([self]) + other

    @classmethod
    def zero(cls, dom, cod):
        return Sum([], dom, cod)

    def __repr__(self):
        return f"Arrow({list(self.inside)!r}, dom={self.dom!r}, cod={self.cod!r})"

    def __str__(self):
        if not self.inside:
            return f"id({self.dom})"
        return " >> ".join(map(str, self.inside))

    def bubble(self, **params):
        return Bubble(self, **params)


Arrow.factory = Arrow


class Box(Arrow):
    """
    A generating arrow. ``data`` holds an optional hashable payload such as a
    phase, it takes part in equality.
    """

    def __init__(self, name, dom, cod, is_dagger=False, data=None):
        self.name, self.is_dagger, self.data = name, is_dagger, data
        Arrow.__init__(self, (self, ), dom, cod, _scan=False)

    def dagger(self):
        return self.box_factory(self.name, self.cod, self.dom, not self.is_dagger, self.data)

    def _key(self):
        return (type(self).__name__, self.name, self.dom, self.cod, self.is_dagger, self.data)

    def __eq__(self, other):
        if isinstance(other, Box):
            return self._key() == other._key()
        return Arrow.__eq__(self, other)

    def __hash__(self):
        return hash((self.name, self.is_dagger))

    def __repr__(self):
        extra = ", is_dagger=True" if self.is_dagger else ""
        extra += f", data={self.data!r}" if self.data is not None else ""
        return f"{type(self).__name__}({self.name!r}, {self.dom!r}, {self.cod!r}{extra})"

    def __str__(self):
        return self.name + ("[::-1]" if self.is_dagger else "")


Box.box_factory = Box


class Sum:
    """
    A formal sum of parallel arrows, i.e. a bag.

    Terms are sorted by their ``repr`` so that bag equality is list equality.

    >>> x, y = Ob('x'), Ob('y')
    >>> f, g = Box('f', x, y), Box('g', x, y)
    >>> f + g == g + f
    True
    """

    def __init__(self, terms, dom=None, cod=None):
        terms = [t for term in terms for t in (term.terms if isinstance(term, Sum) else [term])]
        if dom is None or cod is None:
            if not terms:
                raise ValueError("an empty sum needs an explicit dom and cod")
            dom = terms[0].dom if dom is None else dom
            cod = terms[0].cod if cod is None else cod
        for term in terms:
            if term.dom != dom or term.cod != cod:
                raise TypeMismatch(f"non-parallel term {term}: expected {dom} -> {cod}")
        self.terms = tuple(sorted(terms, key=repr))
        self.dom, self.cod = dom, cod

    @classmethod
    def zero(cls, dom, cod):
        return cls([], dom, cod)

    def __add__(self, other):
        other = other if isinstance(other, Sum) else Sum([other])
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise TypeMismatch(f"cannot add {self.dom} -> {self.cod} and {other.dom} -> {other.cod}")
        return Sum(self.terms + other.terms, self.dom, self.cod)

    __radd__ = __add__

    def then(self, *others):
        result = self
        for other in others:
            other = other if isinstance(other, Sum) else Sum([other])
            if result.cod != other.dom:
                raise TypeMismatch(f"cannot compose {result.cod} with {other.dom}")
            result = Sum([f.then(g) for f in result.terms for g in other.terms],
                         result.dom, other.cod)
        return result

    def __rshift__(self, other):
        return self.then(other)

    def __rrshift__(self, other):
        return Sum([other]).then(self)

    def __lshift__(self, other):
        return Sum([other]).then(self) if not isinstance(other, Sum) else other.then(self)

    def tensor(self, *others):
        result = self
        for other in others:
            other = other if isinstance(other, Sum) else Sum([other])
            result = Sum([f.tensor(g) for f in result.terms for g in other.terms],
                         result.dom @ other.dom, result.cod @ other.cod)
        return result

    def __matmul__(self, other):
        if not isinstance(other, (Sum, Arrow)):
            other = self._id_of(other)
        return self.tensor(other)

    def __rmatmul__(self, other):
        if not isinstance(other, (Sum, Arrow)):
            other = self._id_of(other)
        return Sum([other]).tensor(self)

    def _id_of(self, ty):
        if not self.terms:
            raise TypeError("cannot whisker an empty sum without a diagram class")
        return self.terms[0].id(ty)

    def dagger(self):
        return Sum([f.dagger() for f in self.terms], self.cod, self.dom)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other):
        if isinstance(other, Arrow):
            return len(self.terms) == 1 and self.terms[0] == other
        if not isinstance(other, Sum):
            return NotImplemented
        return (self.dom, self.cod, self.terms) == (other.dom, other.cod, other.terms)

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"Sum({list(self.terms)!r}, dom={self.dom!r}, cod={self.cod!r})"

    def __str__(self):
        if not self.terms:
            return f"zero({self.dom}, {self.cod})"
        return " + ".join(f"({t})" for t in self.terms)

    def bubble(self, **params):
        return Bubble(self, **params)


class Bubble(Box):
    """
    A unary operator on a homset, applied to ``inner``. Functors interpret it
    by calling the method named ``method`` on the image of ``inner``.
    """

    def __init__(self, inner, dom=None, cod=None, method="bubble"):
        self.inner, self.method = inner, method
        dom = inner.dom if dom is None else dom
        cod = inner.cod if cod is None else cod
        Box.__init__(self, f"{method}({inner})", dom, cod)

    def _key(self):
        return ("Bubble", self.method, self.inner, self.dom, self.cod, self.is_dagger)

    def dagger(self):
        # the operator is not assumed to commute with dagger, keep the flag
        result = type(self)(self.inner, self.cod, self.dom, self.method)
        result.is_dagger = not self.is_dagger
        return result

    def __hash__(self):
        return hash((self.method, self.name))

    def __repr__(self):
        return f"{type(self).__name__}({self.inner!r}, method={self.method!r})"


class Category:
    """A pair of object and arrow classes, used as functor codomains."""

    def __init__(self, ob, ar):
        self.ob, self.ar = ob, ar

    def __repr__(self):
        return f"Category({self.ob.__name__}, {self.ar.__name__})"


def lookup(mapping, key):
    if isinstance(mapping, dict):
        try:
            return mapping[key]
        except KeyError:
            raise UnknownBox(f"no image for {key}") from None
    return mapping(key)


class Functor:
    """
    A functor out of a free category, given by its values on generators.

    >>> x, y, z = Ob('x'), Ob('y'), Ob('z')
    >>> f, g, h = Box('f', x, y), Box('g', y, z), Box('h', z, x)
    >>> F = Functor(ob={x: y, y: z, z: x}, ar={f: g, g: h, h: f})
    >>> F(f >> g >> h) == g >> h >> f
    True
    """

    dom = cod = Category(Ob, Arrow)

    def __init__(self, ob, ar, dom=None, cod=None):
        self.ob, self.ar = ob, ar
        if dom is not None:
            self.dom = dom
        if cod is not None:
            self.cod = cod

    def map_ob(self, ob):
        return lookup(self.ob, ob)

    def map_box(self, box):
        if box.is_dagger and not (isinstance(self.ar, dict) and box in self.ar):
            return self(box.dagger()).dagger()
        value = lookup(self.ar, box)
        if not isinstance(value, self.cod.ar):
            value = self.cod.ar(value, self(box.dom), self(box.cod))
        return value

    def map_bubble(self, bubble):
        inner = self(bubble.inner)
        method = getattr(inner, bubble.method, None)
        if method is None:
            raise UnknownMethod(f"{type(inner).__name__} has no operator {bubble.method!r}")
        if (bubble.dom, bubble.cod) != (bubble.inner.dom, bubble.inner.cod):
            return method(dom=self(bubble.dom), cod=self(bubble.cod))
        return method()

    def map_sum(self, arrow):
        terms = [self(term) for term in arrow.terms]
        return reduce(lambda a, b: a + b, terms, self.cod.ar.zero(self(arrow.dom), self(arrow.cod)))

    def map_arrow(self, arrow):
        return reduce(lambda a, b: a.then(b), map(self, arrow.inside), self.cod.ar.id(self(arrow.dom)))

    def __call__(self, other):
        if isinstance(other, Sum):
            return self.map_sum(other)
        if isinstance(other, Bubble):
            return self.map_bubble(other)
        if isinstance(other, Box):
            return self.map_box(other)
        if isinstance(other, Arrow):
            return self.map_arrow(other)
        return self.map_ob(other)
