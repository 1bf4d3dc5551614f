"""
Free rigid and pivotal categories: objects with winding numbers, cups and
caps, transposes and the snake removal normal form.

>>> n = Ty('n')
>>> left_snake = Diagram.id(n.l).transpose()
>>> left_snake.normal_form() == Diagram.id(n)
True
"""

from diagrammar import core, monoidal
from diagrammar.errors import TypeMismatch
from diagrammar.monoidal import swap_layers


class Ob(core.Ob):
    """
    A basic type with a winding number ``z``: left adjoints decrement it and
    right adjoints increment it.

    >>> Ob('a').l.r == Ob('a') and Ob('a').l != Ob('a').r
    True
    """

    def __init__(self, name, z=0):
        if not isinstance(z, int):
            raise TypeError(f"winding numbers are integers, got {z!r}")
        super().__init__(name)
        self.z = z

    @property
    def l(self):
        return type(self)(self.name, self.z - 1)

    @property
    def r(self):
        return type(self)(self.name, self.z + 1)

    def __repr__(self):
        return f"Ob({self.name!r}" + (f", z={self.z})" if self.z else ")")

    def __str__(self):
        return self.name + (".l" * -self.z if self.z < 0 else ".r" * self.z)


class PivotalOb(Ob):
    """Winding numbers modulo 2, so that left and right adjoints coincide."""

    def __init__(self, name, z=0):
        super().__init__(name, z % 2)

    def __repr__(self):
        return f"PivotalOb({self.name!r}" + (f", z={self.z})" if self.z else ")")


class Ty(monoidal.Ty):
    """
    A pregroup type, i.e. a list of basic types with winding numbers.

    >>> x, y = Ty('x'), Ty('y')
    >>> (x @ y).l == y.l @ x.l and (x @ y).r == y.r @ x.r
    True
    """

    ob_factory = Ob


class PivotalTy(Ty):
    ob_factory = PivotalOb


def unit_like(ty):
    return type(ty)() if isinstance(ty, Ty) else Ty()


class Diagram(monoidal.Diagram):
    """A planar diagram which may contain cups and caps."""

    ty_factory = Ty

    @classmethod
    def cups(cls, x, y):
        return nesting(cls, Cup, x, y, cups=True)

    @classmethod
    def caps(cls, x, y):
        return nesting(cls, Cap, x, y, cups=False)

    def transpose(self, left=False):
        """
        Bend the wires with cups and caps: the right transpose goes from
        ``cod.r`` to ``dom.r`` and the left transpose from ``cod.l`` to ``dom.l``.
        """
        dom, cod = self.dom, self.cod
        if left:
            return (cod.l @ self.caps(dom, dom.l)
                    >> cod.l @ self @ dom.l
                    >> self.cups(cod.l, cod) @ dom.l)
        return (self.caps(dom.r, dom) @ cod.r
                >> dom.r @ self @ cod.r
                >> dom.r @ self.cups(cod, cod.r))

    def snake_removal(self):
        """Yank every cap that is wired to a cup, clearing obstructions first."""
        items = [[box, offset, uid] for uid, (box, offset) in enumerate(zip(self.boxes, self.offsets))]
        while True:
            snake = find_snake(items)
            if snake is None:
                break
            items = unsnake(items, *snake)
        return self.decode(self.dom, [(box, offset) for box, offset, _ in items])

    def normal_form(self, left=False, snakes=True):
        diagram = self.snake_removal() if snakes else self
        return monoidal.Diagram.normal_form(diagram, left)


Diagram.factory = Diagram


class Box(monoidal.Box, Diagram):
    """A box in a free rigid category."""

    __eq__, __hash__ = monoidal.Box.__eq__, monoidal.Box.__hash__
    __repr__, __str__ = monoidal.Box.__repr__, monoidal.Box.__str__


Box.box_factory = Box


class Cup(Box):
    """The counit of an adjunction, requires ``left == right.l``."""

    def __init__(self, left, right, is_dagger=False):
        if len(left) != 1 or len(right) != 1 or left != right.l:
            raise TypeMismatch(f"no cup between {left} and {right}")
        self.left, self.right = left, right
        dom, cod = left @ right, unit_like(left)
        if is_dagger:
            dom, cod = cod, dom
        Box.__init__(self, f"Cup({left}, {right})", dom, cod, is_dagger)

    def dagger(self):
        if isinstance(self.left.inside[0], PivotalOb) and not self.is_dagger:
            return Cap(self.left, self.right)
        return Cup(self.left, self.right, not self.is_dagger)

    def __repr__(self):
        extra = ", is_dagger=True" if self.is_dagger else ""
        return f"Cup({self.left!r}, {self.right!r}{extra})"


class Cap(Box):
    """The unit of an adjunction, requires ``left.l == right``."""

    def __init__(self, left, right, is_dagger=False):
        if len(left) != 1 or len(right) != 1 or left.l != right:
            raise TypeMismatch(f"no cap between {left} and {right}")
        self.left, self.right = left, right
        dom, cod = unit_like(left), left @ right
        if is_dagger:
            dom, cod = cod, dom
        Box.__init__(self, f"Cap({left}, {right})", dom, cod, is_dagger)

    def dagger(self):
        if isinstance(self.left.inside[0], PivotalOb) and not self.is_dagger:
            return Cup(self.left, self.right)
        return Cap(self.left, self.right, not self.is_dagger)

    def __repr__(self):
        extra = ", is_dagger=True" if self.is_dagger else ""
        return f"Cap({self.left!r}, {self.right!r}{extra})"


def nesting(cls, factory, x, y, cups=True):
    """Cups or caps for types of any length, the innermost pair in the middle."""
    if len(x) != len(y):
        raise TypeMismatch(f"cannot nest {x} with {y}")
    if len(x) == 0:
        return cls.id(x)
    if len(x) == 1:
        return factory(x, y)
    head = factory(x[:1], y[-1:])
    inner = nesting(cls, factory, x[1:], y[:-1], cups)
    if cups:
        return x[:1] @ inner @ y[-1:] >> head
    return head >> x[:1] @ inner @ y[-1:]


def is_cup(box):
    return isinstance(box, Cup) and not box.is_dagger


def is_cap(box):
    return isinstance(box, Cap) and not box.is_dagger


def follow_wire(items, i, j):
    """
    Follow the wire out of output ``j`` of box ``i`` down to the box it
    enters. Returns (box index or len(items), input port, lefts, rights) where
    lefts and rights are the indices of the boxes passed on either side.
    """
    position = items[i][1] + j
    lefts, rights = [], []
    for k in range(i + 1, len(items)):
        box, offset, _ = items[k]
        if position < offset:
            rights.append(k)
        elif position >= offset + len(box.dom):
            lefts.append(k)
            position += len(box.cod) - len(box.dom)
        else:
            return k, position - offset, lefts, rights
    return len(items), position, lefts, rights


def find_snake(items):
    for i, (box, _, _) in enumerate(items):
        if not is_cap(box):
            continue
        for j in (0, 1):
            k, port, lefts, rights = follow_wire(items, i, j)
            if k < len(items) and is_cup(items[k][0]) and port == 1 - j:
                return i, k, j, lefts, rights
    return None


def move(items, index, target, left):
    """Interchange the box at ``index`` one layer at a time until it reaches ``target``."""
    step = -1 if target < index else 1
    while index != target:
        upper, lower = (index - 1, index) if step == -1 else (index, index + 1)
        (b0, o0, u0), (b1, o1, u1) = items[upper], items[lower]
        swapped = swap_layers(b0, o0, b1, o1, left)
        if swapped is None:
            raise AssertionError("snake obstruction is connected to the snake")
        (n0, p0), (n1, p1) = swapped
        items[upper], items[lower] = [n0, p0, u1], [n1, p1, u0]
        index += step
    return items


def unsnake(items, i, k, j, lefts, rights):
    """
    Make the cap at ``i`` and the cup at ``k`` adjacent then remove both.
    Boxes on the side of the cap's free leg go below the cup, the others
    go above the cap.
    """
    items = [list(item) for item in items]
    cap_id, cup_id = items[i][2], items[k][2]
    above = [items[n][2] for n in (rights if j == 1 else lefts)]
    below = [items[n][2] for n in (lefts if j == 1 else rights)]
    # obstructions going up stay on their side: right of the wire when j == 1
    go_left = j == 0

    def index_of(key):
        return next(n for n, item in enumerate(items) if item[2] == key)

    for key in above:
        move(items, index_of(key), index_of(cap_id), left=not go_left)
    for key in reversed(below):
        move(items, index_of(key), index_of(cup_id), left=not go_left)
    n = index_of(cap_id)
    assert items[n + 1][2] == cup_id
    return items[:n] + items[n + 2:]


class Functor(monoidal.Functor):
    """
    A rigid functor: adjoint objects go to adjoints, or to reversed lists of
    dimensions when the codomain has none, and cups and caps go to the
    codomain's cups and caps.
    """

    dom = cod = core.Category(Ty, Diagram)

    def map_simple_ob(self, ob):
        z = getattr(ob, "z", 0)
        if z == 0:
            return monoidal.Functor.map_simple_ob(self, ob)
        if z < 0:
            return adjoint(self.map_simple_ob(type(ob)(ob.name, z + 1)), left=True)
        return adjoint(self.map_simple_ob(type(ob)(ob.name, z - 1)), left=False)

    def map_box(self, box):
        if isinstance(box, (Cup, Cap)) and not box.is_dagger:
            method = self.cod.ar.cups if isinstance(box, Cup) else self.cod.ar.caps
            return method(self(box.left), self(box.right))
        return monoidal.Functor.map_box(self, box)


def adjoint(value, left):
    if isinstance(value, (list, tuple)):
        return list(reversed(value))
    if isinstance(value, int):
        return value
    return value.l if left else value.r
