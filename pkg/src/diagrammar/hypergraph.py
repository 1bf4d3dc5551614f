"""
Hypergraph diagrams: boxes, spiders and a wiring from ports to spiders.
Composition is a pushout, so equality is on the nose once spiders are
numbered canonically.

Ports are listed in a fixed order: the diagram's domain, then each box's
domain followed by its codomain, then the diagram's codomain.

>>> x, y = Ty('x'), Ty('y')
>>> swap = Hypergraph.swap(x, y)
>>> swap >> Hypergraph.swap(y, x) == Hypergraph.id(x @ y)
True
"""

from diagrammar import core, symmetric
from diagrammar.errors import TypeMismatch
from diagrammar.monoidal import Ty
from diagrammar.symmetric import Spider, Swap


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i, j):
        i, j = self.find(i), self.find(j)
        if i != j:
            self.parent[max(i, j)] = min(i, j)


class Hypergraph:
    """
    A hypergraph diagram. ``wires[p]`` is the spider that port ``p`` is
    connected to and ``spider_types[s]`` the single object carried by spider
    ``s``.
    """

    def __init__(self, dom, cod, boxes, wires, spider_types):
        self.dom, self.cod, self.boxes = dom, cod, tuple(boxes)
        port_types = self.port_types()
        if len(wires) != len(port_types):
            raise TypeMismatch(f"{len(wires)} wires for {len(port_types)} ports")
        spider_types = [t if isinstance(t, Ty) else Ty(t) for t in spider_types]
        for port, (ty, spider) in enumerate(zip(port_types, wires)):
            if not 0 <= spider < len(spider_types) or spider_types[spider] != ty:
                raise TypeMismatch(f"port {port} of type {ty} cannot go to spider {spider}")
        self.wires, self.spider_types = canonical(wires, spider_types)

    def port_types(self):
        types = list(self.dom)
        for box in self.boxes:
            types += list(box.dom) + list(box.cod)
        return types + list(self.cod)

    def box_ports(self, i):
        """The ranges of port indices for the domain and codomain of box i."""
        start = len(self.dom) + sum(len(b.dom) + len(b.cod) for b in self.boxes[:i])
        box = self.boxes[i]
        middle = start + len(box.dom)
        return range(start, middle), range(middle, middle + len(box.cod))

    @property
    def dom_wires(self):
        return self.wires[:len(self.dom)]

    @property
    def cod_wires(self):
        return self.wires[len(self.wires) - len(self.cod):]

    @property
    def box_wires(self):
        return self.wires[len(self.dom):len(self.wires) - len(self.cod)]

    @property
    def n_spiders(self):
        return len(self.spider_types)

    @classmethod
    def id(cls, x=None):
        x = Ty() if x is None else x
        n = len(x)
        return cls(x, x, [], list(range(n)) * 2, list(x))

    @classmethod
    def from_box(cls, box):
        dom, cod = box.dom, box.cod
        n, m = len(dom), len(cod)
        wires = list(range(n)) * 2 + [n + j for j in range(m)] * 2
        return cls(dom, cod, [box], wires, list(dom) + list(cod))

    @classmethod
    def swap(cls, x, y):
        n, m = len(x), len(y)
        wires = list(range(n + m)) + list(range(n, n + m)) + list(range(n))
        return cls(x @ y, y @ x, [], wires, list(x @ y))

    braid = swap

    @classmethod
    def spiders(cls, a, b, x, phase=None):
        if phase is not None:
            raise NotImplementedError("phased spiders are boxes in hypergraph diagrams")
        n = len(x)
        wires = list(range(n)) * (a + b)
        return cls(x ** a, x ** b, [], wires, list(x))

    @classmethod
    def copy(cls, x, n=2):
        return cls.spiders(1, n, x)

    @classmethod
    def merge(cls, x, n=2):
        return cls.spiders(n, 1, x)

    @classmethod
    def cups(cls, x, y):
        if list(y) != list(x)[::-1]:
            raise TypeMismatch(f"no cups between {x} and {y}")
        n = len(x)
        wires = list(range(n)) + list(range(n - 1, -1, -1))
        return cls(x @ y, Ty(), [], wires, list(x))

    @classmethod
    def caps(cls, x, y):
        return cls.cups(x, y).dagger()

    def then(self, *others):
        result = self
        for other in others:
            result = result._then(other)
        return result

    def _then(self, other):
        if self.cod != other.dom:
            raise TypeMismatch(f"cannot compose {self.cod} with {other.dom}")
        shift = self.n_spiders
        union = UnionFind(shift + other.n_spiders)
        for s, t in zip(self.cod_wires, other.dom_wires):
            union.union(s, shift + t)
        wires = list(self.dom_wires) + list(self.box_wires) \
            + [shift + s for s in other.box_wires] + [shift + s for s in other.cod_wires]
        types = list(self.spider_types) + list(other.spider_types)
        roots = sorted({union.find(s) for s in range(len(types))})
        index = {root: i for i, root in enumerate(roots)}
        return Hypergraph(
            self.dom, other.cod, self.boxes + other.boxes,
            [index[union.find(s)] for s in wires], [types[root] for root in roots])

    def __rshift__(self, other):
        return self.then(other)

    def tensor(self, *others):
        result = self
        for other in others:
            shift = result.n_spiders
            wires = list(result.dom_wires) + [shift + s for s in other.dom_wires] \
                + list(result.box_wires) + [shift + s for s in other.box_wires] \
                + list(result.cod_wires) + [shift + s for s in other.cod_wires]
            result = Hypergraph(
                result.dom @ other.dom, result.cod @ other.cod, result.boxes + other.boxes,
                wires, list(result.spider_types) + list(other.spider_types))
        return result

    def __matmul__(self, other):
        if isinstance(other, Ty):
            other = Hypergraph.id(other)
        return self.tensor(other)

    def __rmatmul__(self, other):
        return Hypergraph.id(other).tensor(self)

    def dagger(self):
        """Reverse the boxes and exchange inputs with outputs."""
        wires = list(self.cod_wires)
        for i in reversed(range(len(self.boxes))):
            dom_ports, cod_ports = self.box_ports(i)
            wires += [self.wires[p] for p in cod_ports] + [self.wires[p] for p in dom_ports]
        wires += list(self.dom_wires)
        return Hypergraph(self.cod, self.dom, [b.dagger() for b in reversed(self.boxes)],
                          wires, self.spider_types)

    def interchange(self, i):
        """Swap boxes i and i + 1, which is always possible."""
        if not 0 <= i < len(self.boxes) - 1:
            raise IndexError(f"no boxes {i} and {i + 1}")
        first, second = self.box_ports(i), self.box_ports(i + 1)
        chunk = lambda ports: [self.wires[p] for r in ports for p in r]
        start = first[0].start
        end = second[1].stop
        wires = list(self.wires[:start]) + chunk(second) + chunk(first) + list(self.wires[end:])
        boxes = list(self.boxes)
        boxes[i], boxes[i + 1] = boxes[i + 1], boxes[i]
        return Hypergraph(self.dom, self.cod, boxes, wires, self.spider_types)

    def ports_of(self, spider):
        return [p for p, s in enumerate(self.wires) if s == spider]

    def _port_kinds(self):
        """For each port, whether it is an output (feeds a wire) or an input."""
        outputs = [True] * len(self.dom)
        for box in self.boxes:
            outputs += [False] * len(box.dom) + [True] * len(box.cod)
        return outputs + [False] * len(self.cod)

    def _port_owner(self):
        owner = [-1] * len(self.dom)
        for i, box in enumerate(self.boxes):
            owner += [i] * (len(box.dom) + len(box.cod))
        return owner + [len(self.boxes)] * len(self.cod)

    @property
    def is_bijective(self):
        counts = [0] * self.n_spiders
        for s in self.wires:
            counts[s] += 1
        return all(c in (0, 2) for c in counts)

    @property
    def is_monogamous(self):
        kinds = self._port_kinds()
        ins, outs = [0] * self.n_spiders, [0] * self.n_spiders
        for port, s in enumerate(self.wires):
            if kinds[port]:
                outs[s] += 1
            else:
                ins[s] += 1
        return all(i == 1 and o == 1 for i, o in zip(ins, outs))

    @property
    def is_progressive(self):
        if not self.is_monogamous:
            return False
        kinds, owner = self._port_kinds(), self._port_owner()
        source, target = {}, {}
        for port, s in enumerate(self.wires):
            (source if kinds[port] else target)[s] = owner[port]
        return all(source[s] < target[s] for s in source)

    def downgrade(self):
        """A layered diagram with the same boxes, wired with swaps and spiders."""
        return downgrade(self)

    def make_progressive(self):
        """Keep the spiders and swaps of ``downgrade`` as boxes."""
        return Functor(ob=lambda ty: ty, ar=Hypergraph.from_box,
                       keep_spiders=True)(self.downgrade())

    def make_bijective(self):
        """Replace every spider without exactly two ports by a spider box."""
        kinds = self._port_kinds()
        boxes, extra = list(self.boxes), []
        new_types = list(self.spider_types)
        replace = {}
        for s in range(self.n_spiders):
            ports = self.ports_of(s)
            if len(ports) in (0, 2):
                continue
            a = sum(1 for p in ports if kinds[p])
            spider_box = Spider(a, len(ports) - a, self.spider_types[s])
            legs = []
            for p in ports:
                legs.append(len(new_types))
                new_types.append(self.spider_types[s])
                replace[p] = legs[-1]
            extra.append((spider_box, [replace[p] for p in ports if kinds[p]],
                          [replace[p] for p in ports if not kinds[p]]))
        wires = [replace.get(p, s) for p, s in enumerate(self.wires)]
        n_dom, n_cod = len(self.dom), len(self.cod)
        box_wires = wires[n_dom:len(wires) - n_cod]
        for spider_box, ins, outs in extra:
            boxes.append(spider_box)
            box_wires += ins + outs
        wires = wires[:n_dom] + box_wires + wires[len(wires) - n_cod:]
        gone = {s for s in range(self.n_spiders) if len(self.ports_of(s)) not in (0, 2)}
        alive = [s for s in range(len(new_types)) if s not in gone]
        index = {s: i for i, s in enumerate(alive)}
        return Hypergraph(self.dom, self.cod, boxes, [index[s] for s in wires],
                          [new_types[s] for s in alive])

    def make_monogamous(self):
        """Bend the wires joining two outputs or two inputs with spider boxes."""
        result = self.make_bijective()
        kinds = result._port_kinds()
        boxes, types = list(result.boxes), list(result.spider_types)
        wires = list(result.wires)
        extra = []
        for s in range(result.n_spiders):
            ports = result.ports_of(s)
            if not ports:
                # a closed loop becomes a unit followed by a counit
                extra += [(Spider(0, 1, types[s]), [s]), (Spider(1, 0, types[s]), [s])]
                continue
            if len(ports) != 2 or kinds[ports[0]] != kinds[ports[1]]:
                continue
            both_outputs = kinds[ports[0]]
            fresh = len(types)
            types.append(types[s])
            wires[ports[1]] = fresh
            legs = [s, fresh]
            extra.append((Spider(2, 0, types[s]) if both_outputs else Spider(0, 2, types[s]), legs))
        n_dom, n_cod = len(result.dom), len(result.cod)
        box_wires = wires[n_dom:len(wires) - n_cod]
        for box, legs in extra:
            boxes.append(box)
            box_wires += legs
        wires = wires[:n_dom] + box_wires + wires[len(wires) - n_cod:]
        return Hypergraph(result.dom, result.cod, boxes, wires, types)

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.dom, self.cod, self.boxes, self.wires, self.spider_types) \
            == (other.dom, other.cod, other.boxes, other.wires, other.spider_types)

    def __hash__(self):
        return hash((self.dom, self.cod, self.wires))

    def __repr__(self):
        return (f"Hypergraph(dom={self.dom!r}, cod={self.cod!r}, boxes={list(self.boxes)!r}, "
                f"wires={list(self.wires)!r}, spider_types={list(self.spider_types)!r})")


def canonical(wires, spider_types):
    """Number spiders by first occurrence, closed spiders last by type."""
    order = []
    seen = set()
    for s in wires:
        if s not in seen:
            seen.add(s)
            order.append(s)
    closed = sorted((s for s in range(len(spider_types)) if s not in seen),
                    key=lambda s: repr(spider_types[s]))
    order += closed
    index = {s: i for i, s in enumerate(order)}
    return tuple(index[s] for s in wires), tuple(spider_types[s] for s in order)


def rewire(diagram, current, target, types):
    """
    Turn the wires ``current`` (a list of spider labels) into ``target``
    with swaps and spider boxes: gather the wires of each spider, fuse and
    split them, then put them in order.
    """
    order = []
    for s in target + current:
        if s not in order:
            order.append(s)
    rank = {s: n for n, s in enumerate(order)}
    wires = list(current)
    diagram = sort_wires(diagram, wires, key=lambda s: rank[s])
    position = 0
    for s in order:
        a, b = wires.count(s), target.count(s)
        if (a, b) != (1, 1):
            x = types[s]
            left, right = diagram.cod[:position], diagram.cod[position + a:]
            diagram = diagram >> left @ Spider(a, b, x) @ right
        wires[position:position + a] = [s] * b
        position += b
    # wires now grouped in order of first appearance, move them into place
    labels = list(wires)
    seen = {}
    keyed = []
    for s in labels:
        seen[s] = seen.get(s, 0) + 1
        keyed.append((s, seen[s]))
    seen = {}
    goal = {}
    for n, s in enumerate(target):
        seen[s] = seen.get(s, 0) + 1
        goal[(s, seen[s])] = n
    positions = [goal[k] for k in keyed]
    return sort_wires(diagram, positions, key=lambda v: v)


def sort_wires(diagram, wires, key):
    """Bubble sort the wires with adjacent swaps, sorting ``wires`` in place."""
    n = len(wires)
    for end in range(n - 1, 0, -1):
        for i in range(end):
            if key(wires[i]) > key(wires[i + 1]):
                cod = diagram.cod
                diagram = diagram >> cod[:i] @ Swap(cod[i:i + 1], cod[i + 1:i + 2]) @ cod[i + 2:]
                wires[i], wires[i + 1] = wires[i + 1], wires[i]
    return diagram


def downgrade(graph):
    types = graph.spider_types
    current = list(graph.dom_wires)
    diagram = symmetric.Diagram.id(graph.dom)
    later_use = []
    for i in range(len(graph.boxes)):
        dom_ports, cod_ports = graph.box_ports(i)
        later = {graph.wires[p] for p in cod_ports}
        for j in range(i + 1, len(graph.boxes)):
            later.update(graph.wires[p] for r in graph.box_ports(j) for p in r)
        later.update(graph.cod_wires)
        later_use.append(later)
    for i, box in enumerate(graph.boxes):
        dom_ports, cod_ports = graph.box_ports(i)
        needed = [graph.wires[p] for p in dom_ports]
        kept = []
        for s in current + needed:
            if s in later_use[i] and s not in kept:
                kept.append(s)
        diagram = rewire(diagram, current, needed + kept, types)
        diagram = diagram >> box @ diagram.cod[len(needed):]
        current = [graph.wires[p] for p in cod_ports] + kept
    diagram = rewire(diagram, current, list(graph.cod_wires), types)
    for s in range(graph.n_spiders):
        if not graph.ports_of(s):
            x = types[s]
            circle = Spider(0, 2, x) >> Spider(2, 0, x)
            diagram = diagram @ circle
    return diagram


class Functor(symmetric.Functor):
    """
    Send layered diagrams to hypergraph diagrams. Swaps and spiders become
    wiring, unless ``keep_spiders`` in which case spiders stay as boxes.
    """

    dom = core.Category(Ty, symmetric.Diagram)
    cod = core.Category(Ty, Hypergraph)

    def __init__(self, ob=None, ar=None, keep_spiders=False):
        super().__init__(ob or (lambda ty: ty), ar or Hypergraph.from_box)
        self.keep_spiders = keep_spiders

    def map_ob(self, ty):
        return ty

    def map_box(self, box):
        if isinstance(box, Spider) and (self.keep_spiders or box.phase is not None):
            return Hypergraph.from_box(box)
        if isinstance(box, (Spider, Swap)) or type(box).__name__ in ("Copy", "Merge"):
            return symmetric.Functor.map_box(self, box)
        return Hypergraph.from_box(box)


def cast(diagram):
    """The hypergraph of a layered diagram with swaps and spiders."""
    return Functor()(diagram)
