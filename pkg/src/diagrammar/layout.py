"""
Embedding diagrams in the plane and reading them back.

A drawing is a ``PlaneGraph``: one node per box, one node per box port and
one node per end of the diagram's boundary, with straight edges between
them. Wires run from a ``cod`` node down to a ``dom`` node; the boundary of
the diagram is a row of ``cod`` nodes at layer -1 and a row of ``dom``
nodes at layer ``len(diagram)``. y grows downward.

>>> from diagrammar.monoidal import Ty, Box
>>> x = Ty('x')
>>> f, g = Box('f', x, x @ x), Box('g', x @ x, x)
>>> d = f >> g
>>> read(draw(d)) == d
True
"""

from collections import namedtuple
from xml.sax.saxutils import escape

from diagrammar import core, monoidal, rigid, symmetric
from diagrammar.errors import IllTyped, NonGeneric, NonProgressive

Node = namedtuple("Node", ["kind", "label", "i", "j"])

BOX_HEIGHT = 0.4
SCALE = 40


class PlaneGraph:
    def __init__(self, nodes=None, edges=None, positions=None, factory=None):
        self.nodes = list(nodes or [])
        self.edges = list(edges or [])
        self.positions = dict(positions or {})
        self.factory = factory or monoidal.Diagram

    def add_node(self, node, x, y):
        self.nodes.append(node)
        self.positions[node] = (float(x), float(y))

    def add_edge(self, source, target):
        self.edges.append((source, target))

    def shift(self, dx=0.0, dy=0.0):
        return PlaneGraph(self.nodes, self.edges,
                          {n: (x + dx, y + dy) for n, (x, y) in self.positions.items()},
                          self.factory)

    def boxes(self):
        return sorted((n for n in self.nodes if n.kind == "box"), key=lambda n: n.j)

    def ports(self, box_node, kind):
        return sorted((n for n in self.nodes if n.kind == kind and n.j == box_node.j),
                      key=lambda n: n.i)

    @property
    def inputs(self):
        return sorted((n for n in self.nodes if n.kind == "cod" and n.j == -1), key=lambda n: n.i)

    @property
    def outputs(self):
        return sorted((n for n in self.nodes if n.kind == "dom" and n.j == self.depth),
                      key=lambda n: n.i)

    @property
    def depth(self):
        return max([n.j for n in self.nodes if n.kind == "box"], default=-1) + 1

    def __eq__(self, other):
        return isinstance(other, PlaneGraph) and set(self.nodes) == set(other.nodes) \
            and set(self.edges) == set(other.edges) and self.positions == other.positions

    def __repr__(self):
        return f"PlaneGraph(nodes={len(self.nodes)}, edges={len(self.edges)})"


def make_space(positions, scan, box, offset):
    """
    Shift nodes right so that the outputs of ``box`` fit between the scan
    nodes to its left and to its right. Returns the x of its left edge.
    """
    n_dom = len(box.dom)
    if n_dom:
        left = positions[scan[offset]][0]
    elif offset > 0:
        left = positions[scan[offset - 1]][0] + 1
    elif scan:
        left = positions[scan[0]][0]
    else:
        left = 0.0
    right = scan[offset + n_dom:]
    if right:
        threshold = positions[right[0]][0]
        if n_dom == 0 and offset == 0:
            threshold = left
        delta = left + max(len(box.cod), 1) - threshold
        if delta > 0:
            for node, (x, y) in positions.items():
                if x >= threshold:
                    positions[node] = (x + delta, y)
    return left


def draw(diagram):
    """Embed a diagram in the plane with every wire a straight segment."""
    graph = PlaneGraph(factory=type(diagram).factory)
    scan = []
    for i, ob in enumerate(diagram.dom.inside):
        node = Node("cod", ob, i, -1)
        graph.add_node(node, i, -1)
        scan.append(node)
    for j, (box, offset) in enumerate(zip(diagram.boxes, diagram.offsets)):
        left = make_space(graph.positions, scan, box, offset)
        xs = []
        box_node = Node("box", box, 0, j)
        for i, ob in enumerate(box.dom.inside):
            port = Node("dom", ob, i, j)
            x = graph.positions[scan[offset + i]][0]
            graph.add_node(port, x, j - BOX_HEIGHT / 2)
            graph.add_edge(scan[offset + i], port)
            xs.append(x)
        outputs = []
        for i, ob in enumerate(box.cod.inside):
            port = Node("cod", ob, i, j)
            graph.add_node(port, left + i, j + BOX_HEIGHT / 2)
            outputs.append(port)
            xs.append(left + i)
        center = (min(xs) + max(xs)) / 2 if xs else left + .5
        graph.add_node(box_node, center, j)
        for port in graph.ports(box_node, "dom"):
            graph.add_edge(port, box_node)
        for port in outputs:
            graph.add_edge(box_node, port)
        scan = scan[:offset] + outputs + scan[offset + len(box.dom):]
    depth = len(diagram)
    for i, node in enumerate(scan):
        end = Node("dom", node.label, i, depth)
        graph.add_node(end, graph.positions[node][0], depth)
        graph.add_edge(node, end)
    return graph


def _check_progressive(graph):
    for source, target in graph.edges:
        if graph.positions[target][1] <= graph.positions[source][1]:
            raise NonProgressive(f"the wire from {source} to {target} goes back up")


def _type(factory, obs):
    ty_class = type(factory.id().dom) if hasattr(factory, "id") else monoidal.Ty
    try:
        return ty_class(*obs)
    except TypeError:
        return monoidal.Ty(*obs)


def read(graph):
    """Recover the diagram drawn by a labeled generic progressive plane graph."""
    _check_progressive(graph)
    heights = {}
    for node in (n for n in graph.nodes if n.kind == "box"):
        y = graph.positions[node][1]
        if y in heights:
            raise NonGeneric(f"{heights[y].label} and {node.label} are both at height {y}")
        heights[y] = node
    incoming = {}
    for source, target in graph.edges:
        incoming.setdefault(target, []).append(source)
    x_of = lambda n: graph.positions[n][0]
    scan = sorted(graph.inputs, key=x_of)
    dom = _type(graph.factory, [n.label for n in scan])
    pairs = []
    for y in sorted(heights):
        box_node = heights[y]
        box = box_node.label
        ports = sorted((n for n in graph.nodes if n.kind == "dom" and n.j == box_node.j),
                       key=x_of)
        sources = [incoming.get(p, [None])[0] for p in ports]
        if sources:
            if any(s not in scan for s in sources):
                raise IllTyped(f"{box} is not connected to the current wires")
            offset = scan.index(sources[0])
            if scan[offset:offset + len(sources)] != sources:
                raise IllTyped(f"the inputs of {box} are not adjacent")
        else:
            offset = sum(1 for n in scan if x_of(n) < x_of(box_node))
        outputs = sorted((n for n in graph.nodes if n.kind == "cod" and n.j == box_node.j),
                         key=x_of)
        pairs.append((box, offset))
        scan = scan[:offset] + outputs + scan[offset + len(sources):]
    ends = sorted(graph.outputs, key=x_of)
    if [incoming.get(end, [None])[0] for end in ends] != scan:
        raise IllTyped("the outputs do not match the last row of wires")
    return graph.factory.decode(dom, pairs)


# rendering

def _fmt(value):
    text = f"{value:.1f}"
    return "0.0" if text == "-0.0" else text


def box_kind(box):
    if isinstance(box, rigid.Cup) or (isinstance(box, rigid.Cap) and box.is_dagger):
        return "cup"
    if isinstance(box, rigid.Cap) or isinstance(box, rigid.Cup):
        return "cap"
    if isinstance(box, symmetric.Braid):
        return "swap"
    if isinstance(box, (symmetric.Spider, symmetric.Copy, symmetric.Merge)):
        return "spider"
    if isinstance(box, core.Bubble):
        return "bubble"
    return "box"


def box_label(box):
    if isinstance(box, core.Bubble):
        return box.method
    return str(getattr(box, "name", box))


def _svg_point(graph, node, margin):
    x, y = graph.positions[node]
    return (x + margin) * SCALE, (y + 1 + margin) * SCALE


def _wire_path(p, q):
    (x0, y0), (x1, y1) = p, q
    if _fmt(x0) == _fmt(x1):
        return f"M {_fmt(x0)} {_fmt(y0)} L {_fmt(x1)} {_fmt(y1)}"
    ym = (y0 + y1) / 2
    return f"M {_fmt(x0)} {_fmt(y0)} C {_fmt(x0)} {_fmt(ym)} {_fmt(x1)} {_fmt(ym)} {_fmt(x1)} {_fmt(y1)}"


def emit_svg(graph, wire_labels=False):
    """An SVG document for the drawing, byte-identical for identical input."""
    margin = 1.0
    xs = [x for x, _ in graph.positions.values()] or [0.0]
    width = (max(xs) - min(min(xs), 0) + 2 * margin) * SCALE
    height = (graph.depth + 1 + 2 * margin) * SCALE
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
             f'width="{_fmt(width)}" height="{_fmt(height)}" '
             f'viewBox="0.0 0.0 {_fmt(width)} {_fmt(height)}">',
             '<g fill="none" stroke="black" stroke-width="1.5">']
    point = lambda n: _svg_point(graph, n, margin)
    special = {}
    for node in graph.boxes():
        special[node] = box_kind(node.label)
    for source, target in graph.edges:
        if source in special or target in special:
            continue
        lines.append(f'<path class="wire" d="{_wire_path(point(source), point(target))}"/>')
        if wire_labels and source.kind == "cod":
            x, y = point(source)
            lines.append(f'<text class="label" x="{_fmt(x + 4)}" y="{_fmt(y + 12)}" '
                         f'stroke="none" fill="black" font-size="10">{escape(str(source.label))}</text>')
    for node in graph.boxes():
        kind, box = special[node], node.label
        ins, outs = graph.ports(node, "dom"), graph.ports(node, "cod")
        cx, cy = point(node)
        if kind in ("cup", "cap"):
            ends = ins if kind == "cup" else outs
            (x0, y0), (x1, y1) = point(ends[0]), point(ends[1])
            bend = cy + (SCALE * .4 if kind == "cup" else -SCALE * .4)
            lines.append(f'<path class="{kind}" d="M {_fmt(x0)} {_fmt(y0)} C {_fmt(x0)} {_fmt(bend)} '
                         f'{_fmt(x1)} {_fmt(bend)} {_fmt(x1)} {_fmt(y1)}"/>')
            continue
        if kind == "swap":
            for a, b in ((ins[0], outs[1]), (ins[1], outs[0])):
                lines.append(f'<path class="swap" d="{_wire_path(point(a), point(b))}"/>')
            continue
        for port in ins + outs:
            lines.append(f'<path class="leg" d="{_wire_path(point(port), (cx, point(port)[1]) if kind != "spider" else (cx, cy))}"/>')
        if kind == "spider":
            lines.append(f'<circle class="spider" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="5.0" fill="black"/>')
            continue
        xs = [point(p)[0] for p in ins + outs] or [cx]
        left, right = min(xs) - SCALE * .4, max(xs) + SCALE * .4
        top = cy - SCALE * BOX_HEIGHT / 2
        corner = ' rx="8.0"' if kind == "bubble" else ""
        lines.append(f'<rect class="{kind}" x="{_fmt(left)}" y="{_fmt(top)}" width="{_fmt(right - left)}" '
                     f'height="{_fmt(SCALE * BOX_HEIGHT)}"{corner} fill="white"/>')
        lines.append(f'<text x="{_fmt(cx)}" y="{_fmt(cy + 4)}" text-anchor="middle" stroke="none" '
                     f'fill="black" font-size="12">{escape(box_label(box))}</text>')
    lines += ["</g>", "</svg>", ""]
    return "\n".join(lines)


def _tikz_point(graph, node):
    x, y = graph.positions[node]
    return f"({_fmt(x)}, {_fmt(-y)})"


def emit_tikz(graph, wire_labels=False):
    """A tikzpicture for the drawing; y is negated since TikZ grows upward."""
    lines = [r"\begin{tikzpicture}"]
    special = {node: box_kind(node.label) for node in graph.boxes()}
    for source, target in graph.edges:
        if source in special or target in special:
            continue
        label = f" node[right] {{${source.label}$}}" if wire_labels and source.kind == "cod" else ""
        lines.append(rf"\draw {_tikz_point(graph, source)} --{label} {_tikz_point(graph, target)};")
    for node in graph.boxes():
        kind, box = special[node], node.label
        ins, outs = graph.ports(node, "dom"), graph.ports(node, "cod")
        here = _tikz_point(graph, node)
        if kind in ("cup", "cap"):
            a, b = ins if kind == "cup" else outs
            angle = -90 if kind == "cup" else 90
            lines.append(rf"\draw[{kind}] {_tikz_point(graph, a)} to[out={angle}, in={angle}] "
                         rf"{_tikz_point(graph, b)};")
        elif kind == "swap":
            for a, b in ((ins[0], outs[1]), (ins[1], outs[0])):
                lines.append(rf"\draw[swap] {_tikz_point(graph, a)} to[out=-90, in=90] "
                             rf"{_tikz_point(graph, b)};")
        else:
            for port in ins + outs:
                lines.append(rf"\draw {_tikz_point(graph, port)} -- {here};")
            if kind == "spider":
                lines.append(rf"\node[circle, fill, inner sep=1.5pt] at {here} {{}};")
            else:
                shape = "rounded corners, " if kind == "bubble" else ""
                lines.append(rf"\node[draw, {shape}fill=white] at {here} {{{box_label(box)}}};")
    lines.append(r"\end{tikzpicture}")
    return "\n".join(lines) + "\n"
