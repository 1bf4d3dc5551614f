"""
Pregroup grammars: dictionaries, a chart parser for cups-only reductions,
parse trees, closed (categorial) types and the rewiring of dictionary
entries into monoidal boxes.

>>> n, s = Ty('n'), Ty('s')
>>> lexicon = Dictionary({'Alice': [n], 'Bob': [n], 'loves': [n.r @ s @ n.l]}, s)
>>> len(parse(lexicon, "Alice loves Bob")), parse(lexicon, "loves Alice Bob")
(1, [])
"""

import itertools
import re
from pathlib import Path

from diagrammar import core, monoidal, rigid
from diagrammar.errors import IllFormedTree, TypeMismatch, UnknownWord
from diagrammar.rigid import Box, Cap, Cup, Diagram, Ob, Ty

DEFAULT_CAP = 16


class Word(Box):
    """A dictionary entry, i.e. a state with a word as name."""

    def __init__(self, name, cod, dom=None):
        Box.__init__(self, name, Ty() if dom is None else dom, cod)

    def __repr__(self):
        return f"Word({self.name!r}, {self.cod!r})"


def parse_type(text):
    """
    Read a type such as ``n.r@s@n.l``, suffixes may repeat.

    >>> parse_type("n.r@s@n.l") == Ty('n').r @ Ty('s') @ Ty('n').l
    True
    """
    result = Ty()
    for part in text.split("@"):
        part = part.strip()
        match = re.fullmatch(r"([^.@\s]+)((?:\.[lr])*)", part)
        if not match:
            raise ValueError(f"cannot read the type {text!r}")
        name, suffixes = match.groups()
        z = suffixes.count(".r") - suffixes.count(".l")
        if ".l" in suffixes and ".r" in suffixes:
            raise ValueError(f"mixed adjoints in {part!r}")
        result = result @ Ty(Ob(name, z))
    return result


def type_to_text(ty):
    return "@".join(str(ob) for ob in ty.inside)


class Dictionary:
    """Words with their possible types and a sentence type."""

    def __init__(self, entries, sentence=None):
        self.entries = {word: list(types) for word, types in entries.items()}
        self.sentence = Ty('s') if sentence is None else sentence
        for word, types in self.entries.items():
            for ty in types:
                if not isinstance(ty, Ty):
                    raise TypeMismatch(f"entry {word} has non-type {ty!r}")

    @classmethod
    def from_tsv(cls, text):
        """Read ``word<TAB>type`` lines, ``#`` comments and a ``!s s`` header."""
        entries, sentence = {}, None
        for number, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("!s"):
                sentence = parse_type(line[2:].strip())
                continue
            parts = line.split("\t") if "\t" in line else line.split(None, 1)
            if len(parts) != 2:
                raise ValueError(f"line {number}: expected word and type")
            word, ty = parts[0].strip(), parse_type(parts[1])
            entries.setdefault(word, []).append(ty)
        return cls(entries, sentence)

    @classmethod
    def load(cls, path):
        return cls.from_tsv(Path(path).read_text())

    def to_tsv(self):
        lines = [f"!s {type_to_text(self.sentence)}"]
        for word, types in self.entries.items():
            lines += [f"{word}\t{type_to_text(ty)}" for ty in types]
        return "\n".join(lines) + "\n"

    def words(self, word):
        if word not in self.entries:
            raise UnknownWord(f"{word!r} is not in the dictionary")
        return [Word(word, ty) for ty in self.entries[word]]

    def __contains__(self, word):
        return word in self.entries


def cancels(left, right):
    """Whether a cup fits between two simple types."""
    return left == right.l


def reductions(types, cap=DEFAULT_CAP):
    """
    All non-crossing perfect matchings of ``types`` by cups, as lists of
    index pairs, at most ``cap`` of them (None for all).
    """
    memo = {}

    def span(i, j):
        if (i, j) in memo:
            return memo[i, j]
        if i == j:
            return [[]]
        found = []
        for k in range(i + 1, j, 2):
            if not cancels(types[i], types[k]):
                continue
            for inner in span(i + 1, k):
                for outer in span(k + 1, j):
                    found.append([(i, k)] + inner + outer)
                    if cap is not None and len(found) >= cap:
                        memo[i, j] = found
                        return found
        memo[i, j] = found
        return found

    return span


def cup_diagram(words, types, pairs):
    """Words followed by cups, innermost first and left to right."""
    diagram = Diagram.id(Ty())
    for word in words:
        diagram = diagram @ word
    remaining = list(range(len(types)))
    pending = sorted(pairs, key=lambda p: p[1] - p[0])
    while pending:
        for n, (i, k) in enumerate(pending):
            a = remaining.index(i)
            if remaining[a + 1] == k:
                break
        else:
            raise AssertionError("crossing cups")
        cod = diagram.cod
        diagram = diagram >> cod[:a] @ Cup(types[i], types[k]) @ cod[a + 2:]
        del remaining[a:a + 2]
        pending.pop(n)
    return diagram


def _candidate_entries(dictionary, sentence, cap):
    words = sentence.split() if isinstance(sentence, str) else list(sentence)
    choices = [dictionary.words(word) for word in words]
    combos = itertools.product(*choices)
    return combos if cap is None else itertools.islice(combos, cap)


def parse(dictionary, sentence, target=None, cap=DEFAULT_CAP):
    """
    Every cups-only reduction of the sentence to ``target`` (the sentence
    type by default), deduplicated, at most ``cap`` of them.
    """
    target = dictionary.sentence if target is None else target
    results, seen = [], set()
    for words in _candidate_entries(dictionary, sentence, cap):
        for pairs in matchings(words, target, cap):
            types = [t for w in words for t in w.cod]
            diagram = cup_diagram(words, types, pairs)
            key = repr(diagram)
            if key not in seen:
                seen.add(key)
                results.append(diagram)
            if cap is not None and len(results) >= cap:
                return results
    return results


def matchings(words, target, cap=DEFAULT_CAP):
    """The cup patterns reducing the types of ``words`` to ``target``."""
    types = [t for w in words for t in w.cod]
    span = reductions(types, cap)
    n, m = len(types), len(target)
    found = []

    def place(start, position, acc):
        # target types stay as outputs, the spans between them must cancel
        if position == m:
            for tail in span(start, n):
                found.append(acc + tail)
            return
        for k in range(start, n):
            if types[k] == target[position] and (k - start) % 2 == 0:
                for inner in span(start, k):
                    place(k + 1, position + 1, acc + inner)
                    if cap is not None and len(found) >= cap:
                        return

    place(0, 0, [])
    return found[:cap] if cap is not None else found


def brute_force_matchings(types, target):
    """
    Search every sequence of adjacent cups, as a reference for the parser.
    Returns the set of frozensets of index pairs that leave ``target``.
    """
    target = list(target)
    results, seen = set(), set()

    def search(remaining, pairs):
        key = (remaining, pairs)
        if key in seen:
            return
        seen.add(key)
        if [types[i] for i in remaining] == target:
            results.add(pairs)
        for a in range(len(remaining) - 1):
            i, k = remaining[a], remaining[a + 1]
            if cancels(types[i], types[k]):
                search(remaining[:a] + remaining[a + 2:], pairs | {(i, k)})

    search(tuple(range(len(types))), frozenset())
    return results


def grammatical(dictionary, sentence, target=None):
    return bool(parse(dictionary, sentence, target, cap=1))


# parse trees

def read_tree(text):
    """Read an s-expression into nested lists of strings."""
    tokens = re.findall(r"\(|\)|[^\s()]+", text)
    if not tokens:
        raise IllFormedTree("empty tree")
    position = 0

    def node():
        nonlocal position
        if position >= len(tokens):
            raise IllFormedTree("unexpected end of tree")
        token = tokens[position]
        position += 1
        if token == ")":
            raise IllFormedTree("unexpected closing bracket")
        if token != "(":
            return token
        children = []
        while True:
            if position >= len(tokens):
                raise IllFormedTree("missing closing bracket")
            if tokens[position] == ")":
                position += 1
                return children
            children.append(node())

    tree = node()
    if position != len(tokens):
        raise IllFormedTree("trailing tokens after the tree")
    return tree


class Production(monoidal.Box):
    def __init__(self, dom, cod):
        monoidal.Box.__init__(self, f"Production({dom}, {cod})", dom, cod)


def fromtree(tree, arities=None):
    """
    A monoidal diagram of words and productions from a parse tree given as
    an s-expression or nested lists. ``arities`` optionally fixes the number
    of children of each production label.
    """
    if isinstance(tree, str):
        tree = read_tree(tree)
    if not isinstance(tree, list) or len(tree) < 2 or not isinstance(tree[0], str):
        raise IllFormedTree(f"expected (label children...), got {tree!r}")
    label, children = tree[0], tree[1:]
    if len(children) == 1 and isinstance(children[0], str):
        return monoidal.Box(children[0], monoidal.Ty(), monoidal.Ty(label))
    if any(isinstance(child, str) for child in children):
        raise IllFormedTree(f"node {label} mixes words and subtrees")
    if arities is not None and arities.get(label, len(children)) != len(children):
        raise IllFormedTree(f"{label} takes {arities[label]} children, got {len(children)}")
    subtrees = monoidal.Diagram.id(monoidal.Ty())
    for child in children:
        subtrees = subtrees @ fromtree(child, arities)
    return subtrees >> Production(subtrees.cod, monoidal.Ty(label))


# closed types

class Exp(core.Ob):
    """An exponential object, i.e. a single closed type."""

    def __init__(self, base, exponent):
        self.base, self.exponent = base, exponent
        core.Ob.__init__(self, str(self))

    def __eq__(self, other):
        return type(self) is type(other) and (self.base, self.exponent) == (other.base, other.exponent)

    def __hash__(self):
        return hash((type(self).__name__, self.base, self.exponent))

    def __str__(self):
        return f"({self.base} ** {self.exponent})"

    def __repr__(self):
        return f"{type(self).__name__}({self.base!r}, {self.exponent!r})"


class Over(Exp):
    def __str__(self):
        return f"({self.base} << {self.exponent})"


class Under(Exp):
    def __str__(self):
        return f"({self.exponent} >> {self.base})"


class ClosedTy(monoidal.Ty):
    """
    >>> x, y = ClosedTy('x'), ClosedTy('y')
    >>> print(x << y, y >> x)
    (x << y) (y >> x)
    """

    def __lshift__(self, other):
        return over(self, other)

    def __rshift__(self, other):
        if isinstance(other, monoidal.Ty):
            return under(self, other)
        return NotImplemented


def over(base, exponent):
    return ClosedTy(Over(base, exponent))


def under(exponent, base):
    return ClosedTy(Under(base, exponent))


class ClosedDiagram(monoidal.Diagram):
    ty_factory = ClosedTy

    @staticmethod
    def ev(base, exponent, left=True):
        return Ev(over(base, exponent) if left else under(exponent, base))

    def curry(self, n=1, left=True):
        return Curry(self, n, left)

    def uncurry(self, left=True):
        exp, = self.cod.inside
        base, exponent = exp.base, exp.exponent
        if left:
            return self @ exponent >> Ev(over(base, exponent))
        return exponent @ self >> Ev(under(exponent, base))

    @classmethod
    def type_raise(cls, x, y, left=True):
        """``x`` to ``y << (x >> y)``, or to ``(y << x) >> y`` when not left."""
        if left:
            return cls.id(under(x, y)).uncurry(left=False).curry()
        return cls.id(over(y, x)).uncurry().curry(left=False)


ClosedDiagram.factory = ClosedDiagram


class ClosedBox(monoidal.Box, ClosedDiagram):
    __eq__, __hash__ = monoidal.Box.__eq__, monoidal.Box.__hash__
    __repr__, __str__ = monoidal.Box.__repr__, monoidal.Box.__str__


ClosedBox.box_factory = ClosedBox


class ClosedWord(ClosedBox):
    def __init__(self, name, cod):
        ClosedBox.__init__(self, name, ClosedTy(), cod)


class Ev(ClosedBox):
    def __init__(self, x):
        exp, = x.inside
        self.base, self.exponent = exp.base, exp.exponent
        self.left = isinstance(exp, Over)
        dom = x @ self.exponent if self.left else self.exponent @ x
        ClosedBox.__init__(self, f"Ev{x}", dom, self.base)


class Curry(ClosedBox):
    def __init__(self, diagram, n=1, left=True):
        self.diagram, self.n, self.left = diagram, n, left
        dom = diagram.dom
        if left:
            new_dom, cod = dom[:len(dom) - n], over(diagram.cod, dom[len(dom) - n:])
        else:
            new_dom, cod = dom[n:], under(dom[:n], diagram.cod)
        ClosedBox.__init__(self, f"Curry({diagram}, {n}, {left})", new_dom, cod, data=(n, left))


def rigid_ev(base, exponent, left=True):
    if left:
        return base @ Diagram.cups(exponent.l, exponent)
    return Diagram.cups(exponent, exponent.r) @ base


def rigid_curry(diagram, n=1, left=True):
    """Bend the last ``n`` inputs (first ``n`` when not left) with caps."""
    dom = diagram.dom
    if left:
        base, exponent = dom[:len(dom) - n], dom[len(dom) - n:]
        return base @ Diagram.caps(exponent, exponent.l) >> diagram @ exponent.l
    base, exponent = dom[n:], dom[:n]
    return Diagram.caps(exponent.r, exponent) @ base >> exponent.r @ diagram


class ClosedToRigid(monoidal.Functor):
    """
    Realise closed types in a rigid category: ``b << e`` is ``b @ e.l`` and
    ``e >> b`` is ``e.r @ b``, evaluations are cups and currying uses caps.
    """

    dom = core.Category(ClosedTy, ClosedDiagram)
    cod = core.Category(Ty, Diagram)

    def __init__(self, ob=None, ar=None):
        super().__init__(ob or {}, ar or {})

    def map_simple_ob(self, ob):
        if isinstance(ob, Over):
            return self(ob.base) @ self(ob.exponent).l
        if isinstance(ob, Under):
            return self(ob.exponent).r @ self(ob.base)
        if isinstance(self.ob, dict) and (monoidal.Ty(ob) in self.ob or ob in self.ob):
            return monoidal.Functor.map_simple_ob(self, ob)
        return Ty(ob.name)

    def map_box(self, box):
        if isinstance(box, Ev):
            return rigid_ev(self(box.base), self(box.exponent), box.left)
        if isinstance(box, Curry):
            exp, = box.cod.inside
            return rigid_curry(self(box.diagram), len(self(exp.exponent)), box.left)
        if isinstance(self.ar, dict) and box in self.ar:
            return monoidal.Functor.map_box(self, box)
        return Box(box.name, self(box.dom), self(box.cod))


def no_man_is_an_island():
    n, np_, s = ClosedTy('n'), ClosedTy('np'), ClosedTy('s')
    man, island = ClosedWord("man", n), ClosedWord("island", n)
    no, an = ClosedWord("no", np_ << n), ClosedWord("an", np_ << n)
    is_ = ClosedWord("is", (np_ >> s) << np_)
    return (no @ man @ is_ @ an @ island
            >> Ev(np_ << n) @ ((np_ >> s) << np_) @ Ev(np_ << n)
            >> ClosedDiagram.type_raise(np_, s) @ Ev((np_ >> s) << np_)
            >> Ev(s << (np_ >> s)))


# rewiring dictionary entries into monoidal boxes

def dependency_shape(ty):
    """Split ``x.r @ y @ z.l`` into (x, y, z), or None if not of that shape."""
    zs = [ob.z for ob in ty.inside]
    if any(z not in (-1, 0, 1) for z in zs) or zs != sorted(zs, reverse=True):
        return None
    left = Ty(*[ob for ob in ty.inside if ob.z == 1]).l
    middle = Ty(*[ob for ob in ty.inside if ob.z == 0])
    right = Ty(*[ob for ob in ty.inside if ob.z == -1]).r
    return left, middle, right


def trivial_wiring(name, ty):
    """One box per simple type, bent into place by iterated transposes."""
    result = Diagram.id(Ty())
    for i, ob in enumerate(ty.inside):
        base, z = Ty(ob.name), ob.z
        box = Box(f"{name}_{i}", Ty(), base) if z % 2 == 0 else Box(f"{name}_{i}", base, Ty())
        for _ in range(abs(z)):
            box = box.transpose(left=z < 0)
        result = result @ box
    return result


def entry_wiring(word):
    """
    Rewire a word of type ``x.r @ y @ z.l`` as a box from ``x @ z`` to ``y``
    with caps, falling back to the trivial wiring for other shapes.
    """
    shape = dependency_shape(word.cod)
    if shape is None:
        return trivial_wiring(word.name, word.cod)
    x, y, z = shape
    box = Box(word.name, x @ z, y)
    return (Diagram.caps(x.r, x) @ Diagram.caps(z, z.l)
            >> x.r @ box @ z.l)


def who_wiring(n=None, s=None, x=None):
    """The factorisation of the subject relative pronoun through two boxes."""
    n, s, x = n or Ty('n'), s or Ty('s'), x or Ty('x')
    return (Cap(n.r, n)
            >> n.r @ Box("who_1", n, x @ n)
            >> n.r @ x @ Cap(s, s.l) @ n
            >> n.r @ Box("who_2", x @ s, n) @ s.l @ n)


def wiring(diagram, overrides=None):
    """Apply the rewiring functor to a grammatical structure."""
    overrides = overrides or {}

    def ar(box):
        if box.name in overrides and overrides[box.name].cod == box.cod:
            return overrides[box.name]
        return entry_wiring(box)

    return rigid.Functor(ob=lambda ty: ty, ar=ar)(diagram)


def autonomise(diagram, overrides=None):
    """Rewire then remove the snakes."""
    return wiring(diagram, overrides).normal_form()
