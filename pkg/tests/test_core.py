import pytest
from hypothesis import given, strategies as st

from diagrammar.core import Arrow, Box, Bubble, Functor, Ob, Sum
from diagrammar.errors import TypeMismatch, UnknownBox, UnknownMethod

OBS = [Ob(name) for name in "xyz"]


@st.composite
def paths(draw, dom=None):
    """Random arrows through the objects x, y, z."""
    current = dom or draw(st.sampled_from(OBS))
    start, boxes = current, []
    for k in range(draw(st.integers(0, 6))):
        cod = draw(st.sampled_from(OBS))
        if draw(st.booleans()):
            boxes.append(Box(f"f{k}{cod}{current}", cod, current).dagger())
        else:
            boxes.append(Box(f"f{k}{current}{cod}", current, cod))
        current = cod
    return Arrow(tuple(boxes), start, current)


def test_ob_equality():
    assert Ob("x") == Ob("x") and Ob("x") != Ob("y")
    assert hash(Ob("x")) == hash(Ob("x"))
    with pytest.raises(ValueError):
        Ob("")


def test_composition_checks_types():
    f, g = Box("f", Ob("x"), Ob("y")), Box("g", Ob("x"), Ob("y"))
    with pytest.raises(TypeMismatch):
        f >> g
    with pytest.raises(TypeMismatch):
        Arrow((f, g), Ob("x"), Ob("y"))


def test_slicing():
    x, y, z = OBS
    f, g = Box("f", x, y), Box("g", y, z)
    arrow = f >> g
    assert arrow[0] == f and arrow[1:] == g >> Arrow.id(z) and arrow[::-1] == arrow.dagger()
    assert arrow[2:] == Arrow.id(z)


@given(paths())
def test_identity_laws(arrow):
    assert Arrow.id(arrow.dom) >> arrow == arrow == arrow >> Arrow.id(arrow.cod)


@given(paths(), st.data())
def test_associativity(f, data):
    g = data.draw(paths(f.cod))
    h = data.draw(paths(g.cod))
    assert (f >> g) >> h == f >> (g >> h)


@given(paths(), st.data())
def test_dagger_is_contravariant_involution(f, data):
    g = data.draw(paths(f.cod))
    assert (f >> g).dagger() == g.dagger() >> f.dagger()
    assert f.dagger().dagger() == f


def test_box_dagger():
    f = Box("f", Ob("x"), Ob("y"))
    assert f.dagger().dom == Ob("y") and f.dagger().is_dagger
    assert f.dagger().dagger() == f and f.dagger() != f


def test_sums():
    x, y = Ob("x"), Ob("y")
    f, g = Box("f", x, y), Box("g", x, y)
    h = Box("h", y, x)
    total = f + g
    assert len(total) == 2 and total == g + f
    assert (total >> h).terms == (f >> h, g >> h)
    assert Arrow.zero(x, y) + f == f
    assert total.dagger() == f.dagger() + g.dagger()
    with pytest.raises(TypeMismatch):
        f + h


def test_functor_on_generators():
    x, y, z = OBS
    f, g, h = Box("f", x, y), Box("g", y, z), Box("h", z, x)
    F = Functor(ob={x: y, y: z, z: x}, ar={f: g, g: h, h: f})
    assert F(f >> g >> h) == g >> h >> f
    assert F(f.dagger()) == g.dagger()
    assert F(f + f) == g + g
    with pytest.raises(UnknownBox):
        Functor(ob={}, ar={})(f)


@given(paths(), st.data())
def test_functor_preserves_composition(f, data):
    g = data.draw(paths(f.cod))
    F = Functor(ob=lambda ob: ob, ar=lambda box: box)
    assert F(f >> g) == F(f) >> F(g)
    assert F(f.dagger()) == F(f).dagger()


def test_bubble_without_operator():
    x = Ob("x")
    bubble = Bubble(Box("f", x, x), method="nonsense")
    F = Functor(ob={x: x}, ar=lambda box: box)
    with pytest.raises(UnknownMethod):
        F(bubble)


def test_sum_equality_with_single_term():
    x = Ob("x")
    f = Box("f", x, x)
    assert Sum([f]) == f and f == Sum([f])
