import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diagrammar.errors import Connected, Disconnected, IllTyped, TypeMismatch
from diagrammar.monoidal import Box, Diagram, Ty, simplify, spiral

from randomgen import random_monoidal, random_tensor_functor

seeds = st.integers(0, 2 ** 32 - 1)
x, y, z, w = map(Ty, "xyzw")


def close(a, b):
    return np.allclose(a, b, atol=1e-9)


def test_type_monoid():
    assert x @ Ty() == x == Ty() @ x
    assert (x @ y) @ z == x @ (y @ z)
    assert (x @ y)[1:] == y and len(x ** 3) == 3 and x ** 0 == Ty()


def test_layers():
    f, g = Box("f", x, y), Box("g", z, w)
    assert [(str(l.left), l.box.name, str(l.right)) for l in f @ g] == [("Ty()", "f", "z"), ("y", "g", "Ty()")]
    assert (f @ g).dom == x @ z and (f @ g).cod == y @ w


def test_interchange_examples():
    f, g = Box("f", x, y), Box("g", z, w)
    assert (f @ g).interchange(0) == (x @ g >> f @ w)
    with pytest.raises(Connected):
        (f >> Box("h", y, z)).interchange(0)
    with pytest.raises(IndexError):
        f.interchange(0)


def test_effect_then_state_goes_either_way():
    effect, state = Box("e", x, Ty()), Box("s", Ty(), w)
    diagram = effect >> state
    assert diagram.interchange(0) == state @ x >> w @ effect
    assert diagram.interchange(0, left=True) == x @ state >> effect @ w


def test_disconnected_scalars_loop():
    a, b = Box("a", Ty(), Ty()), Box("b", Ty(), Ty())
    with pytest.raises(Disconnected):
        (a @ b).normal_form()


def test_decode_checks_types():
    f = Box("f", x, y)
    with pytest.raises(IllTyped):
        Diagram.decode(y, [(f, 0)])
    with pytest.raises(IllTyped):
        Diagram.decode(x @ x, [(f, 2)])
    with pytest.raises(IllTyped):
        Diagram.decode(x, [(f, -1)])


def test_composition_checks_types():
    with pytest.raises(TypeMismatch):
        Box("f", x, y) >> Box("g", x, y)


def test_spiral_normal_form():
    diagram = spiral(8)
    normal = diagram.normal_form()
    assert sorted(b.name for b in normal.boxes) == sorted(b.name for b in diagram.boxes)
    assert normal.normal_form() == normal


def test_match_and_simplify():
    f, g = Box("f", x, x), Box("g", x, x)
    diagram = f @ y >> g @ y
    found = next(diagram.match(f >> g))
    assert found.subs(f >> g) == diagram
    assert simplify(diagram, [(f >> g, Diagram.id(x))]) == Diagram.id(x @ y)


@given(seeds)
def test_encode_decode_round_trip(seed):
    diagram = random_monoidal(random.Random(seed))
    assert Diagram.decode(*diagram.encode()) == diagram


@given(seeds)
def test_tensor_is_associative_and_unital(seed):
    rng = random.Random(seed)
    f, g, h = (random_monoidal(rng, 2) for _ in range(3))
    assert (f @ g) @ h == f @ (g @ h)
    assert f @ Diagram.id() == f == Diagram.id() @ f


@given(seeds)
def test_dagger_reverses(seed):
    rng = random.Random(seed)
    f, g = random_monoidal(rng, 3), random_monoidal(rng, 3)
    tensor = f @ g
    assert tensor.dagger().dom == tensor.cod and tensor.dagger().cod == tensor.dom
    assert [layer.box for layer in tensor.dagger()] == [box.dagger() for box in reversed(tensor.boxes)]
    assert tensor.dagger().dagger() == tensor


@settings(deadline=None, max_examples=50)
@given(seeds)
def test_interchange_preserves_value(seed):
    rng = random.Random(seed)
    diagram = random_monoidal(rng, rng.randint(2, 6))
    F = random_tensor_functor(rng, diagram, seed=seed % 1000)
    value = F(diagram).array
    for i in range(len(diagram) - 1):
        try:
            moved = diagram.interchange(i, left=rng.random() < .5)
        except Connected:
            continue
        assert moved.dom == diagram.dom and moved.cod == diagram.cod
        assert close(F(moved).array, value)


@settings(deadline=None, max_examples=50)
@given(seeds)
def test_normal_form_is_idempotent_and_sound(seed):
    rng = random.Random(seed)
    diagram = random_monoidal(rng)
    try:
        normal = diagram.normal_form()
    except Disconnected:
        return
    assert normal.normal_form() == normal
    assert sorted(map(str, normal.boxes)) == sorted(map(str, diagram.boxes))
    F = random_tensor_functor(rng, diagram, seed=seed % 1000)
    assert close(F(normal).array, F(diagram).array)


@settings(deadline=None, max_examples=50)
@given(seeds)
def test_functor_preserves_structure(seed):
    rng = random.Random(seed)
    f, g = random_monoidal(rng, 3), random_monoidal(rng, 3)
    F = random_tensor_functor(rng, f @ g, seed=seed % 1000)
    assert close(F(f @ g).array, F(f).tensor(F(g)).array)
    assert close(F(f.dagger()).array, F(f).dagger().array)


def test_tensor_normal_forms_agree():
    f, g = Box("f", x, y), Box("g", z, w)
    assert (x @ g >> f @ w).normal_form() == (f @ g).normal_form()
