import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diagrammar.errors import NotPure
from diagrammar.quantum import (
    C, CX, CQ, Bra, Channel, Circuit, Discard, Encode, H, Ket, Measure, Q, Rx, Rz, Scalar,
    Sqrt, X, Y, Z, bit, closed_value, double, is_pure, mixed_eval, probabilities, pure_eval,
    qubit, random_circuit, strip_scalars)
from diagrammar.rigid import Ty
from diagrammar.tensor import Tensor

seeds = st.integers(0, 2 ** 32 - 1)
phases = st.floats(-2, 2, allow_nan=False)


def test_bell_distribution():
    circuit = Ket(0, 0) >> H @ qubit >> CX >> Measure() @ Measure()
    assert circuit.eval() == Channel([[.5, 0, 0, .5]], CQ(), C([2, 2]))


def test_born_rule_bubble():
    bubble = (Ket(0) >> H >> Bra(0)).bubble(method="squared_amplitude")
    assert abs(pure_eval(bubble).array.item() - .5) < 1e-12


@pytest.mark.parametrize("gate", [X, Y, Z, H, CX, Rz(.3), Rx(-.7)])
def test_gates_are_unitary(gate):
    assert pure_eval(gate >> gate.dagger()) == Tensor[complex].id(pure_eval(gate).dom)


@given(phases)
def test_rotations_are_periodic_and_invertible(phase):
    for gate in (Rz, Rx):
        assert pure_eval(gate(phase)) == pure_eval(gate(phase + 2))
        assert pure_eval(gate(phase) >> gate(-phase)) == Tensor[complex].id([2])


def test_rx_is_conjugated_rz():
    assert pure_eval(Rx(.4)) == pure_eval(H >> Rz(.4) >> H)


def test_measure_and_encode():
    assert (Encode() >> Measure()).eval() == Channel.id(C([2]))
    assert (Measure() >> Encode()).eval() != Channel.id(Q([2]))


def test_snake_on_qubits():
    snake = Circuit.caps(qubit, qubit) @ qubit >> qubit @ Circuit.cups(qubit, qubit)
    assert pure_eval(snake) == Tensor[complex].id([2])


def test_swap_of_classical_and_quantum():
    state = Ket(1) @ (Ket(0) >> Measure()) >> Circuit.swap(qubit, bit)
    expected = mixed_eval(Ket(0) >> Measure()) @ mixed_eval(Ket(1))
    assert mixed_eval(state) == expected


def test_pure_evaluation_rejects_measurements():
    with pytest.raises(NotPure):
        pure_eval(Ket(0) >> Measure())
    with pytest.raises(NotPure):
        pure_eval(Scalar(.5))
    assert not is_pure(Ket(0) >> Measure()) and is_pure(Ket(0) >> H)


def test_ket_digits_checked():
    with pytest.raises(ValueError):
        Ket(2)


@pytest.mark.parametrize("box", [X, Y, Z, H, CX, Ket(0), Ket(1, 0), Rz(.3), Rx(.7),
                                 Measure(), Encode(), Discard()])
def test_causal_boxes(box):
    assert mixed_eval(box).is_causal()


@pytest.mark.parametrize("box", [Bra(0), Scalar(-1), Scalar(2)])
def test_non_causal_boxes(box):
    assert not mixed_eval(box).is_causal()


@given(seeds)
def test_mixed_evaluation_doubles_pure_evaluation(seed):
    rng = random.Random(seed)
    circuit = random_circuit(rng, rng.randint(1, 3), rng.randint(0, 6), ["a"])
    assignment = {"a": rng.uniform(-1, 1)}
    assert mixed_eval(circuit, assignment) == double(pure_eval(circuit, assignment))


@given(seeds)
def test_measured_circuits_give_distributions(seed):
    rng = random.Random(seed)
    circuit = random_circuit(rng, rng.randint(1, 3), rng.randint(0, 6), pure=False)
    distribution = probabilities(circuit)
    assert np.all(distribution > -1e-12) and abs(distribution.sum() - 1) < 1e-9


@given(seeds)
def test_closed_value_agrees_with_mixed_evaluation(seed):
    # amplitude squared route against the density matrix route
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    circuit = random_circuit(rng, n, rng.randint(0, 6), ["a"]) >> Bra(*[rng.randrange(2) for _ in range(n)])
    circuit = circuit >> Sqrt(3) >> Scalar(.5)
    assignment = {"a": rng.uniform(-1, 1)}
    expected = mixed_eval(circuit, assignment).array.item()
    assert abs(closed_value(circuit, assignment) - expected) < 1e-9


def test_strip_scalars():
    circuit = Ket(0) >> Sqrt(2) @ qubit >> Scalar(.5) @ qubit >> Scalar(3, is_pure=True) @ qubit
    stripped, factor = strip_scalars(circuit)
    assert stripped == Ket(0) and abs(factor - 2 * .5 * 9) < 1e-12


def test_discard_traces_out():
    circuit = Ket(0, 0) >> H @ qubit >> CX >> Measure() @ Discard()
    assert mixed_eval(circuit) == Channel([[.5, .5]], CQ(), C([2]))


def test_free_variables():
    from diagrammar.affine import Var
    v = Var("v")
    circuit = Ket(0) >> Rz(2 * v) >> Rx(Var("w") + 1)
    assert circuit.free_variables == {"v", "w"}
    assert Ty() == circuit.dom
