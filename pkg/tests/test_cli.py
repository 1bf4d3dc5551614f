import json
import random
import shutil
import subprocess
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diagrammar import cli, monoidal, rigid
from diagrammar.affine import Var
from diagrammar.grammar import Dictionary, Word, parse
from diagrammar.quantum import (
    CX, Bra, Discard, Encode, H, Ket, Measure, MixedState, Rx, Rz, Scalar, Sqrt, qubit)
from diagrammar.symmetric import Box, Copy, Merge, Spider, Swap

from randomgen import random_hypergraph, random_monoidal

seeds = st.integers(0, 2 ** 32 - 1)
x = rigid.Ty("x")
v = Var("v")


def data_file(name):
    return str(resources.files("diagrammar").joinpath(f"data/{name}"))


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, diagram, name="d.json"):
    path = tmp_path / name
    path.write_text(cli.dumps(diagram))
    return str(path)


EXAMPLES = [
    Ket(0, 0) >> H @ qubit >> CX >> Measure() @ Discard(),
    Ket(1) >> Rz(2 * v - .5) >> Rx(.25) >> Bra(0) >> Sqrt(2) >> Scalar(.5),
    Encode() >> MixedState() @ qubit >> Swap(qubit, qubit) >> Discard() @ Measure(),
    (Ket(0) >> H >> Bra(0)).bubble(method="squared_amplitude"),
    Spider(1, 2, x, .3) >> Swap(x, x) >> Copy(x) @ x >> x @ Merge(x),
    rigid.Cap(x, x.l) @ rigid.Cup(x.l, x),
    Word("Alice", rigid.Ty("n")) @ rigid.Box("f", x.r, x.l),
    Box("f", x, x) + Box("g", x, x),
]


@pytest.mark.parametrize("diagram", EXAMPLES, ids=range(len(EXAMPLES)))
def test_json_round_trip_examples(diagram):
    data = cli.encode(diagram)
    assert cli.decode(data) == diagram
    assert cli.encode(cli.decode(json.loads(json.dumps(data)))) == data


@given(seeds)
def test_json_round_trip_random(seed):
    rng = random.Random(seed)
    for diagram in (random_monoidal(rng), random_hypergraph(rng)):
        text = cli.dumps(diagram)
        assert cli.loads(text) == diagram and cli.dumps(cli.loads(text)) == text


def test_parse_exit_codes(capsys):
    toy = data_file("toy.tsv")
    code, out, _ = run(capsys, "parse", "--dict", toy, "--sentence", "Alice loves Bob")
    assert code == 0 and cli.loads(out).cod == rigid.Ty("s")
    code, out, err = run(capsys, "parse", "--dict", toy, "--sentence", "loves Alice Bob")
    assert code == 2 and out == "" and err.startswith("error: Ungrammatical ")
    code, _, err = run(capsys, "parse", "--dict", toy, "--sentence", "Carol loves Bob")
    assert code == 1 and err.startswith("error: UnknownWord ")
    code, _, err = run(capsys, "parse", "--sentence", "Alice")
    assert code == 1 and err.startswith("error: UsageError ")
    code, _, err = run(capsys, "parse", "--dict", "/nonexistent.tsv", "--sentence", "Alice")
    assert code == 1 and err.startswith("error: UsageError ")


def test_parse_all(capsys):
    code, out, _ = run(capsys, "parse", "--dict", data_file("toy.tsv"), "--sentence",
                       "Alice who loves Bob", "--target", "n", "--all")
    parses = json.loads(out)
    assert code == 0 and len(parses) >= 1


def test_unknown_command(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 1 and err.startswith("error: UsageError ")


def test_malformed_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "normalize", str(path))
    assert code == 1 and err.startswith("error: ")


def test_normalize(capsys, tmp_path):
    f, g = monoidal.Box("f", monoidal.Ty("x"), monoidal.Ty("y")), monoidal.Box("g", monoidal.Ty("z"), monoidal.Ty("w"))
    code, out, _ = run(capsys, "normalize", write(tmp_path, monoidal.Ty("x") @ g >> f @ monoidal.Ty("w")))
    assert code == 0 and cli.loads(out) == f @ g
    snake = rigid.Diagram.caps(x, x.l) @ x >> x @ rigid.Diagram.cups(x.l, x)
    code, out, _ = run(capsys, "normalize", "--snakes", write(tmp_path, snake))
    assert code == 0 and cli.loads(out) == rigid.Diagram.id(x)
    scalars = monoidal.Box("a", monoidal.Ty(), monoidal.Ty()) @ monoidal.Box("b", monoidal.Ty(), monoidal.Ty())
    code, _, err = run(capsys, "normalize", write(tmp_path, scalars))
    assert code == 1 and err.startswith("error: Disconnected ")


def test_eval_circuit(capsys, tmp_path):
    bell = Ket(0, 0) >> H @ qubit >> CX >> Measure() @ Measure()
    code, out, _ = run(capsys, "eval", write(tmp_path, bell))
    result = json.loads(out)
    assert code == 0 and np.allclose(result["matrix"], [[.5, 0, 0, .5]])
    assert result["cod"] == {"classical": [2, 2], "quantum": []}
    code, out, _ = run(capsys, "eval", write(tmp_path, Ket(0) >> Rx(v)), "--params", "v=0.5")
    assert code == 0 and json.loads(out)["shape"] == [1, 2]
    code, _, err = run(capsys, "eval", write(tmp_path, Ket(0) >> Rx(v)), "--params", "v")
    assert code == 1 and err.startswith("error: UsageError ")
    code, _, err = run(capsys, "eval", write(tmp_path, Ket(0) >> Rx(v)))
    assert code == 1 and err.startswith("error: UnboundVariable ")


def test_eval_with_functor(capsys, tmp_path):
    sentence, = parse(Dictionary.load(data_file("toy.tsv")), "Alice loves Bob")
    functor = tmp_path / "f.json"
    functor.write_text(json.dumps({
        "ob": {"n": 2, "s": 1}, "dtype": "int",
        "ar": {"Alice": [[1, 0]], "Bob": [[0, 1]], "loves": [[0, 1, 1, 0]]}}))
    code, out, _ = run(capsys, "eval", write(tmp_path, sentence), "--functor", str(functor))
    assert code == 0 and json.loads(out)["matrix"] == [[1]]
    functor.write_text(json.dumps({"ob": {"n": 2, "s": 1}, "ar": {}}))
    code, _, err = run(capsys, "eval", write(tmp_path, sentence), "--functor", str(functor))
    assert code == 1 and err.startswith("error: UnknownBox ")
    code, _, err = run(capsys, "eval", write(tmp_path, sentence))
    assert code == 1 and err.startswith("error: UsageError ")


def test_grad_check(capsys, tmp_path):
    circuit = Ket(0) >> Rx(2 * v) >> Measure()
    code, out, _ = run(capsys, "grad", write(tmp_path, circuit), "--var", "v", "--at", "v=0.3",
                       "--check-fd")
    result = json.loads(out)
    assert code == 0 and result["max_deviation"] < 1e-6
    # P(0) = cos^2(2 pi v), so dP(0)/dv = -2 pi sin(4 pi v)
    expected = 2 * np.pi * np.sin(4 * np.pi * .3) * np.array([[-1, 1]])
    assert np.allclose(result["gradient"]["matrix"], expected, atol=1e-9)
    code, _, err = run(capsys, "grad", write(tmp_path, circuit), "--var", "v")
    assert code == 1 and err.startswith("error: UsageError ")


def test_draw(capsys, tmp_path):
    sentence, = parse(Dictionary.load(data_file("toy.tsv")), "Alice loves Bob")
    path = write(tmp_path, sentence)
    code, out, _ = run(capsys, "draw", path)
    assert code == 0 and out.count('class="box"') == 3
    code, out, _ = run(capsys, "draw", path, "--format", "tikz")
    assert code == 0 and out.startswith(r"\begin{tikzpicture}")
    png = tmp_path / "d.png"
    code, _, _ = run(capsys, "draw", path, "--format", "png", "-o", str(png))
    assert code == 0 and png.read_bytes()[:4] == b"\x89PNG"
    code, _, err = run(capsys, "draw", path, "--format", "png")
    assert code == 1 and err.startswith("error: UsageError ")
    code, _, err = run(capsys, "draw", write(tmp_path, random_hypergraph(random.Random(0)), "h.json"))
    assert code == 1


def test_train(capsys, tmp_path):
    args = ["train", "--dict", data_file("toy.tsv"), "--data", data_file("corpus.tsv"),
            "--epochs", "20"]
    code, _, err = run(capsys, *args)
    assert code == 1 and err.startswith("error: UsageError ")
    trace, plot = tmp_path / "trace.csv", tmp_path / "loss.png"
    code, out, _ = run(capsys, *args, "--seed", "0", "--csv", str(trace), "--plot", str(plot))
    lines = out.splitlines()
    assert code == 0 and lines[0] == "iteration,loss" and len(lines) == 23
    assert set(json.loads(lines[-1])["parameters"]) == {"Alice", "Bob", "loves"}
    assert trace.read_text().splitlines()[0] == "iteration,loss"
    assert plot.read_bytes()[:4] == b"\x89PNG"
    again = run(capsys, *args, "--seed", "0")[1]
    assert again == out


def test_console_script_is_installed():
    script = shutil.which("diagrammar")
    if script is None:
        pytest.skip("console script not on PATH")
    done = subprocess.run([script, "parse", "--dict", data_file("toy.tsv"), "--sentence",
                           "loves loves"], capture_output=True, text=True)
    assert done.returncode == 2 and done.stderr.startswith("error: Ungrammatical")
