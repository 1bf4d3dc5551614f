"""
Command line and JSON interchange.

Every diagram file is one JSON object with a ``kind`` among monoidal, rigid,
symmetric, hypergraph and circuit. Layered kinds list their boxes and
offsets, hypergraphs list boxes, wires and spider types, and formal sums
list their terms. Errors go to stderr as ``error: CODE message``.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from diagrammar import core, monoidal, quantum, rigid, symmetric, tensor
from diagrammar.affine import AffineExpr
from diagrammar.errors import DiagramError, TypeMismatch, UnknownBox
from diagrammar.grammar import Word
from diagrammar.hypergraph import Hypergraph

VERSION = 1
DECIMALS = 12

EXIT_OK, EXIT_USAGE, EXIT_UNGRAMMATICAL = 0, 1, 2


class DecodeError(DiagramError, ValueError):
    code = "InvalidJSON"


# objects and types

def encode_ob(ob):
    if isinstance(ob, quantum.Qudit):
        return {"name": ob.name, "dimension": ob.n, "system": "quantum"}
    if isinstance(ob, quantum.Digit):
        return {"name": ob.name, "dimension": ob.n, "system": "classical"}
    result = {"name": ob.name}
    if getattr(ob, "z", 0):
        result["z"] = ob.z
    if isinstance(ob, rigid.PivotalOb):
        result["pivotal"] = True
    return result


def decode_ob(data, kind):
    if not isinstance(data, dict) or "name" not in data:
        raise DecodeError(f"expected an object with a name, got {data!r}")
    if data.get("system") == "quantum":
        return quantum.Qudit(int(data["dimension"]))
    if data.get("system") == "classical":
        return quantum.Digit(int(data["dimension"]))
    if kind == "monoidal":
        return core.Ob(data["name"])
    if data.get("pivotal"):
        return rigid.PivotalOb(data["name"], int(data.get("z", 0)))
    return rigid.Ob(data["name"], int(data.get("z", 0)))


def ty_class(kind):
    return monoidal.Ty if kind == "monoidal" else rigid.Ty


def encode_ty(ty):
    return [encode_ob(ob) for ob in ty.inside]


def decode_ty(data, kind):
    if not isinstance(data, list):
        raise DecodeError(f"expected a list of objects, got {data!r}")
    return ty_class(kind)(*[decode_ob(ob, kind) for ob in data])


# values

def encode_value(value):
    if isinstance(value, AffineExpr):
        return {"affine": value.to_json()}
    if isinstance(value, complex):
        return {"complex": [value.real, value.imag]}
    if isinstance(value, tuple):
        return {"tuple": [encode_value(v) for v in value]}
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    raise DecodeError(f"cannot serialize {value!r}")


def decode_value(data):
    if isinstance(data, dict):
        if "affine" in data:
            return AffineExpr.from_json(data["affine"])
        if "complex" in data:
            return complex(*data["complex"])
        if "tuple" in data:
            return tuple(decode_value(v) for v in data["tuple"])
        raise DecodeError(f"unknown value {data!r}")
    return data


def encode_matrix(array, decimals=None):
    array = np.asarray(array, dtype=complex)
    if decimals is not None:
        array = np.round(array, decimals) + 0.0
    if np.all(array.imag == 0):
        return array.real.tolist()
    return [[[z.real, z.imag] for z in row] for row in array]


def decode_matrix(data):
    array = np.asarray(data, dtype=float)
    if array.ndim == 3:
        return array[..., 0] + 1j * array[..., 1]
    return array


# boxes

def diagram_kind(diagram):
    if isinstance(diagram, core.Sum):
        return diagram_kind(diagram.terms[0]) if diagram.terms else "monoidal"
    if isinstance(diagram, Hypergraph):
        return "hypergraph"
    if isinstance(diagram, quantum.Circuit):
        return "circuit"
    if isinstance(diagram, symmetric.Diagram):
        return "symmetric"
    if isinstance(diagram, rigid.Diagram):
        return "rigid"
    if isinstance(diagram, monoidal.Diagram):
        return "monoidal"
    raise DecodeError(f"no JSON kind for {type(diagram).__name__}")


BOX_CLASSES = {"monoidal": monoidal.Box, "rigid": rigid.Box, "symmetric": symmetric.Box,
               "hypergraph": symmetric.Box, "circuit": quantum.Box}
FACTORIES = {"monoidal": monoidal.Diagram, "rigid": rigid.Diagram,
             "symmetric": symmetric.Diagram, "circuit": quantum.Circuit}


def encode_box(box):
    base = {"name": getattr(box, "name", str(box)), "dom": encode_ty(box.dom), "cod": encode_ty(box.cod)}
    if isinstance(box, core.Bubble):
        return dict(base, kind="bubble", method=box.method, inner=encode(box.inner),
                    is_dagger=box.is_dagger)
    if isinstance(box, (rigid.Cup, rigid.Cap)):
        kind = "cup" if isinstance(box, rigid.Cup) else "cap"
        return {"kind": kind, "left": encode_ty(box.left), "right": encode_ty(box.right),
                "is_dagger": box.is_dagger}
    if isinstance(box, symmetric.Braid):
        kind = "swap" if isinstance(box, symmetric.Swap) else "braid"
        return {"kind": kind, "left": encode_ty(box.left), "right": encode_ty(box.right),
                "is_dagger": box.is_dagger}
    if isinstance(box, symmetric.Spider):
        return {"kind": "spider", "legs": [box.a, box.b], "object": encode_ty(box.object),
                "phase": encode_value(box.phase)}
    if isinstance(box, (symmetric.Copy, symmetric.Merge)):
        kind = "copy" if isinstance(box, symmetric.Copy) else "merge"
        return {"kind": kind, "object": encode_ty(box.object), "n": box.n}
    if isinstance(box, quantum.Rotation):
        return {"kind": type(box).__name__.lower(), "phase": box.phase.to_json()}
    if isinstance(box, quantum.Sqrt):
        return {"kind": "sqrt", "x": box.x}
    if isinstance(box, quantum.Gate):
        return dict(base, kind="gate", array=encode_matrix(box._array), is_dagger=box.is_dagger,
                    data=encode_value(box.data))
    if isinstance(box, (quantum.Ket, quantum.Bra)):
        return {"kind": type(box).__name__.lower(), "digits": list(box.digits), "base": box.base}
    if isinstance(box, quantum.Scalar):
        return {"kind": "scalar", "scalar": encode_value(box.z), "is_pure": box.is_pure}
    for cls, kind in ((quantum.Measure, "measure"), (quantum.Encode, "encode")):
        if isinstance(box, cls):
            return {"kind": kind, "dom": encode_ty(box.dom)}
    for cls, kind in ((quantum.Discard, "discard"), (quantum.MixedState, "mixed_state")):
        if isinstance(box, cls):
            return {"kind": kind, "object": encode_ty(box.dom if kind == "discard" else box.cod)}
    if isinstance(box, Word):
        return dict(base, kind="word")
    return dict(base, kind="box", is_dagger=box.is_dagger, data=encode_value(box.data))


def decode_box(data, kind):
    try:
        tag = data["kind"]
        ty = lambda key: decode_ty(data[key], kind)
        if tag == "box":
            return BOX_CLASSES[kind](data["name"], ty("dom"), ty("cod"),
                                     data.get("is_dagger", False), decode_value(data.get("data")))
        if tag == "word":
            return Word(data["name"], ty("cod"), ty("dom"))
        if tag == "bubble":
            result = monoidal.Bubble(decode(data["inner"]), ty("dom"), ty("cod"), data["method"])
            if data.get("is_dagger"):
                result.is_dagger = True
            return result
        if tag in ("cup", "cap"):
            cls = rigid.Cup if tag == "cup" else rigid.Cap
            return cls(ty("left"), ty("right"), data.get("is_dagger", False))
        if tag == "swap":
            return symmetric.Swap(ty("left"), ty("right"))
        if tag == "braid":
            return symmetric.Braid(ty("left"), ty("right"), data.get("is_dagger", False))
        if tag == "spider":
            a, b = data["legs"]
            return symmetric.Spider(a, b, ty("object"), decode_value(data.get("phase")))
        if tag in ("copy", "merge"):
            cls = symmetric.Copy if tag == "copy" else symmetric.Merge
            return cls(ty("object"), data.get("n", 2))
        if tag in ("rz", "rx"):
            cls = quantum.Rz if tag == "rz" else quantum.Rx
            return cls(AffineExpr.from_json(data["phase"]))
        if tag == "sqrt":
            return quantum.Sqrt(data["x"])
        if tag == "gate":
            return quantum.Gate(data["name"], ty("dom"), ty("cod"), decode_matrix(data["array"]),
                                data.get("is_dagger", False), decode_value(data.get("data")))
        if tag in ("ket", "bra"):
            cls = quantum.Ket if tag == "ket" else quantum.Bra
            return cls(*data["digits"], base=data.get("base", 2))
        if tag == "scalar":
            return quantum.Scalar(decode_value(data["scalar"]), data.get("is_pure", False))
        if tag == "measure":
            return quantum.Measure(ty("dom") if "dom" in data else None)
        if tag == "encode":
            return quantum.Encode(ty("dom") if "dom" in data else None)
        if tag == "discard":
            return quantum.Discard(ty("object") if "object" in data else None)
        if tag == "mixed_state":
            return quantum.MixedState(ty("object") if "object" in data else None)
    except (KeyError, TypeError, ValueError) as error:
        if isinstance(error, DiagramError):
            raise
        raise DecodeError(f"malformed box {data!r}: {error}") from None
    raise DecodeError(f"unknown box kind {data.get('kind')!r}")


# diagrams

def encode(diagram):
    kind = diagram_kind(diagram)
    result = {"version": VERSION, "kind": kind,
              "dom": encode_ty(diagram.dom), "cod": encode_ty(diagram.cod)}
    if isinstance(diagram, core.Sum):
        result["terms"] = [encode(term) for term in diagram.terms]
    elif isinstance(diagram, Hypergraph):
        result["boxes"] = [encode_box(box) for box in diagram.boxes]
        result["wires"] = list(diagram.wires)
        result["spider_types"] = [encode_ty(t) for t in diagram.spider_types]
    else:
        result["boxes"] = [encode_box(box) for box in diagram.boxes]
        result["offsets"] = list(diagram.offsets)
    return result


def decode(data):
    """Validate and build a diagram from its JSON object."""
    if not isinstance(data, dict):
        raise DecodeError("a diagram is a JSON object")
    kind = data.get("kind")
    if kind not in ("monoidal", "rigid", "symmetric", "hypergraph", "circuit"):
        raise DecodeError(f"unknown diagram kind {kind!r}")
    if data.get("version", VERSION) != VERSION:
        raise DecodeError(f"unsupported version {data['version']!r}")
    dom, cod = decode_ty(data.get("dom", []), kind), decode_ty(data.get("cod", []), kind)
    if "terms" in data:
        return core.Sum([decode(term) for term in data["terms"]], dom, cod)
    boxes = [decode_box(box, kind) for box in data.get("boxes", [])]
    if kind == "hypergraph":
        types = [decode_ty(t, kind) for t in data.get("spider_types", [])]
        return Hypergraph(dom, cod, boxes, data.get("wires", []), types)
    offsets = data.get("offsets", [])
    if len(offsets) != len(boxes):
        raise DecodeError(f"{len(boxes)} boxes but {len(offsets)} offsets")
    diagram = FACTORIES[kind].decode(dom, list(zip(boxes, offsets)))
    if diagram.cod != cod:
        raise TypeMismatch(f"the boxes end in {diagram.cod}, the file says {cod}")
    return diagram


def dumps(diagram):
    return json.dumps(encode(diagram), indent=1, sort_keys=True)


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise DecodeError(str(error)) from None
    return decode(data)


# functors

def load_functor(data):
    """
    A functor file maps object names to dimensions and box names to matrices.
    When any box goes to a circuit, objects count qubits and the result is a
    functor into circuits.
    """
    ob, ar = data.get("ob", {}), data.get("ar", {})
    circuits = any(isinstance(v, dict) for v in ar.values())

    def map_ob(obj):
        if isinstance(obj, monoidal.Ty):
            obj, = obj.inside
        if obj.name not in ob:
            raise UnknownBox(f"no image for the object {obj.name}")
        value = ob[obj.name]
        if circuits:
            return quantum.qubit ** int(value)
        return [int(d) for d in value] if isinstance(value, list) else [int(value)]

    def map_box(box):
        if box.name not in ar:
            raise UnknownBox(f"no image for the box {box.name}")
        value = ar[box.name]
        return decode(value) if isinstance(value, dict) else decode_matrix(value)

    if circuits:
        return symmetric.Functor(ob=map_ob, ar=map_box, cod=core.Category(rigid.Ty, quantum.Circuit))
    dtype = {"complex": complex, "float": float, "int": int}[data.get("dtype", "complex")]
    return tensor.Functor(ob=map_ob, ar=map_box, dtype=dtype)


def matrix_json(value):
    dom = getattr(value, "dom", None)
    cod = getattr(value, "cod", None)
    shape = list(np.asarray(value.array).shape)
    return {"dom": _dims(dom), "cod": _dims(cod), "shape": shape,
            "matrix": encode_matrix(value.array, DECIMALS)}


def _dims(x):
    if isinstance(x, quantum.CQ):
        return {"classical": list(x.classical), "quantum": list(x.quantum)}
    return list(x) if x is not None else None


def parse_params(pairs):
    params = {}
    for pair in pairs or []:
        name, sep, value = pair.partition("=")
        if not sep:
            raise UsageError(f"expected name=value, got {pair!r}")
        try:
            params[name] = float(value)
        except ValueError:
            raise UsageError(f"{value!r} is not a number") from None
    return params


# commands

class UsageError(Exception):
    code = "UsageError"


class Ungrammatical(Exception):
    code = "Ungrammatical"


def read_diagram(path):
    try:
        text = Path(path).read_text()
    except OSError as error:
        raise UsageError(f"cannot read {path}: {error.strerror}") from None
    return loads(text)


def write_output(text, path):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_parse(args):
    from diagrammar.grammar import Dictionary, parse, parse_type
    try:
        dictionary = Dictionary.load(args.dict)
    except OSError as error:
        raise UsageError(f"cannot read {args.dict}: {error.strerror}") from None
    target = parse_type(args.target) if args.target else None
    parses = parse(dictionary, args.sentence, target=target)
    if not parses:
        raise Ungrammatical(f"{args.sentence!r} has no parse")
    if args.all:
        text = json.dumps([encode(d) for d in parses], indent=1, sort_keys=True)
    else:
        text = dumps(parses[0])
    write_output(text + "\n", args.output)


def cmd_normalize(args):
    diagram = read_diagram(args.file)
    if args.snakes:
        if not isinstance(diagram, rigid.Diagram):
            raise UsageError("snake removal needs a rigid diagram")
        result = diagram.normal_form(left=args.left, snakes=True)
    else:
        result = monoidal.Diagram.normal_form(diagram, left=args.left)
    sys.stdout.write(dumps(result) + "\n")


def cmd_eval(args):
    diagram = read_diagram(args.file)
    params = parse_params(args.params)
    if args.functor:
        try:
            functor = load_functor(json.loads(Path(args.functor).read_text()))
        except OSError as error:
            raise UsageError(f"cannot read {args.functor}: {error.strerror}") from None
        value = functor(diagram)
        if isinstance(value, (quantum.Circuit, core.Sum)):
            diagram, value = value, None
    elif isinstance(diagram, (quantum.Circuit, core.Sum)) and diagram_kind(diagram) == "circuit":
        value = None
    else:
        raise UsageError("only circuits evaluate without --functor")
    if value is None:
        if args.mixed or not quantum.is_pure(diagram):
            value = quantum.mixed_eval(diagram, params)
        else:
            value = quantum.pure_eval(diagram, params)
    sys.stdout.write(json.dumps(matrix_json(value), sort_keys=True) + "\n")


def cmd_draw(args):
    from diagrammar import layout
    diagram = read_diagram(args.file)
    if isinstance(diagram, core.Sum) or isinstance(diagram, Hypergraph):
        raise UsageError("only layered diagrams can be drawn")
    graph = layout.draw(diagram)
    if args.format == "png":
        from diagrammar.report import plot_graph
        plot_graph(graph, args.output)
        return
    text = layout.emit_svg(graph, args.labels) if args.format == "svg" \
        else layout.emit_tikz(graph, args.labels)
    write_output(text, args.output)


def cmd_grad(args):
    from diagrammar.autodiff import finite_difference, grad_mixed_eval
    circuit = read_diagram(args.file)
    params = parse_params(args.at)
    if args.var not in params:
        raise UsageError(f"--at needs a value for {args.var}")
    value = grad_mixed_eval(circuit, args.var, params)
    result = {"var": args.var, "gradient": matrix_json(value)}
    if args.check_fd:
        approx = finite_difference(lambda a: quantum.mixed_eval(circuit, a).array, args.var, params)
        result["max_deviation"] = float(np.abs(value.array - approx).max(initial=0))
    sys.stdout.write(json.dumps(result, sort_keys=True) + "\n")


def cmd_train(args):
    from diagrammar.autodiff import Model, read_corpus, train, write_trace
    from diagrammar.grammar import Dictionary
    try:
        dictionary = Dictionary.load(args.dict)
        data = read_corpus(Path(args.data).read_text())
    except OSError as error:
        raise UsageError(f"cannot read {error.filename}: {error.strerror}") from None
    params, trace = train(Model(dictionary), data, args.epochs, args.seed,
                          optimizer=args.optimizer, learning_rate=args.learning_rate)
    if args.csv:
        write_trace(args.csv, trace)
    if args.plot:
        from diagrammar.report import plot_loss
        plot_loss(trace, args.plot)
    sys.stdout.write("iteration,loss\n")
    for i, value in enumerate(trace):
        sys.stdout.write(f"{i},{value:.12g}\n")
    sys.stdout.write(json.dumps({"parameters": params}, sort_keys=True) + "\n")


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = ArgumentParser(prog="diagrammar", description="String diagrams from the command line.")
    commands = parser.add_subparsers(dest="command", parser_class=ArgumentParser)
    commands.required = True

    p = commands.add_parser("parse", help="parse a sentence with a pregroup dictionary")
    p.add_argument("--dict", required=True)
    p.add_argument("--sentence", required=True)
    p.add_argument("--target", help="target type, the sentence type by default")
    p.add_argument("--all", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_parse)

    p = commands.add_parser("normalize", help="interchanger or snake-removal normal form")
    p.add_argument("file")
    p.add_argument("--snakes", action="store_true")
    p.add_argument("--left", action="store_true")
    p.set_defaults(run=cmd_normalize)

    p = commands.add_parser("eval", help="evaluate a diagram as a tensor or a channel")
    p.add_argument("file")
    p.add_argument("--functor")
    p.add_argument("--params", nargs="*", default=[])
    p.add_argument("--mixed", action="store_true")
    p.set_defaults(run=cmd_eval)

    p = commands.add_parser("draw", help="draw a diagram as SVG, TikZ or PNG")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=["svg", "tikz", "png"], default="svg")
    p.add_argument("--labels", action="store_true", help="label the wires")
    p.set_defaults(run=cmd_draw)

    p = commands.add_parser("grad", help="gradient of a circuit's channel")
    p.add_argument("file")
    p.add_argument("--var", required=True)
    p.add_argument("--at", nargs="*", default=[])
    p.add_argument("--check-fd", action="store_true")
    p.set_defaults(run=cmd_grad)

    p = commands.add_parser("train", help="fit a sentence model on a labeled corpus")
    p.add_argument("--dict", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--optimizer", choices=["gradient-descent", "spsa"], default="gradient-descent")
    p.add_argument("--learning-rate", type=float, default=0.05)
    p.add_argument("--csv")
    p.add_argument("--plot")
    p.set_defaults(run=cmd_train)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.command == "draw" and args.format == "png" and not args.output:
            raise UsageError("png output needs -o")
        args.run(args)
    except Ungrammatical as error:
        print(f"error: {error.code} {error}", file=sys.stderr)
        return EXIT_UNGRAMMATICAL
    except (UsageError, DiagramError) as error:
        print(f"error: {error.code} {error}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as error:
        print(f"error: InvalidInput {error}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
