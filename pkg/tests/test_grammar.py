from importlib import resources

import pytest
from hypothesis import given, strategies as st

from diagrammar import rigid
from diagrammar.errors import IllFormedTree, UnknownWord
from diagrammar.grammar import (
    ClosedDiagram, ClosedToRigid, ClosedTy, Dictionary, Ev, Word, autonomise, brute_force_matchings,
    fromtree, grammatical, matchings, no_man_is_an_island, parse, parse_type, read_tree,
    type_to_text, who_wiring)
from diagrammar.rigid import Ob, Ty

n, s = Ty("n"), Ty("s")
simple_types = st.builds(lambda name, z: Ob(name, z), st.sampled_from("ns"), st.integers(-1, 1))


def lexicon():
    return Dictionary({"Alice": [n], "Bob": [n], "loves": [n.r @ s @ n.l],
                       "who": [n.r @ n @ s.l @ n]}, s)


@given(st.lists(st.builds(lambda name, z: Ob(name, z), st.sampled_from(["n", "s", "np"]),
                          st.integers(-3, 3)), min_size=1, max_size=5))
def test_type_text_round_trip(obs):
    ty = Ty(*obs)
    assert parse_type(type_to_text(ty)) == ty


@pytest.mark.parametrize("text", ["", "n.x", "n.l.r", "n @@ s"])
def test_bad_types(text):
    with pytest.raises(ValueError):
        parse_type(text)


def test_tsv_round_trip():
    lex = lexicon()
    again = Dictionary.from_tsv(lex.to_tsv())
    assert again.entries == lex.entries and again.sentence == lex.sentence


def test_packaged_lexicon():
    text = resources.files("diagrammar").joinpath("data/toy.tsv").read_text()
    lex = Dictionary.from_tsv(text)
    assert set(lex.entries) == {"Alice", "Bob", "loves", "who"}
    assert lex.sentence == s


def test_unknown_word():
    with pytest.raises(UnknownWord):
        parse(lexicon(), "Alice hates Bob")


def test_simple_sentence():
    sentence, = parse(lexicon(), "Alice loves Bob")
    assert sentence.dom == Ty() and sentence.cod == s
    assert [box.name for box in sentence.boxes[:3]] == ["Alice", "loves", "Bob"]
    assert parse(lexicon(), "loves Alice Bob") == []
    assert grammatical(lexicon(), "Bob loves Alice") and not grammatical(lexicon(), "Bob Alice")


def test_noun_phrase_target():
    phrases = parse(lexicon(), "Alice who loves Bob", target=n)
    assert phrases and all(p.cod == n for p in phrases)


@given(st.lists(simple_types, max_size=8), st.sampled_from([Ty(), s, n]))
def test_chart_parser_agrees_with_exhaustive_search(obs, target):
    words = [Word(f"w{i}", Ty(ob)) for i, ob in enumerate(obs)]
    found = {frozenset(m) for m in matchings(words, target, cap=None)}
    assert found == brute_force_matchings([Ty(ob) for ob in obs], target)


def test_cap_bounds_the_number_of_parses():
    amb = Dictionary({"a": [n, n.l], "b": [n.r, n]}, Ty())
    assert len(parse(amb, "a b a b a b", cap=2)) <= 2


def test_read_tree():
    assert read_tree("(S (NP Alice) (VP loves))") == ["S", ["NP", "Alice"], ["VP", "loves"]]
    for text in ["", "(S", "S)", "(S a) b", ")"]:
        with pytest.raises(IllFormedTree):
            read_tree(text)


def test_fromtree():
    diagram = fromtree("(S (NP Alice) (VP (V loves) (NP Bob)))")
    assert str(diagram.cod) == "S" and len(diagram.dom) == 0
    assert [b.name for b in diagram.boxes if not b.name.startswith("Production")] == ["Alice", "loves", "Bob"]
    with pytest.raises(IllFormedTree):
        fromtree("(S Alice (NP Bob))")
    with pytest.raises(IllFormedTree):
        fromtree("(S (NP Alice))", arities={"S": 2})


def test_closed_types():
    x, y = ClosedTy("x"), ClosedTy("y")
    assert str(x << y) == "(x << y)" and str(y >> x) == "(y >> x)"
    raised = ClosedDiagram.type_raise(x, y)
    assert raised.dom == x and raised.cod == y << (x >> y)
    assert Ev(x << y).dom == (x << y) @ y


def test_closed_sentence_becomes_rigid():
    sentence = no_man_is_an_island()
    assert sentence.cod == ClosedTy("s") and sentence.dom == ClosedTy()
    rigid_sentence = ClosedToRigid()(sentence)
    assert rigid_sentence.cod == s and rigid_sentence.dom == Ty()
    assert rigid_sentence.normal_form().cod == s


def test_autonomise_transitive_verb():
    sentence, = parse(lexicon(), "Alice loves Bob")
    wired = autonomise(sentence)
    assert wired.dom == Ty() and wired.cod == s
    verb, = [b for b in wired.boxes if b.name == "loves"]
    assert verb.dom == n @ n and verb.cod == s
    assert not any(isinstance(b, (rigid.Cup, rigid.Cap)) for b in wired.boxes)


def test_who_wiring_has_word_type():
    assert who_wiring().cod == n.r @ n @ s.l @ n
    phrase = parse(lexicon(), "Alice who loves Bob", target=n)[0]
    wired = autonomise(phrase, {"who": who_wiring()})
    assert wired.cod == n and {"who_1", "who_2"} <= {b.name for b in wired.boxes}
