import pytest

from tempmodels import builder, fol, hol, theory
from tempmodels.errors import ConstructionError, HolTypeError, SyntaxParseError
from tempmodels.grammar import Binary, Leaf, Unary, parse, tokenize
from tempmodels.semantics import class_facts, construct, load_lexicon, parse_lexicon

LEX = load_lexicon()


def meaning(sentence):
    return construct(parse(tokenize(sentence), LEX), LEX)


def test_sentence_one_representation():
    expected = hol.parse_term(
        "exists t:time. exists e:event. lt(now, t) & ek(e, spacerowac) & agent(e, piotr) & conc(e, t)",
        LEX.signature)
    assert hol.alpha_equal(meaning("Piotr pospaceruje"), expected)


def test_state_perfective_marks_inception():
    assert str(meaning("Piotr pokochal Aline")) == (
        "exists t:time. exists e:event. lt(t, now) & ek(e, kochac) & agent(e, piotr) "
        "& patient(e, alina) & inception(e, t)")


def test_culmination_operators():
    assert str(meaning("Piotr napisal list")).endswith("conc(e, t) & culminated(e)")
    assert str(meaning("Piotr popisal list")).endswith("conc(e, t) & ~culminated(e)")


def test_imperfective_present():
    assert str(meaning("Piotr kocha Aline")) == (
        "exists e:event. ek(e, kochac) & agent(e, piotr) & patient(e, alina) & induration(e, now)")


def test_class_facts():
    tree = parse(tokenize("Piotr pokochal Aline"), LEX)
    assert class_facts(tree, LEX) == [fol.Atom("state", (fol.Const("kochac"),))]


def _grid():
    """One sentence per (verb lemma, operator) pair in the lexicon."""
    seen = set()
    for form in LEX.forms.values():
        if form.category in ("iv", "tv") and (form.lemma, form.operator) not in seen:
            seen.add((form.lemma, form.operator))
            yield f"Piotr {form.form}" + (" list" if form.category == "tv" else "")


def test_construct_output_is_closed_normal_bool():
    for sentence in _grid():
        t = meaning(sentence)
        assert hol.free_vars(t) == set()
        assert hol.is_normal(t)
        assert hol.typecheck(t, LEX.signature) == hol.BOOL


def test_every_operator_is_consistent_with_the_theory():
    axioms = theory.formulas()
    sentences = list(_grid())
    assert len(sentences) >= 12
    for sentence in sentences:
        tree = parse(tokenize(sentence), LEX)
        goal = fol.translate(construct(tree, LEX), LEX.signature)
        m = builder.build_minimal(axioms + class_facts(tree, LEX), goal, max_size=8)
        assert m is not None, sentence


def test_missing_operator_for_class():
    tree = Binary("s", Unary("np", Leaf("piotr", "pn")),
                  Binary("vp", Leaf("culm_perf_past", "op"), Leaf("spacerowac", "iv")))
    with pytest.raises(ConstructionError):
        construct(tree, LEX)


def test_lexicon_entries_are_typechecked():
    bad = "piotr | pn | - | piotr\nwalk | iv | process | lam x:entity. ek(x, walk)\n"
    with pytest.raises(HolTypeError, match="line 2"):
        parse_lexicon(bad)
    wrong_category_type = "piotr | pn | - | piotr\nwalk | iv | process | lam x:entity. x = piotr\n"
    with pytest.raises(HolTypeError, match="expected entity -> event -> bool"):
        parse_lexicon(wrong_category_type)


def test_lexicon_format_errors():
    with pytest.raises(SyntaxParseError):
        parse_lexicon("piotr | pn | piotr\n")
    with pytest.raises(SyntaxParseError, match="unknown verb class"):
        parse_lexicon("walk | iv | activity | lam x:entity. lam e:event. ek(e, walk)\n")
    with pytest.raises(SyntaxParseError, match="unknown lemma"):
        parse_lexicon("walks | form | walk | -\n")


def test_lexicon_from_file(tmp_path):
    path = tmp_path / "mini.lex"
    path.write_text("ala | pn | - | ala\nala | form | ala | -\n"
                    "biec | iv | process | lam x:entity. lam e:event. ek(e, biec) & agent(e, x)\n"
                    "p | op | * | lam v:entity -> event -> bool. lam x:entity. exists e:event. v(x, e) & induration(e, now)\n"
                    "biegnie | form | biec | p\n")
    lex = load_lexicon(path)
    t = construct(parse(["ala", "biegnie"], lex), lex)
    assert str(t) == "exists e:event. ek(e, biec) & agent(e, ala) & induration(e, now)"
