"""Lexicon of typed lambda terms and bottom-up semantic construction."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import fol, hol
from .errors import ConstructionError, HolTypeError, SyntaxParseError
from .grammar import Leaf, ParseTree, Unary, leaves

VERB_CLASSES = ("process", "state", "culmination")
ANY_CLASS = "*"

VERB_TYPE = hol.fun(hol.ENTITY, hol.EVENT, hol.BOOL)
CATEGORY_TYPES = {
    "pn": hol.ENTITY,
    "iv": VERB_TYPE,
    "tv": hol.fun(hol.ENTITY, hol.ENTITY, hol.EVENT, hol.BOOL),
    "op": hol.fun(VERB_TYPE, hol.ENTITY, hol.BOOL),
}


@dataclass(frozen=True)
class LexEntry:
    word: str
    category: str
    verb_class: str | None
    term: hol.Term


@dataclass(frozen=True)
class SurfaceForm:
    form: str
    lemma: str
    category: str  # pn | iv | tv
    operator: str | None


class Lexicon:
    """Immutable after construction.

    ``entries`` is keyed by ``(word, category, class)`` where class is the
    verb class for verbs and class-specific operators, ``*`` for operators
    that apply to every class, and None for nouns.
    """

    def __init__(self, entries: list[LexEntry], forms: list[SurfaceForm], signature: hol.Signature):
        self.entries = {(e.word, e.category, e.verb_class): e for e in entries}
        self.forms = {f.form: f for f in forms}
        self.signature = signature
        self.verb_classes = {e.word: e.verb_class for e in entries if e.category in ("iv", "tv")}

    def lookup(self, word: str, category: str, verb_class: str | None = None) -> LexEntry:
        if category == "op":
            for key in ((word, "op", verb_class), (word, "op", ANY_CLASS)):
                if key in self.entries:
                    return self.entries[key]
            raise ConstructionError(f"missing lexicon entry for operator {word!r} with verb class {verb_class}")
        key = (word, category, self.verb_classes.get(word) if category in ("iv", "tv") else None)
        if key not in self.entries:
            raise ConstructionError(f"missing lexicon entry for {word!r} ({category})")
        return self.entries[key]

    def __iter__(self):
        return iter(self.entries.values())


def parse_lexicon(text: str, base: hol.Signature | None = None) -> Lexicon:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        cols = [c.strip() for c in line.split("|", 3)]
        if len(cols) != 4:
            raise SyntaxParseError(f"lexicon line {lineno}: expected 4 '|'-separated columns")
        rows.append((lineno, *cols))

    # constants first, so every term can be parsed against the full signature
    decls = {}
    for lineno, word, cat, cls, _ in rows:
        if cat == "pn":
            decls[word] = hol.ENTITY
        elif cat in ("iv", "tv"):
            if cls not in VERB_CLASSES:
                raise SyntaxParseError(f"lexicon line {lineno}: unknown verb class {cls!r}")
            decls[word] = hol.KIND
    decls.update({cls: hol.fun(hol.KIND, hol.BOOL) for cls in VERB_CLASSES})
    sig = (base or hol.base_signature()).extend(decls)

    entries, raw_forms = [], []
    for lineno, word, cat, cls, body in rows:
        if cat == "form":
            raw_forms.append((lineno, word, cls, None if body == "-" else body))
            continue
        if cat not in CATEGORY_TYPES:
            raise SyntaxParseError(f"lexicon line {lineno}: unknown category {cat!r}")
        try:
            term = hol.parse_term(body, sig)
            ty = hol.typecheck(term, sig)
        except (SyntaxParseError, HolTypeError) as exc:
            raise type(exc)(f"lexicon line {lineno}: {exc}") from None
        if ty != CATEGORY_TYPES[cat]:
            raise HolTypeError(f"lexicon line {lineno}: {word} ({cat}) has type {ty}, expected {CATEGORY_TYPES[cat]}")
        verb_class = cls if cat in ("iv", "tv", "op") else None
        if cat == "op" and cls != ANY_CLASS and cls not in VERB_CLASSES:
            raise SyntaxParseError(f"lexicon line {lineno}: unknown verb class {cls!r}")
        entries.append(LexEntry(word, cat, verb_class, term))

    categories = {e.word: e.category for e in entries if e.category != "op"}
    operators = {e.word for e in entries if e.category == "op"}
    forms = []
    for lineno, form, lemma, op in raw_forms:
        if lemma not in categories:
            raise SyntaxParseError(f"lexicon line {lineno}: form {form!r} names unknown lemma {lemma!r}")
        cat = categories[lemma]
        if (cat == "pn") != (op is None):
            raise SyntaxParseError(f"lexicon line {lineno}: verb forms need an operator, noun forms must not have one")
        if op is not None and op not in operators:
            raise SyntaxParseError(f"lexicon line {lineno}: unknown operator {op!r}")
        forms.append(SurfaceForm(form, lemma, cat, op))
    return Lexicon(entries, forms, sig)


def load_lexicon(path: str | Path | None = None) -> Lexicon:
    if path is None:
        text = resources.files("tempmodels").joinpath("data/default.lex").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_lexicon(text)


def _verb_leaf(tree: ParseTree) -> Leaf | None:
    for leaf in leaves(tree):
        if leaf.category in ("iv", "tv"):
            return leaf
    return None


def _combine(a: hol.Term, b: hol.Term, sig, node) -> hol.Term:
    ta, tb = hol.typecheck(a, sig), hol.typecheck(b, sig)
    if isinstance(ta, hol.FunType) and ta.dom == tb:
        return hol.App(a, b)
    if isinstance(tb, hol.FunType) and tb.dom == ta:
        return hol.App(b, a)
    raise ConstructionError(f"no type-compatible application order at {node.category}: {ta} and {tb}")


def _meaning(node: ParseTree, lex: Lexicon, sig, verb_class) -> hol.Term:
    if isinstance(node, Leaf):
        return lex.lookup(node.word, node.category, verb_class).term
    if isinstance(node, Unary):
        return _meaning(node.child, lex, sig, verb_class)
    if node.category == "vp":
        verb = _verb_leaf(node.right)
        if verb is not None:
            verb_class = lex.verb_classes.get(verb.word)
    left = _meaning(node.left, lex, sig, verb_class)
    right = _meaning(node.right, lex, sig, verb_class)
    return _combine(left, right, sig, node)


def construct(tree: ParseTree, lex: Lexicon, sig: hol.Signature | None = None) -> hol.Term:
    """Compose the lexical terms of ``tree`` by typed application and reduce."""
    sig = sig or lex.signature
    term = hol.beta_reduce(_meaning(tree, lex, sig, None))
    ty = hol.typecheck(term, sig)
    if ty != hol.BOOL:
        raise ConstructionError(f"sentence meaning has type {ty}, expected bool")
    return term


def class_facts(tree: ParseTree, lex: Lexicon) -> list[fol.Formula]:
    """Verb-class facts for the lemmas in ``tree``, e.g. ``process(spacerowac)``."""
    facts = []
    for leaf in leaves(tree):
        if leaf.category in ("iv", "tv"):
            fact = fol.Atom(lex.verb_classes[leaf.word], (fol.Const(leaf.word),))
            if fact not in facts:
                facts.append(fact)
    return facts
