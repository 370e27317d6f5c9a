"""Tokenizer and parser for the Polish fragment.

The grammar is fixed::

    s  -> np vp
    np -> pn
    vp -> OP iv
    vp -> OP tv'          tv' -> tv np

An inflected verb token becomes two leaves: the tense/aspect operator and
the verb lemma.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .errors import NoParseError, UnknownWordError

if TYPE_CHECKING:
    from .semantics import Lexicon


@dataclass(frozen=True)
class Leaf:
    word: str
    category: str  # pn | iv | tv | op
    # the token this leaf was read from; the lemma leaf of a verb carries None
    surface: str | None = field(default=None, compare=False)

    def __str__(self):
        return f"leaf({self.word}, {self.category})"


@dataclass(frozen=True)
class Unary:
    category: str
    child: "ParseTree"

    def __str__(self):
        return f"unary({self.category}, {self.child})"


@dataclass(frozen=True)
class Binary:
    category: str
    left: "ParseTree"
    right: "ParseTree"

    def __str__(self):
        return f"binary({self.category}, {self.left}, {self.right})"


ParseTree = Leaf | Unary | Binary


def tokenize(text: str) -> list[str]:
    words = []
    for raw in text.split():
        word = re.sub(r"[^\w]", "", raw.lower())
        if word:
            words.append(word)
    return words


def leaves(tree: ParseTree) -> list[Leaf]:
    if isinstance(tree, Leaf):
        return [tree]
    if isinstance(tree, Unary):
        return leaves(tree.child)
    return leaves(tree.left) + leaves(tree.right)


def surface_yield(tree: ParseTree) -> list[str]:
    """The token list the tree was parsed from."""
    return [leaf.surface for leaf in leaves(tree) if leaf.surface is not None]


def parse(tokens: list[str], lexicon: "Lexicon") -> ParseTree:
    for tok in tokens:
        if tok not in lexicon.forms:
            raise UnknownWordError(tok)
    if not tokens:
        raise NoParseError(0, "empty sentence")

    subject = _np(tokens, 0, lexicon)
    vp = _vp(tokens, 1, lexicon)
    return Binary("s", subject, vp)


def _np(tokens, pos, lexicon) -> Unary:
    if pos >= len(tokens):
        raise NoParseError(pos, "expected a noun phrase, found end of sentence")
    form = lexicon.forms[tokens[pos]]
    if form.category != "pn":
        raise NoParseError(pos, f"expected a noun phrase, found {tokens[pos]!r}")
    return Unary("np", Leaf(form.lemma, "pn", tokens[pos]))


def _vp(tokens, pos, lexicon) -> Binary:
    if pos >= len(tokens):
        raise NoParseError(pos, "expected a verb, found end of sentence")
    form = lexicon.forms[tokens[pos]]
    if form.category not in ("iv", "tv"):
        raise NoParseError(pos, f"expected a verb, found {tokens[pos]!r}")
    op = Leaf(form.operator, "op", tokens[pos])
    verb = Leaf(form.lemma, form.category)
    if form.category == "iv":
        if pos + 1 < len(tokens):
            raise NoParseError(pos + 1, f"unexpected {tokens[pos + 1]!r} after intransitive verb")
        return Binary("vp", op, verb)
    obj = _np(tokens, pos + 1, lexicon)
    if pos + 2 < len(tokens):
        raise NoParseError(pos + 2, f"unexpected {tokens[pos + 2]!r} after object")
    return Binary("vp", op, Binary("tv'", verb, obj))
