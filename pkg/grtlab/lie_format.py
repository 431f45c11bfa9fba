"""
Text and JSON formats for `LieSeries`.

Grammar (whitespace insignificant)::

    expr      := sign? term (sign term)*
    term      := rational '*'? atom | atom | rational
    atom      := generator | '[' expr ',' expr ']' | '(' expr ')'
    rational  := integer ('/' positive-integer)?
    generator := letter (letter | digit)*

The unicode minus sign is accepted in place of '-'.  Text is parsed into a
small syntax tree first and evaluated afterwards, so errors that depend on
the alphabet (unknown generators) still carry a source position.
"""
import json
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import pyparsing as pp

from .lie_core import LieSeries, LyndonWord, bracket
from .utils import get_logger

logger = get_logger(__name__)


class LieParseError(ValueError):
    """Syntax error in a Lie expression, with a 0-based position and 1-based column."""

    def __init__(self, message: str, position: int = 0, column: int = 1):
        self.position = position
        self.column = column
        super().__init__(f"{message} (at char {position}, column {column})")


class UnknownGeneratorError(LieParseError):
    pass


class DegreeOverflowError(LieParseError):
    pass


class _Gen:
    __slots__ = ("name", "loc")

    def __init__(self, name: str, loc: int):
        self.name = name
        self.loc = loc


class _Bracket:
    __slots__ = ("left", "right", "loc")

    def __init__(self, left: "_Sum", right: "_Sum", loc: int):
        self.left = left
        self.right = right
        self.loc = loc


class _Term:
    __slots__ = ("coeff", "node", "loc")

    def __init__(self, coeff: Fraction, node: Any, loc: int):
        self.coeff = coeff
        self.node = node
        self.loc = loc


class _Sum:
    __slots__ = ("terms",)

    def __init__(self, terms: List[_Term]):
        self.terms = terms


def _rational_action(s: str, loc: int, toks: pp.ParseResults) -> Fraction:
    num = int(toks[0])
    den = int(toks[1]) if len(toks) > 1 else 1
    if den == 0:
        raise pp.ParseFatalException(s, loc, "zero denominator")
    return Fraction(num, den)


def _sum_action(toks: pp.ParseResults) -> _Sum:
    items = list(toks)
    sign = 1
    terms: List[_Term] = []
    for item in items:
        if isinstance(item, str):
            sign = -1 if item == "-" else 1
            continue
        terms.append(_Term(sign * item.coeff, item.node, item.loc))
        sign = 1
    return _Sum(terms)


def _build_grammar() -> pp.ParserElement:
    lbrack, rbrack, comma, lpar, rpar = map(pp.Suppress, "[],()")
    minus = (pp.Literal("-") | pp.Literal("−")).set_parse_action(lambda: "-")
    sign = pp.Literal("+") | minus
    expr = pp.Forward()

    integer = pp.Word(pp.nums)
    rational = (integer + pp.Optional(pp.Suppress("/") + integer)).set_parse_action(_rational_action)
    generator = pp.Word(pp.alphas, pp.alphanums).set_parse_action(lambda s, loc, t: _Gen(t[0], loc))
    brack = (lbrack + expr + comma + expr + rbrack).set_parse_action(lambda s, loc, t: _Bracket(t[0], t[1], loc))
    paren = lpar + expr + rpar
    atom = generator | brack | paren

    scaled = (rational + pp.Optional(pp.Suppress("*")) + atom).set_parse_action(
        lambda s, loc, t: _Term(t[0], t[1], loc))
    bare_atom = atom.copy().set_parse_action(lambda s, loc, t: _Term(Fraction(1), t[0], loc))
    bare_scalar = rational.copy().add_parse_action(lambda s, loc, t: _Term(t[0], None, loc))
    term = scaled | bare_atom | bare_scalar

    expr <<= (pp.Optional(sign) + term + pp.ZeroOrMore(sign + term)).set_parse_action(_sum_action)
    return expr


_GRAMMAR = _build_grammar()


def _evaluate(node: Any, text: str, alphabet: Sequence[str], top: int, aliases: Mapping[str, str]) -> LieSeries:
    if isinstance(node, _Sum):
        out = LieSeries.zero(alphabet, top)
        for t in node.terms:
            out = out + _evaluate(t, text, alphabet, top, aliases)
        return out
    if isinstance(node, _Term):
        if node.node is None:
            if node.coeff:
                raise LieParseError("non-zero scalar outside a Lie expression", node.loc, pp.col(node.loc, text))
            return LieSeries.zero(alphabet, top)
        return node.coeff * _evaluate(node.node, text, alphabet, top, aliases)
    if isinstance(node, _Bracket):
        return bracket(_evaluate(node.left, text, alphabet, top, aliases),
                       _evaluate(node.right, text, alphabet, top, aliases))
    name = aliases.get(node.name, node.name)
    if name not in alphabet:
        raise UnknownGeneratorError(f"unknown generator {node.name!r}", node.loc, pp.col(node.loc, text))
    return LieSeries.generator(alphabet, top, name)


class _Components:
    """Homogeneous components of a syntax tree, evaluated one degree at a time."""

    def __init__(self, alphabet: Tuple[str, ...], aliases: Mapping[str, str]):
        self.alphabet = alphabet
        self.aliases = aliases
        self._degrees: Dict[int, FrozenSet[int]] = {}
        self._memo: Dict[Tuple[int, int], LieSeries] = {}

    def degrees(self, node: Any) -> FrozenSet[int]:
        """Degrees a node can contribute to; scalars contribute none."""
        key = id(node)
        if key not in self._degrees:
            if isinstance(node, _Sum):
                out = frozenset().union(*(self.degrees(t) for t in node.terms))
            elif isinstance(node, _Term):
                out = self.degrees(node.node) if node.node is not None else frozenset()
            elif isinstance(node, _Bracket):
                right = self.degrees(node.right)
                out = frozenset(a + b for a in self.degrees(node.left) for b in right)
            else:
                out = frozenset({1})
            self._degrees[key] = out
        return self._degrees[key]

    def at(self, node: Any, degree: int) -> LieSeries:
        """The degree-`degree` component of node, as a series truncated at that degree."""
        key = (id(node), degree)
        if key in self._memo:
            return self._memo[key]
        out = LieSeries.zero(self.alphabet, degree)
        if degree not in self.degrees(node):
            return out
        if isinstance(node, _Sum):
            for t in node.terms:
                out = out + self.at(t, degree)
        elif isinstance(node, _Term):
            out = node.coeff * self.at(node.node, degree)
        elif isinstance(node, _Bracket):
            right = self.degrees(node.right)
            for a in sorted(self.degrees(node.left)):
                if degree - a in right:
                    out = out + bracket(self.at(node.left, a).with_max_degree(degree),
                                        self.at(node.right, degree - a).with_max_degree(degree))
        else:
            out = LieSeries.generator(self.alphabet, degree, self.aliases.get(node.name, node.name))
        self._memo[key] = out
        return out


def parse(text: str, alphabet: Sequence[str], max_degree: int,
          aliases: Optional[Mapping[str, str]] = None) -> LieSeries:
    """Parse a Lie expression into its Lyndon normal form.

    Terms up to `max_degree` are evaluated in that truncation. Degrees above
    it are evaluated one at a time from the lowest, and parsing stops at the
    first one that does not cancel.

    Args:
        text: Expression in the grammar of this module.
        alphabet: Generator names.
        max_degree: Truncation of the result.
        aliases: Extra names mapped onto names of `alphabet`.

    Returns:
        The value in the Lyndon basis, truncated at max_degree.

    Raises:
        LieParseError: malformed text.
        UnknownGeneratorError: a name outside `alphabet` (after `aliases`).
        DegreeOverflowError: the value has non-zero terms above `max_degree`.
    """
    try:
        tree = _GRAMMAR.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise LieParseError(exc.msg, exc.loc, exc.col) from None
    alphabet = tuple(alphabet)
    aliases = aliases or {}
    value = _evaluate(tree, text, alphabet, max_degree, aliases)
    parts = _Components(alphabet, aliases)
    for d in sorted(parts.degrees(tree)):
        if d > max_degree and parts.at(tree, d):
            raise DegreeOverflowError(f"expression has non-zero terms of degree {d}, "
                                      f"above max_degree {max_degree}", 0, 1)
    return value


def format_word(word: Sequence[int], alphabet: Sequence[str]) -> str:
    """Fully bracketed form of a Lyndon basis element, following its standard factorization."""
    word = LyndonWord(tuple(word))
    f = word.standard_factorization
    if f is None:
        return alphabet[word[0]]
    return f"[{format_word(f[0], alphabet)},{format_word(f[1], alphabet)}]"


def _format_coeff(c: Fraction) -> str:
    a = abs(c)
    return "" if a == 1 else f"{a} "


def format_series(s: LieSeries) -> str:
    """Normal form: terms sorted by (degree, word), unit coefficients omitted."""
    parts: List[str] = []
    for w, c in s.terms():
        body = _format_coeff(c) + format_word(w, s.alphabet)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts) if parts else "0"


def word_string(word: Sequence[int], alphabet: Sequence[str]) -> str:
    """Spell a word over `alphabet`.

    Letters are concatenated when every name is a single character and joined
    with "." otherwise, so that "t12.t13" stays readable.

    Args:
        word: Letter indices.
        alphabet: Generator names.

    Returns:
        The spelled word, e.g. "xxy" over ("x", "y").
    """
    names = [alphabet[a] for a in word]
    sep = "" if all(len(a) == 1 for a in alphabet) else "."
    return sep.join(names)


def _parse_word(text: str, alphabet: Sequence[str]) -> List[int]:
    names = list(text) if all(len(a) == 1 for a in alphabet) else text.split(".")
    try:
        return [list(alphabet).index(n) for n in names]
    except ValueError:
        raise UnknownGeneratorError(f"word {text!r} uses names outside {list(alphabet)}") from None


def to_dict(s: LieSeries) -> Dict[str, Any]:
    """JSON-ready form of a series.

    Args:
        s: Series to export.

    Returns:
        {"alphabet", "max_degree", "terms"}; terms are sorted by (degree, word)
        and carry the word as a string and the coefficient as an exact "p/q".
    """
    return {
        "alphabet": list(s.alphabet),
        "max_degree": s.max_degree,
        "terms": [{"word": word_string(w, s.alphabet), "coeff": str(c)} for w, c in s.terms()],
    }


def to_json(s: LieSeries) -> str:
    return json.dumps(to_dict(s), sort_keys=True)


def from_json(payload: str) -> LieSeries:
    data = json.loads(payload) if isinstance(payload, str) else payload
    alphabet = tuple(data["alphabet"])
    coeffs = {tuple(_parse_word(t["word"], alphabet)): Fraction(t["coeff"]) for t in data["terms"]}
    return LieSeries(alphabet, int(data["max_degree"]), coeffs)
