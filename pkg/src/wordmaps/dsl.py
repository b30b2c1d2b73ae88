"""Text syntax for words with constants.

Grammar (whitespace separates factors)::

    word   := factor+
    factor := atom ('^' (signed-int | atom))*
    atom   := var | const | group | comm
    var    := 'x' int
    const  := 'e' | cycle+            (cycles written back to back)
    cycle  := '(' int ((' ' | ',') int)+ ')'
    group  := '(' word ')'
    comm   := '[' word ',' word ']'

After ``(`` an integer means a cycle, anything else a grouped sub-word.
``u^k`` is a power, ``u^v`` the conjugate ``v^-1 u v`` and ``[u, v]`` the
commutator ``u^-1 v^-1 u v``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .exceptions import BudgetExceeded, InvalidInput
from .perm import Permutation, format_cycle_notation
from .words import Letter, WordWithConstants, reduce

DEFAULT_LETTER_CAP = 10**6


class ParseError(InvalidInput):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text[:pos]}<!>{text[pos:]}")
        self.pos = pos


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Const:
    perm: Permutation


@dataclass(frozen=True)
class Group:
    word: "WordExpression"


@dataclass(frozen=True)
class Comm:
    left: "WordExpression"
    right: "WordExpression"


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Conj:
    base: "Node"
    by: "Node"


@dataclass(frozen=True)
class WordExpression:
    factors: tuple
    rank: int = 1
    degree: int = 1

    def expand(self, letter_cap: int = DEFAULT_LETTER_CAP) -> list:
        count = letter_count(self)
        if count > letter_cap:
            raise BudgetExceeded(f"expansion has {count} letters, cap is {letter_cap}")
        return _expand(self)

    def to_word(self, letter_cap: int = DEFAULT_LETTER_CAP) -> WordWithConstants:
        return reduce(self.rank, self.degree, self.expand(letter_cap))

    def __str__(self):
        return format_expression(self)


Node = Union[Var, Const, Group, Comm, Power, Conj, WordExpression]


class _Parser:
    def __init__(self, text: str, rank: int, degree: int):
        self.text = text
        self.pos = 0
        self.rank = rank
        self.degree = degree

    def error(self, msg, pos=None):
        return ParseError(msg, self.text, self.pos if pos is None else pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        self.skip_ws()
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self, signed=False) -> int:
        self.skip_ws()
        start = self.pos
        if signed and self.peek() in "+-":
            self.pos += 1
        while self.peek().isdigit():
            self.pos += 1
        tok = self.text[start:self.pos]
        if not tok.lstrip("+-"):
            raise self.error("expected an integer", start)
        return int(tok)

    def lookahead_int(self) -> bool:
        p = self.pos
        while p < len(self.text) and self.text[p].isspace():
            p += 1
        return p < len(self.text) and self.text[p].isdigit()

    def word(self, stop: str) -> WordExpression:
        factors = []
        while True:
            self.skip_ws()
            ch = self.peek()
            if ch == "" or ch in stop:
                break
            factors.append(self.factor())
        if not factors:
            raise self.error("expected a word")
        return WordExpression(tuple(factors), self.rank, self.degree)

    def factor(self) -> Node:
        node = self.atom()
        while self.peek() == "^":
            self.pos += 1
            nxt = self.peek()
            if nxt.isdigit() or nxt in "+-":
                node = Power(node, self.integer(signed=True))
            elif nxt in "x([e":
                node = Conj(node, self.atom())
            else:
                raise self.error("expected an exponent or a conjugating atom after '^'")
        return node

    def atom(self) -> Node:
        self.skip_ws()
        ch = self.peek()
        start = self.pos
        if ch == "x":
            self.pos += 1
            if not self.peek().isdigit():
                raise self.error("expected a variable index after 'x'")
            i = self.integer()
            if not 1 <= i <= self.rank:
                raise self.error(f"variable x{i} exceeds rank {self.rank}", start)
            return Var(i)
        if ch == "e" and not self.text[self.pos + 1:self.pos + 2].isalnum():
            self.pos += 1
            return Const(Permutation.identity(self.degree))
        if ch == "(":
            self.pos += 1
            if self.lookahead_int():
                return self.cycles(start)
            inner = self.word(")]")
            self.expect(")")
            return Group(inner)
        if ch == "[":
            self.pos += 1
            left = self.word(",]")
            self.expect(",")
            right = self.word("],)")
            self.expect("]")
            return Comm(left, right)
        raise self.error(f"unexpected character {ch!r}" if ch else "unexpected end of input")

    def cycles(self, start: int) -> Const:
        # the opening '(' of the first cycle is consumed already
        perm = Permutation.identity(self.degree)
        while True:
            pts = [self.integer()]
            while True:
                self.skip_ws()
                if self.peek() == ",":
                    self.pos += 1
                if self.peek() == ")":
                    self.pos += 1
                    break
                if not self.lookahead_int():
                    raise self.error("malformed cycle")
                pts.append(self.integer())
            if len(pts) < 2:
                raise self.error("a cycle needs at least two points", start)
            for p in pts:
                if not 1 <= p <= self.degree:
                    raise self.error(f"point {p} exceeds degree {self.degree}", start)
            if len(set(pts)) != len(pts):
                raise self.error("repeated point inside a cycle", start)
            perm = perm * Permutation.from_cycles([pts], self.degree)
            # another cycle only if it follows immediately
            if self.peek() == "(" and self.lookahead_int_after_paren():
                self.pos += 1
                continue
            return Const(perm)

    def lookahead_int_after_paren(self) -> bool:
        p = self.pos + 1
        while p < len(self.text) and self.text[p].isspace():
            p += 1
        return p < len(self.text) and self.text[p].isdigit()


def parse_word(text: str, rank: int, degree: int) -> WordExpression:
    """Parse ``text`` into an expression tree; raises :class:`ParseError` with the position."""
    if rank < 1 or degree < 1:
        raise InvalidInput("rank and degree must be >= 1")
    p = _Parser(text, rank, degree)
    expr = p.word("")
    p.skip_ws()
    if p.pos != len(text):
        raise p.error("trailing input")
    return expr


def word_from_text(text: str, rank: int, degree: int, letter_cap: int = DEFAULT_LETTER_CAP) -> WordWithConstants:
    return parse_word(text, rank, degree).to_word(letter_cap)


# ---------------------------------------------------------------------------
# expansion


def letter_count(node: Node) -> int:
    if isinstance(node, Var):
        return 1
    if isinstance(node, Const):
        return 0
    if isinstance(node, Group):
        return letter_count(node.word)
    if isinstance(node, Comm):
        return 2 * (letter_count(node.left) + letter_count(node.right))
    if isinstance(node, Power):
        return abs(node.exponent) * letter_count(node.base)
    if isinstance(node, Conj):
        return letter_count(node.base) + 2 * letter_count(node.by)
    return sum(letter_count(f) for f in node.factors)


def _inverse_raw(raw: list) -> list:
    return [item.inverse() for item in reversed(raw)]


def _expand(node: Node) -> list:
    if isinstance(node, Var):
        return [Letter(node.index, 1)]
    if isinstance(node, Const):
        return [node.perm]
    if isinstance(node, Group):
        return _expand(node.word)
    if isinstance(node, Comm):
        u, v = _expand(node.left), _expand(node.right)
        return _inverse_raw(u) + _inverse_raw(v) + u + v
    if isinstance(node, Power):
        base = _expand(node.base)
        if node.exponent < 0:
            base = _inverse_raw(base)
        return base * abs(node.exponent)
    if isinstance(node, Conj):
        by = _expand(node.by)
        return _inverse_raw(by) + _expand(node.base) + by
    out = []
    for f in node.factors:
        out.extend(_expand(f))
    return out


# ---------------------------------------------------------------------------
# formatting


def format_expression(node: Node) -> str:
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Const):
        return format_cycle_notation(node.perm)
    if isinstance(node, Group):
        return f"({format_expression(node.word)})"
    if isinstance(node, Comm):
        return f"[{format_expression(node.left)}, {format_expression(node.right)}]"
    if isinstance(node, Power):
        return f"{format_expression(node.base)}^{node.exponent}"
    if isinstance(node, Conj):
        # the parser only produces atoms after '^', so no parentheses are needed
        return f"{format_expression(node.base)}^{format_expression(node.by)}"
    return " ".join(format_expression(f) for f in node.factors)
