"""
ATL formula language: AST, tokenizer, operator-precedence parser and printer.

Concrete syntax (precedence is encoded by the nesting of the rules):

    atlFormula : '<<' coalition '>>' ('@' | '#' | '~') implExpr
               | '<<' coalition '>>' implExpr 'U' implExpr
               | implExpr
    implExpr   : orExpr (('=>' | '=') orExpr)*
    orExpr     : andExpr ('or' andExpr)*
    andExpr    : notExpr ('and' notExpr)*
    notExpr    : 'not' notExpr | atomExp
    atomExp    : '(' atlFormula ')' | ATOM | 'true' | 'false'
    coalition  : (NAME (',' NAME)*)?

'@' is next, '#' always, '~' eventually. Binary chains fold to the left.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from .config import MAX_FORMULA_DEPTH
from .errors import (
    FormulaSyntaxError,
    NestingTooDeep,
    UnexpectedCharacter,
    UnknownCoalitionSyntax,
)
from .utils.logger import setup_logger

logger = setup_logger('formula')


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

class Formula:
    """Base class of every ATL formula node."""

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class TrueLit(Formula):
    pass


@dataclass(frozen=True)
class FalseLit(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imply(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    coalition: Tuple[str, ...]
    operand: Formula


@dataclass(frozen=True)
class Always(Formula):
    coalition: Tuple[str, ...]
    operand: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    coalition: Tuple[str, ...]
    operand: Formula


@dataclass(frozen=True)
class Until(Formula):
    coalition: Tuple[str, ...]
    left: Formula
    right: Formula


def children(f: Formula) -> Tuple[Formula, ...]:
    """Direct subformulas, left to right."""
    if isinstance(f, (Not, Next, Always, Eventually)):
        return (f.operand,)
    if isinstance(f, (And, Or, Imply, Until)):
        return (f.left, f.right)
    return ()


def depth(f: Formula) -> int:
    """Height of the formula tree (a leaf has depth 1)."""
    best = 0
    stack = [(f, 1)]
    while stack:
        node, level = stack.pop()
        best = max(best, level)
        stack.extend((child, level + 1) for child in children(node))
    return best


# ---------------------------------------------------------------------------
# Tokens
# ---------------------------------------------------------------------------

class TokenKind(Enum):
    COALITION_OPEN = '<<'
    COALITION_CLOSE = '>>'
    NEXT = '@'
    ALWAYS = '#'
    EVENTUALLY = '~'
    UNTIL = 'U'
    IMPLY = '=>'
    OR = 'or'
    AND = 'and'
    NOT = 'not'
    TRUE = 'true'
    FALSE = 'false'
    LPAREN = '('
    RPAREN = ')'
    COMMA = ','
    ATOM = 'proposition'
    EOF = 'end of input'


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    offset: int


KEYWORDS = {
    'U': TokenKind.UNTIL,
    'or': TokenKind.OR,
    'and': TokenKind.AND,
    'not': TokenKind.NOT,
    'true': TokenKind.TRUE,
    'false': TokenKind.FALSE,
}

# Longest symbols first
SYMBOLS = (
    ('<<', TokenKind.COALITION_OPEN),
    ('>>', TokenKind.COALITION_CLOSE),
    ('=>', TokenKind.IMPLY),
    ('=', TokenKind.IMPLY),
    ('@', TokenKind.NEXT),
    ('#', TokenKind.ALWAYS),
    ('~', TokenKind.EVENTUALLY),
    ('(', TokenKind.LPAREN),
    (')', TokenKind.RPAREN),
    (',', TokenKind.COMMA),
)

TEMPORAL_KINDS = (TokenKind.NEXT, TokenKind.ALWAYS, TokenKind.EVENTUALLY)


def _is_word_char(ch):
    return ch.isalnum() or ch == '_'


def tokenize(text: str) -> List[Token]:
    """
    Split formula text into tokens.

    Offsets are character offsets into text. The returned list does not include
    the end-of-input marker.

    Raises:
        UnexpectedCharacter: at the first character that starts no token
    """
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if _is_word_char(ch):
            start = i
            while i < n and _is_word_char(text[i]):
                i += 1
            word = text[start:i]
            tokens.append(Token(KEYWORDS.get(word, TokenKind.ATOM), word, start))
            continue
        for symbol, kind in SYMBOLS:
            if text.startswith(symbol, i):
                tokens.append(Token(kind, symbol, i))
                i += len(symbol)
                break
        else:
            raise UnexpectedCharacter(f"unexpected character {ch!r}", offset=i)
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_OPERAND_START = ("'('", "'false'", "'not'", "'true'", 'proposition')

# Binary connectives: token -> (precedence, node type). 'not' binds tightest.
_BINARY_TOKENS = {
    TokenKind.IMPLY: (1, Imply),
    TokenKind.OR: (2, Or),
    TokenKind.AND: (3, And),
}
_NOT_PRECEDENCE = 4
_TEMPORAL_NODES = {TokenKind.NEXT: Next, TokenKind.ALWAYS: Always, TokenKind.EVENTUALLY: Eventually}

# Frame roles: what closes the implExpr a frame is collecting
_TOP = 'top'
_GROUP = 'group'
_TEMPORAL = 'temporal'
_UNTIL_LEFT = 'until-left'
_UNTIL_RIGHT = 'until-right'


def _precedence(kind):
    return _NOT_PRECEDENCE if kind is TokenKind.NOT else _BINARY_TOKENS[kind][0]


class _Frame:
    """One implExpr under construction: its operands and pending operators."""

    def __init__(self, role, coalition=(), build=None, left=None):
        self.role = role
        self.coalition = coalition
        self.build = build
        self.left = left
        self.values = []
        self.ops = []

    @property
    def fresh(self):
        return not self.values and not self.ops


class _Parser:
    """
    Operator-precedence parser over the token list.

    Parentheses and coalition operators open frames on an explicit stack, so
    nesting is bounded by max_depth only, never by the interpreter stack.
    """

    def __init__(self, text, max_depth):
        self.tokens = tokenize(text)
        self.eof = Token(TokenKind.EOF, '', len(text))
        self.pos = 0
        self.depth = 0
        self.max_depth = max_depth

    # helpers

    def peek(self) -> Token:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else self.eof

    def advance(self) -> Token:
        token = self.peek()
        self.pos += 1
        return token

    def expect(self, kind: TokenKind, expected=None) -> Token:
        token = self.peek()
        if token.kind is not kind:
            self.fail(token, expected or (_describe(kind),))
        return self.advance()

    def fail(self, token, expected, error=FormulaSyntaxError):
        found = 'end of input' if token.kind is TokenKind.EOF else f"'{token.lexeme}'"
        raise error(f"unexpected {found} at offset {token.offset}", offset=token.offset, expected=expected)

    def enter(self):
        self.depth += 1
        if self.depth > self.max_depth:
            token = self.peek()
            raise NestingTooDeep(f"formula nesting exceeds {self.max_depth} levels", offset=token.offset)

    def leave(self):
        self.depth -= 1

    # driver

    def parse(self) -> Formula:
        frames = [_Frame(_TOP)]
        want_operand = True
        while True:
            frame = frames[-1]
            token = self.peek()
            if want_operand:
                want_operand = self.operand(frames, token)
                continue

            if token.kind in _BINARY_TOKENS:
                self.reduce(frame, _BINARY_TOKENS[token.kind][0])
                frame.ops.append(self.advance().kind)
                want_operand = True
                continue

            # Anything else ends the implExpr of this frame
            self.reduce(frame, 0)
            node = frame.values.pop()
            if frame.role == _TOP:
                if token.kind is not TokenKind.EOF:
                    self.fail(token, ('end of input',))
                return node

            frames.pop()
            if frame.role == _UNTIL_LEFT:
                self.expect(TokenKind.UNTIL, ("'U'",))
                frames.append(_Frame(_UNTIL_RIGHT, frame.coalition, left=node))
                want_operand = True
                continue
            if frame.role == _GROUP:
                self.expect(TokenKind.RPAREN, ("')'",))
            elif frame.role == _TEMPORAL:
                node = frame.build(frame.coalition, node)
            else:
                node = Until(frame.coalition, frame.left, node)
            self.leave()
            frames[-1].values.append(node)

    def operand(self, frames, token) -> bool:
        """Consume the start of an operand; returns whether another operand is still due."""
        frame = frames[-1]
        if token.kind is TokenKind.NOT:
            self.advance()
            self.enter()
            frame.ops.append(TokenKind.NOT)
            return True
        if token.kind is TokenKind.LPAREN:
            self.advance()
            self.enter()
            frames.append(_Frame(_GROUP))
            return True
        if token.kind is TokenKind.ATOM:
            self.advance()
            frame.values.append(Atom(token.lexeme))
            return False
        if token.kind is TokenKind.TRUE:
            self.advance()
            frame.values.append(TrueLit())
            return False
        if token.kind is TokenKind.FALSE:
            self.advance()
            frame.values.append(FalseLit())
            return False
        # A coalition operator may only open a whole atlFormula
        if token.kind is TokenKind.COALITION_OPEN and frame.role in (_TOP, _GROUP) and frame.fresh:
            self.enter()
            coalition = self.coalition()
            token = self.peek()
            if token.kind in _TEMPORAL_NODES:
                self.advance()
                frames.append(_Frame(_TEMPORAL, coalition, build=_TEMPORAL_NODES[token.kind]))
            elif token.kind is TokenKind.UNTIL or token.kind is TokenKind.EOF:
                self.fail(token, ("'#'", "'@'", "'~'") + _OPERAND_START)
            else:
                frames.append(_Frame(_UNTIL_LEFT, coalition))
            return True
        self.fail(token, _OPERAND_START)

    def reduce(self, frame, precedence):
        """Apply the frame's pending operators that bind at least as tightly as precedence."""
        while frame.ops and _precedence(frame.ops[-1]) >= precedence:
            kind = frame.ops.pop()
            operand = frame.values.pop()
            if kind is TokenKind.NOT:
                frame.values.append(Not(operand))
                self.leave()
            else:
                frame.values.append(_BINARY_TOKENS[kind][1](frame.values.pop(), operand))

    def coalition(self) -> Tuple[str, ...]:
        self.expect(TokenKind.COALITION_OPEN)
        names = []
        if self.peek().kind is TokenKind.COALITION_CLOSE:
            self.advance()
            return ()
        while True:
            token = self.peek()
            if token.kind is not TokenKind.ATOM:
                self.fail(token, ('player name', "'>>'") if not names else ('player name',),
                          error=UnknownCoalitionSyntax)
            names.append(self.advance().lexeme)
            token = self.peek()
            if token.kind is TokenKind.COMMA:
                self.advance()
                continue
            if token.kind is TokenKind.COALITION_CLOSE:
                self.advance()
                return tuple(names)
            self.fail(token, ("','", "'>>'"), error=UnknownCoalitionSyntax)


def _describe(kind: TokenKind) -> str:
    return kind.value if kind in (TokenKind.ATOM, TokenKind.EOF) else f"'{kind.value}'"


def parse(text: str, max_depth: Optional[int] = None) -> Formula:
    """
    Parse ATL formula text into an AST. No game structure is needed.

    Args:
        text: formula text
        max_depth: nesting limit (defaults to ATL_MAX_FORMULA_DEPTH)

    Returns:
        The formula AST

    Raises:
        FormulaSyntaxError: (or a subclass) with the offending offset
    """
    parser = _Parser(text, MAX_FORMULA_DEPTH if max_depth is None else max_depth)
    formula = parser.parse()
    logger.debug(f"Parsed formula: {format_formula(formula)}")
    return formula


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

_BINARY = {And: 'and', Or: 'or', Imply: '=>'}
_UNARY_TEMPORAL = {Next: '@', Always: '#', Eventually: '~'}


def _layout(f: Formula) -> tuple:
    """Text pieces and subformulas of one node, in output order."""
    if isinstance(f, TrueLit):
        return ('true',)
    if isinstance(f, FalseLit):
        return ('false',)
    if isinstance(f, Atom):
        return (f.name,)
    if isinstance(f, Not):
        return ('not (', f.operand, ')')
    if type(f) in _BINARY:
        return ('(', f.left, f") {_BINARY[type(f)]} (", f.right, ')')
    if type(f) in _UNARY_TEMPORAL:
        return (f"<<{','.join(f.coalition)}>>{_UNARY_TEMPORAL[type(f)]} (", f.operand, ')')
    if isinstance(f, Until):
        return (f"<<{','.join(f.coalition)}>> (", f.left, ') U (', f.right, ')')
    raise TypeError(f"not a formula node: {f!r}")


def format_formula(f: Formula) -> str:
    """Fully parenthesised canonical text; parse(format_formula(f)) == f."""
    parts = []
    stack = [f]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
        else:
            stack.extend(reversed(_layout(item)))
    return ''.join(parts)
