import random

import pytest

from src.errors import FormulaSyntaxError, NestingTooDeep, UnexpectedCharacter, UnknownCoalitionSyntax
from src.formula import (
    Always,
    And,
    Atom,
    Eventually,
    Imply,
    Next,
    Not,
    Or,
    TokenKind,
    TrueLit,
    Until,
    depth,
    format_formula,
    parse,
    tokenize,
)
from tests.generators import random_ast

x, y = Atom('x'), Atom('y')


def test_tokenize_next_formula():
    tokens = tokenize('<<1>>@ (x and y)')
    assert [t.kind for t in tokens] == [
        TokenKind.COALITION_OPEN, TokenKind.ATOM, TokenKind.COALITION_CLOSE, TokenKind.NEXT,
        TokenKind.LPAREN, TokenKind.ATOM, TokenKind.AND, TokenKind.ATOM, TokenKind.RPAREN,
    ]
    assert [t.lexeme for t in tokens if t.kind is TokenKind.ATOM] == ['1', 'x', 'y']
    offsets = [t.offset for t in tokens]
    assert offsets == sorted(set(offsets))


def test_tokenize_keyword_and_digit_atoms():
    assert [t.kind for t in tokenize('true')] == [TokenKind.TRUE]
    (token,) = tokenize('111')
    assert token.kind is TokenKind.ATOM and token.lexeme == '111'
    assert tokenize('andy')[0].kind is TokenKind.ATOM


def test_tokenize_rejects_unknown_character():
    with pytest.raises(UnexpectedCharacter) as info:
        tokenize('x ? y')
    assert info.value.offset == 2


@pytest.mark.parametrize('text, expected', [
    ('<<1>> true U x', Until(('1',), TrueLit(), x)),
    ('not not true', Not(Not(TrueLit()))),
    ('a or b and c', Or(Atom('a'), And(Atom('b'), Atom('c')))),
    ('not a and b', And(Not(Atom('a')), Atom('b'))),
    ('<<1>>@ x or y', Next(('1',), Or(x, y))),
    ('<<>># p', Always((), Atom('p'))),
    ('<<1, 2>> ~ (x and y)', Eventually(('1', '2'), And(x, y))),
    ('x => y => x', Imply(Imply(x, y), x)),
    ('x = y', Imply(x, y)),
    ('(<<1>>@ x) and y', And(Next(('1',), x), y)),
])
def test_parse(text, expected):
    assert parse(text) == expected


def test_until_without_first_operand():
    with pytest.raises(FormulaSyntaxError) as info:
        parse('<<1>> U x')
    assert info.value.kind == 'SyntaxError'
    assert info.value.offset == 6


def test_syntax_error_reports_expected_tokens():
    with pytest.raises(FormulaSyntaxError) as info:
        parse('x and')
    assert info.value.offset == 5
    assert "'('" in info.value.expected
    assert 'proposition' in info.value.expected


def test_trailing_input_is_rejected():
    with pytest.raises(FormulaSyntaxError) as info:
        parse('x y')
    assert info.value.offset == 2


@pytest.mark.parametrize('text', ['<<1 2>>@ x', '<<1,>>@ x', '<<and>>@ x'])
def test_bad_coalitions(text):
    with pytest.raises(UnknownCoalitionSyntax):
        parse(text)


def test_nesting_limit():
    with pytest.raises(NestingTooDeep):
        parse('(' * 50 + 'x' + ')' * 50, max_depth=20)


def test_pathological_nesting_fails_cleanly():
    with pytest.raises(NestingTooDeep):
        parse('not ' * 100000 + 'x')


def test_deep_nesting_below_the_limit():
    assert parse('(' * 1000 + 'x' + ')' * 1000) == x
    assert parse('(' * 5000 + '<<1>>~ x' + ')' * 5000) == Eventually(('1',), x)

    formula = parse('not (' * 1000 + 'x' + ')' * 1000)
    assert depth(formula) == 1001
    text = format_formula(formula)
    assert text == 'not (' * 1000 + 'x' + ')' * 1000
    assert format_formula(parse(text)) == text


def test_nesting_limit_counts_every_level():
    text = '(' * 10 + 'not ' * 10 + 'x' + ')' * 10
    assert parse(text, max_depth=20) is not None
    with pytest.raises(NestingTooDeep) as info:
        parse(text, max_depth=19)
    assert info.value.offset == len('(' * 10 + 'not ' * 9) + 4


def test_format_deep_ast():
    formula = x
    for i in range(20000):
        formula = Next(('1',), formula) if i % 2 else And(formula, y)
    text = format_formula(formula)
    assert text.startswith('<<1>>@ ((<<1>>@ ((')
    assert text.count('<<1>>@') == 10000
    assert text.count(' and ') == 10000


@pytest.mark.parametrize('text, offset', [
    ('x and <<1>>@ y', 6),
    ('not <<1>>@ y', 4),
    ('<<1>>@ <<2>>@ y', 7),
    ('<<1>> x U <<2>>@ y', 10),
    ('(<<1>>@ x y)', 10),
    ('<<1>> x y', 8),
])
def test_coalitions_only_open_a_whole_formula(text, offset):
    with pytest.raises(FormulaSyntaxError) as info:
        parse(text)
    assert info.value.offset == offset


@pytest.mark.parametrize('formula, text', [
    (Until(('1',), TrueLit(), x), '<<1>> (true) U (x)'),
    (x, 'x'),
    (Always((), Atom('p')), '<<>># (p)'),
    (Not(And(x, y)), 'not ((x) and (y))'),
])
def test_format(formula, text):
    assert format_formula(formula) == text


def test_depth():
    assert depth(x) == 1
    assert depth(Next(('1',), And(x, Not(y)))) == 4


@pytest.mark.slow
def test_format_parse_round_trip():
    rng = random.Random(8)
    for _ in range(10000):
        formula = random_ast(rng, depth=8)
        assert parse(format_formula(formula)) == formula
