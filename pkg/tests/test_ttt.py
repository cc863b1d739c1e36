import itertools
import random

import pytest

from src.cgs import is_turn_based, successors, turn_owner
from src.errors import GameOver, InvalidBoard, NotComputersTurn
from src.ttt import (
    FULL_PROPOSITIONS,
    Board,
    MoveChoice,
    Tier,
    TTTStrategy,
    avoid_set,
    board_from_state_name,
    generate_structure,
    line_fill,
    line_status,
    play_interactive,
    render_board,
    state_name,
    synthesize_move,
    winning_set,
)
from tests.oracles import enumerate_positions, immediate_wins, minimax, ttt_winner

EMPTY = (0,) * 9


@pytest.fixture(scope='module')
def computer_first():
    return TTTStrategy(Board.empty(1))


@pytest.fixture(scope='module')
def user_first():
    return TTTStrategy(Board.empty(2))


@pytest.fixture(params=[1, 2], ids=['computer-first', 'user-first'])
def strategy(request, computer_first, user_first):
    return computer_first if request.param == 1 else user_first


def board(text, turn, first):
    return Board.from_string(text, turn, first)


def state(strategy, text, turn):
    return strategy.structure.state_id(f"{text}/{turn}")


# Boards

def test_board_validation():
    with pytest.raises(InvalidBoard):
        board('110000000', 2, 1)
    with pytest.raises(InvalidBoard):
        board('120000000', 2, 1)
    with pytest.raises(InvalidBoard):
        board('111222000', 1, 1)
    with pytest.raises(InvalidBoard):
        board('12', 1, 1)


def test_line_fill_and_status():
    position = board('120010000', 2, 1)
    assert line_fill(position, (0, 1, 2)) == 2
    assert line_fill(position, (6, 7, 8)) == 0
    statuses = line_status(position)
    assert len(statuses) == 8
    assert all(0 <= s.fill <= 3 for s in statuses)
    assert statuses[0].values == '120'


def test_play_and_winner():
    position = Board.empty(1)
    for cell in (0, 3, 1, 4, 2):
        position = position.play(cell)
    assert position.winner() == 1
    assert position.is_terminal()
    with pytest.raises(GameOver):
        position.play(8)
    with pytest.raises(InvalidBoard):
        Board.empty(1).play(0).play(0)


def test_render_board():
    assert render_board(board('120000000', 1, 1)) == 'X | O | 2\n---------\n3 | 4 | 5\n---------\n6 | 7 | 8'


# Structure

def test_one_move_from_the_end():
    structure = generate_structure(board('121122210', 1, 1))
    assert structure.num_states == 2
    terminal = structure.state_id('121122211/2')
    assert successors(structure, terminal) == {terminal}


def test_root_with_winner_is_rejected():
    with pytest.raises(InvalidBoard):
        generate_structure(board('111220000', 2, 1))


@pytest.mark.parametrize('first', [1, 2])
def test_state_count_matches_enumerator(first):
    structure = generate_structure(Board.empty(first))
    assert structure.num_states == len(enumerate_positions(EMPTY, first)) == 5478


def test_structure_shape(computer_first):
    structure = computer_first.structure
    assert is_turn_based(structure)
    assert structure.propositions == ('111', '222', 'turn1', 'turn2')

    for s in structure.states:
        position = board_from_state_name(s.name, 1)
        labels = structure.labeling[s.id]
        assert ('111' in labels) == (ttt_winner(position.cells) == 1)
        assert ('222' in labels) == (ttt_winner(position.cells) == 2)
        assert len(labels & {'turn1', 'turn2'}) == 1

        if position.is_terminal():
            assert successors(structure, s.id) == {s.id}
            assert turn_owner(structure, s.id) is None
            continue
        assert len(structure.alternatives[position.turn - 1][s.id]) == len(position.empty_cells())
        other = f"turn{3 - position.turn}"
        for target in successors(structure, s.id):
            assert other in structure.labeling[target]


def test_full_labels():
    structure = generate_structure(board('121122210', 1, 1), full_labels=True)
    assert structure.propositions == FULL_PROPOSITIONS
    root = structure.state_id('121122210/1')
    assert structure.labeling[root] == {'121', '122', '210', '112', '221', '120', 'turn1'}


# Winning and avoid sets

def test_winning_set(computer_first):
    winning = computer_first.winning
    assert state(computer_first, '110220000', 1) in winning
    assert state(computer_first, '110222100', 1) not in winning
    assert state(computer_first, '000000000', 1) not in winning
    assert winning == winning_set(computer_first.structure, 'direct')


def test_avoid_sets(computer_first, user_first):
    assert state(computer_first, '100220011', 2) in computer_first.avoid
    assert state(user_first, '100220001', 2) in user_first.avoid
    assert state(computer_first, '000000000', 1) not in computer_first.avoid
    assert computer_first.avoid == avoid_set(computer_first.structure, 1)

    won = state(computer_first, '110222100', 1)
    assert won in computer_first.avoid
    predecessor = state(computer_first, '110220100', 2)
    assert predecessor in computer_first.avoid


# Move synthesis

def test_takes_the_win(computer_first):
    choice = computer_first.choose(board('110220000', 1, 1))
    assert choice == MoveChoice(cell=2, tier=Tier.IMMEDIATE_WIN, state='111220000/2')


def test_blocks_the_threat(user_first):
    assert user_first.choose(board('220010000', 1, 2)).cell == 2


@pytest.mark.parametrize('text, first', [
    ('000001202', 2),
    ('010001202', 1),
])
def test_blocks_the_threat_in_a_lost_position(text, first, computer_first, user_first):
    # Blocking cell 7 still leaves the user a fork; every successor is unsafe
    strategy = computer_first if first == 1 else user_first
    blocked = text[:7] + '1' + text[8:]
    assert state(strategy, text, 1) in strategy.unsafe
    assert state(strategy, blocked, 2) in strategy.unsafe
    assert state(strategy, blocked, 2) not in strategy.threatened

    choice = strategy.choose(board(text, 1, first))
    assert choice == MoveChoice(cell=7, tier=Tier.NO_IMMEDIATE_LOSS, state=f"{blocked}/2")


def test_threatened_set_is_independent_of_the_first_mover(computer_first, user_first):
    assert state(user_first, '000011202', 2) in user_first.threatened
    assert state(user_first, '000001212', 2) in user_first.avoid
    assert state(user_first, '000001212', 2) not in user_first.threatened
    assert computer_first.threatened == computer_first.avoid


def test_synthesize_move_on_empty_board():
    choice = synthesize_move(Board.empty(1))
    assert 0 <= choice.cell <= 8
    assert choice.tier <= Tier.SAFE


def test_synthesize_move_errors(computer_first):
    with pytest.raises(NotComputersTurn):
        synthesize_move(board('100000000', 2, 1))
    with pytest.raises(GameOver):
        synthesize_move(board('110222100', 1, 1))
    with pytest.raises(GameOver):
        computer_first.choose(board('110222100', 1, 1))


def test_choose_rejects_unreachable_positions():
    strategy = TTTStrategy(board('120000000', 1, 1))
    with pytest.raises(InvalidBoard):
        strategy.choose(board('000000120', 1, 1))


def _computer_positions(first, max_empty):
    for cells, turn in enumerate_positions(EMPTY, first):
        if turn != 1 or ttt_winner(cells) or all(cells):
            continue
        if cells.count(0) <= max_empty:
            yield cells, turn


@pytest.mark.slow
def test_strategy_against_minimax(strategy):
    first = strategy.first_mover
    for cells, turn in _computer_positions(first, 6):
        choice = strategy.choose(Board(cells, turn, first))
        wins = immediate_wins(cells, 1)
        if wins:
            assert choice.cell in wins and choice.tier is Tier.IMMEDIATE_WIN
            continue

        threats = immediate_wins(cells, 2)
        if len(threats) == 1:
            assert choice.cell == threats[0]

        after = cells[:choice.cell] + (1,) + cells[choice.cell + 1:]
        value = minimax(cells, 1)
        if value >= 0:
            assert minimax(after, 2) == value


def _always_wins(strategy, position):
    """Strategy reaches a computer win against every user continuation."""
    if position.winner():
        return position.winner() == 1
    if position.is_full():
        return False
    if position.turn == 1:
        return _always_wins(strategy, position.play(strategy.choose(position).cell))
    return all(_always_wins(strategy, position.play(cell)) for cell in position.empty_cells())


@pytest.mark.slow
def test_winning_positions_are_won(strategy):
    first = strategy.first_mover
    for cells, turn in _computer_positions(first, 6):
        position = Board(cells, turn, first)
        q = strategy.structure.state_id(state_name(position))
        assert (q in strategy.winning) == (minimax(cells, 1) == 1)
        if q in strategy.winning:
            assert _always_wins(strategy, position)


@pytest.mark.slow
@pytest.mark.parametrize('first', [1, 2])
def test_never_loses_to_random_user(first, computer_first, user_first):
    strategy = computer_first if first == 1 else user_first
    rng = random.Random(first)
    for _ in range(1000):
        position = Board.empty(first)
        while not position.is_terminal():
            if position.turn == 1:
                cell = strategy.choose(position).cell
            else:
                cell = rng.choice(position.empty_cells())
            position = position.play(cell)
        assert position.winner() != 2


# Interactive game

class LowestCell:
    """Deliberately weak strategy: always the lowest empty cell."""

    def choose(self, position):
        return MoveChoice(cell=position.empty_cells()[0], tier=Tier.ANY, state=state_name(position))


def scripted(*answers):
    remaining = list(answers)

    def read(prompt):
        if not remaining:
            raise EOFError
        return remaining.pop(0)

    return read


def test_user_beats_a_weak_strategy():
    output = []
    transcript = play_interactive(2, read=scripted('3', '4', '5'), write=output.append, strategy=LowestCell())
    assert transcript.outcome == 'user wins'
    assert transcript.moves == [(2, 3), (1, 0), (2, 4), (1, 1), (2, 5)]
    assert output[-1] == 'User wins!'


def test_bad_cells_are_reprompted():
    output = []
    transcript = play_interactive(2, read=scripted('9', 'x', '3', '0', '4', '5'), write=output.append,
                                  strategy=LowestCell())
    assert 'Cells are numbered 0-8, try again' in output
    assert "'x' is not a cell number, try again" in output
    assert 'Cell 0 is taken, try again' in output
    assert transcript.outcome == 'user wins'


def test_end_of_input_aborts():
    transcript = play_interactive(2, read=scripted('4'), write=lambda line: None, strategy=LowestCell())
    assert transcript.outcome == 'aborted'
    assert transcript.moves == [(2, 4), (1, 0)]


def test_real_strategy_game(user_first):
    # Tries cells in order until one is free
    answers = itertools.cycle('012345678')
    transcript = play_interactive(2, read=lambda prompt: next(answers), write=lambda line: None,
                                  strategy=user_first)
    assert transcript.outcome in ('draw', 'computer wins')
