"""
Tic-Tac-Toe as a turn-based synchronous game structure, and the computer's strategy.

Cells are numbered

    0 | 1 | 2
    3 | 4 | 5
    6 | 7 | 8

Cell values: 0 empty, 1 computer (player 1), 2 user (player 2). At every
non-terminal state the player to move has one move per empty cell ("1".."k",
the i-th empty cell in ascending order) and the other player idles with "0".
Terminal states (a completed line or a full board) idle both players on a
self-loop.
"""

from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum
from typing import List, Optional, Tuple

from .cgs import StructureDescription, move_vectors, successor, validate
from .config import DEFAULT_BACKEND
from .engine import ModelChecker
from .errors import ATLError, GameOver, InvalidBoard, NotComputersTurn
from .formula import Atom, Eventually, Next
from .utils.logger import setup_logger

logger = setup_logger('ttt')

COMPUTER = 1
USER = 2
IDLE = '0'

ROWS = ((0, 1, 2), (3, 4, 5), (6, 7, 8))
COLUMNS = ((0, 3, 6), (1, 4, 7), (2, 5, 8))
DIAGONALS = ((0, 4, 8), (2, 4, 6))
LINES = ROWS + COLUMNS + DIAGONALS

WIN_1 = '111'
WIN_2 = '222'
PROPOSITIONS = (WIN_1, WIN_2, 'turn1', 'turn2')
FULL_PROPOSITIONS = tuple(f"{a}{b}{c}" for a in '012' for b in '012' for c in '012') + ('turn1', 'turn2')

WINNING_FORMULA = Eventually(('1',), Atom(WIN_1))
AVOID_FORMULAS = {
    COMPUTER: Next(('2',), Atom(WIN_2)),
    USER: Eventually(('2',), Atom(WIN_2)),
}
# Positions from which the user can force a win, whoever started
UNSAFE_FORMULA = Eventually(('2',), Atom(WIN_2))
# Positions where the user completes a line on the next move, whoever started
THREAT_FORMULA = Next(('2',), Atom(WIN_2))


def _other(player):
    return USER if player == COMPUTER else COMPUTER


@dataclass(frozen=True)
class Board:
    cells: Tuple[int, ...]
    turn: int
    first_mover: int

    @classmethod
    def empty(cls, first_mover=COMPUTER):
        return cls((0,) * 9, first_mover, first_mover)

    @classmethod
    def from_string(cls, text, turn, first_mover):
        """Board from a 9-character string of 0/1/2 digits."""
        if len(text) != 9 or any(ch not in '012' for ch in text):
            raise InvalidBoard(f"board must be 9 characters of 0, 1 or 2 (got '{text}')")
        board = cls(tuple(int(ch) for ch in text), int(turn), int(first_mover))
        board.validate()
        return board

    def to_string(self):
        return ''.join(str(x) for x in self.cells)

    def validate(self):
        """Raise InvalidBoard unless the position can occur in a game."""
        if len(self.cells) != 9 or any(x not in (0, 1, 2) for x in self.cells):
            raise InvalidBoard("board must have 9 cells with values 0, 1 or 2")
        if self.turn not in (COMPUTER, USER) or self.first_mover not in (COMPUTER, USER):
            raise InvalidBoard("turn and first mover must be 1 or 2")

        first, second = self.first_mover, _other(self.first_mover)
        lead = self.cells.count(first) - self.cells.count(second)
        if lead not in (0, 1):
            raise InvalidBoard(f"piece counts do not fit player {first} moving first")
        expected_turn = first if lead == 0 else second
        if self.turn != expected_turn:
            raise InvalidBoard(f"it must be player {expected_turn}'s turn on this board")

        winners = {status.winner for status in line_status(self) if status.winner}
        if len(winners) > 1:
            raise InvalidBoard("both players have a completed line")

    def empty_cells(self):
        return [i for i, x in enumerate(self.cells) if x == 0]

    def winner(self):
        for status in line_status(self):
            if status.winner:
                return status.winner
        return 0

    def is_full(self):
        return sum(line_fill(self, row) for row in ROWS) == 9

    def is_terminal(self):
        return bool(self.winner()) or self.is_full()

    def play(self, cell):
        """The board after the player to move takes cell."""
        if self.is_terminal():
            raise GameOver("the game is already over")
        if not 0 <= cell <= 8:
            raise InvalidBoard(f"cell {cell} is out of range 0-8")
        if self.cells[cell]:
            raise InvalidBoard(f"cell {cell} is already taken")
        cells = list(self.cells)
        cells[cell] = self.turn
        return Board(tuple(cells), _other(self.turn), self.first_mover)


@dataclass(frozen=True)
class LineStatus:
    line: Tuple[int, int, int]
    values: str
    fill: int
    winner: int


def line_fill(board, line):
    """#(x_l x_m x_n) = min(x_l, 1) + min(x_m, 1) + min(x_n, 1)."""
    return sum(min(board.cells[i], 1) for i in line)


def line_status(board):
    statuses = []
    for line in LINES:
        values = ''.join(str(board.cells[i]) for i in line)
        winner = int(values[0]) if values in (WIN_1, WIN_2) else 0
        statuses.append(LineStatus(line, values, line_fill(board, line), winner))
    return tuple(statuses)


def state_name(board):
    return f"{board.to_string()}/{board.turn}"


def board_from_state_name(name, first_mover):
    cells, turn = name.split('/')
    return Board(tuple(int(ch) for ch in cells), int(turn), first_mover)


def _labels(board, full_labels):
    statuses = line_status(board)
    if full_labels:
        labels = {status.values for status in statuses}
    else:
        labels = {WIN_1 if status.winner == COMPUTER else WIN_2 for status in statuses if status.winner}
    labels.add(f"turn{board.turn}")
    return sorted(labels)


def generate_structure(root, full_labels=False):
    """
    Every board reachable from root by legal moves, as a game structure.

    Args:
        root: starting position (valid, no winner yet)
        full_labels: label states with every line's value string instead of
            just the win markers

    Returns:
        GameStructure with players "1" (computer) and "2" (user)
    """
    root.validate()
    if root.winner():
        raise InvalidBoard("the root position already has a winner")

    states = []
    moves = {'1': {}, '2': {}}
    transitions = []
    seen = {state_name(root)}
    queue = deque([root])

    while queue:
        board = queue.popleft()
        name = state_name(board)
        states.append((name, _labels(board, full_labels)))

        if board.is_terminal():
            moves['1'][name] = [IDLE]
            moves['2'][name] = [IDLE]
            transitions.append((name, (IDLE, IDLE), name))
            continue

        # Number of alternatives of the player to move: k = 9 - sum over rows of #(row)
        k = 9 - sum(line_fill(board, row) for row in ROWS)
        empties = board.empty_cells()
        own = [str(i) for i in range(1, k + 1)]
        mover, idler = str(board.turn), str(_other(board.turn))
        moves[mover][name] = own
        moves[idler][name] = [IDLE]

        for symbol, cell in zip(own, empties):
            child = board.play(cell)
            child_name = state_name(child)
            vector = (symbol, IDLE) if board.turn == COMPUTER else (IDLE, symbol)
            transitions.append((name, vector, child_name))
            if child_name not in seen:
                seen.add(child_name)
                queue.append(child)

    description = StructureDescription(
        players=['1', '2'],
        propositions=list(FULL_PROPOSITIONS if full_labels else PROPOSITIONS),
        states=states,
        moves=moves,
        transitions=transitions,
    )
    structure = validate(description)
    logger.info(f"Generated Tic-Tac-Toe structure from {state_name(root)}: {structure.num_states} states")
    return structure


def winning_set(structure, backend=DEFAULT_BACKEND):
    """States where the computer can force a completed line of 1s: <<1>>~ 111."""
    return ModelChecker(structure, backend).check(WINNING_FORMULA).satisfying


def avoid_set(structure, first_mover, backend=DEFAULT_BACKEND):
    """
    States the computer must not move into: <<2>>@ 222 when the computer moved
    first, <<2>>~ 222 when the user did.
    """
    if first_mover not in AVOID_FORMULAS:
        raise InvalidBoard(f"first mover must be 1 or 2 (got {first_mover})")
    return ModelChecker(structure, backend).check(AVOID_FORMULAS[first_mover]).satisfying


class Tier(IntEnum):
    IMMEDIATE_WIN = 0
    FORCED_WIN = 1
    SAFE = 2
    NO_IMMEDIATE_LOSS = 3
    ANY = 4

    @property
    def label(self):
        return self.name.lower().replace('_', ' ')


@dataclass(frozen=True)
class MoveChoice:
    cell: int
    tier: Tier
    state: str


class TTTStrategy:
    """Move synthesis for the computer over the structure rooted at one position."""

    def __init__(self, root, backend=DEFAULT_BACKEND):
        self.root = root
        self.first_mover = root.first_mover
        self.structure = generate_structure(root)
        self.winning = winning_set(self.structure, backend)
        self.avoid = avoid_set(self.structure, self.first_mover, backend)
        checker = ModelChecker(self.structure, backend)
        sets = {AVOID_FORMULAS[self.first_mover]: self.avoid}
        for formula in (UNSAFE_FORMULA, THREAT_FORMULA):
            if formula not in sets:
                sets[formula] = checker.check(formula).satisfying
        self.unsafe = sets[UNSAFE_FORMULA]
        self.threatened = sets[THREAT_FORMULA]
        logger.info(
            f"✅ Strategy ready: {len(self.winning)} winning, {len(self.avoid)} avoid, "
            f"{len(self.unsafe)} unsafe, {len(self.threatened)} threatened state(s)"
        )

    def tier(self, q):
        if WIN_1 in self.structure.labeling[q]:
            return Tier.IMMEDIATE_WIN
        if q in self.winning and q not in self.avoid:
            return Tier.FORCED_WIN
        if q not in self.unsafe:
            return Tier.SAFE
        if q not in self.threatened:
            return Tier.NO_IMMEDIATE_LOSS
        return Tier.ANY

    def choose(self, board):
        """
        Pick the computer's move: the best-ranked successor, lowest cell on ties.

        Raises:
            NotComputersTurn: board.turn is not 1
            GameOver: the position is terminal
            InvalidBoard: the position is not reachable from the strategy's root
        """
        if board.turn != COMPUTER:
            raise NotComputersTurn("it is the user's turn")
        if board.is_terminal():
            raise GameOver("the game is already over")
        if board.first_mover != self.first_mover:
            raise InvalidBoard("board and strategy disagree on who moved first")
        try:
            q = self.structure.state_id(state_name(board))
        except ATLError:
            raise InvalidBoard(f"position {state_name(board)} is not reachable from {state_name(self.root)}") from None

        empties = board.empty_cells()
        best = None
        for mv in move_vectors(self.structure, q):
            cell = empties[int(mv[0]) - 1]
            target = successor(self.structure, q, mv)
            candidate = (self.tier(target), cell, target)
            if best is None or candidate[:2] < best[:2]:
                best = candidate

        tier, cell, target = best
        logger.debug(f"Computer at {state_name(board)} plays {cell} ({tier.label})")
        return MoveChoice(cell=cell, tier=tier, state=self.structure.states[target].name)


def synthesize_move(board, strategy=None, backend=DEFAULT_BACKEND):
    """The computer's move on board, building a strategy rooted at board when none is given."""
    board.validate()
    if board.turn != COMPUTER:
        raise NotComputersTurn("it is the user's turn")
    if board.is_terminal():
        raise GameOver("the game is already over")
    if strategy is None:
        strategy = TTTStrategy(board, backend)
    return strategy.choose(board)


# ---------------------------------------------------------------------------
# Interactive game
# ---------------------------------------------------------------------------

SYMBOLS = {0: None, COMPUTER: 'X', USER: 'O'}


def render_board(board):
    rows = []
    for row in ROWS:
        rows.append(' | '.join(SYMBOLS[board.cells[i]] or str(i) for i in row))
    return '\n---------\n'.join(rows)


def outcome_of(board):
    winner = board.winner()
    if winner == COMPUTER:
        return 'computer wins'
    if winner == USER:
        return 'user wins'
    return 'draw'


@dataclass
class Transcript:
    first_mover: int
    moves: List[Tuple[int, int]] = field(default_factory=list)
    outcome: Optional[str] = None


def _ask_user(board, read, write):
    while True:
        answer = read('Your move (0-8): ').strip()
        try:
            cell = int(answer)
        except ValueError:
            write(f"'{answer}' is not a cell number, try again")
            continue
        if not 0 <= cell <= 8:
            write('Cells are numbered 0-8, try again')
            continue
        if board.cells[cell]:
            write(f"Cell {cell} is taken, try again")
            continue
        return cell


def play_interactive(first_mover=USER, read=input, write=print, strategy=None, backend=DEFAULT_BACKEND):
    """
    Text-mode game between the user and the synthesized strategy.

    Args:
        first_mover: 1 for the computer, 2 for the user
        read: prompt function returning the user's answer
        write: output function
        strategy: object with choose(board) -> MoveChoice (defaults to TTTStrategy)

    Returns:
        Transcript with every (player, cell) move and the outcome
    """
    board = Board.empty(first_mover)
    if strategy is None:
        write('Thinking...')
        strategy = TTTStrategy(board, backend)

    transcript = Transcript(first_mover=first_mover)
    write(render_board(board))

    while not board.is_terminal():
        player = board.turn
        if player == COMPUTER:
            cell = strategy.choose(board).cell
            write(f"Computer plays {cell}")
        else:
            try:
                cell = _ask_user(board, read, write)
            except EOFError:
                transcript.outcome = 'aborted'
                return transcript
        board = board.play(cell)
        transcript.moves.append((player, cell))
        write(render_board(board))

    transcript.outcome = outcome_of(board)
    write(transcript.outcome.capitalize() + '!')
    logger.info(f"Game over after {len(transcript.moves)} moves: {transcript.outcome}")
    return transcript
