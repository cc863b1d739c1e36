"""
Concurrent game structures.

A structure is the tuple <players, states, propositions, labelling, moves,
alternatives, transitions>. It is built from a name-based description by
validate() and is immutable afterwards; states and players are dense integer
ids, names only matter at the I/O boundary.
"""

import hashlib
import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Sequence, Tuple

from .errors import (
    Diagnostic,
    StructureError,
    UnknownMoveVector,
    UnknownPlayer,
    UnknownProposition,
    UnknownState,
)
from .utils.logger import setup_logger

logger = setup_logger('cgs')

Move = str
MoveVector = Tuple[Move, ...]
SatSet = FrozenSet[int]
Coalition = FrozenSet[int]


class Player(NamedTuple):
    id: int
    name: str


class State(NamedTuple):
    id: int
    name: str


@dataclass(frozen=True)
class StructureDescription:
    """
    Name-based, unvalidated description of a game structure.

    Attributes:
        players: player names, in move-vector order
        propositions: proposition names
        states: (state name, labels) pairs
        moves: player name -> state name -> available moves
        transitions: (from state, move vector, to state) triples
    """
    players: Sequence[str]
    propositions: Sequence[str]
    states: Sequence[Tuple[str, Sequence[str]]]
    moves: Mapping[str, Mapping[str, Sequence[str]]]
    transitions: Sequence[Tuple[str, Sequence[str], str]]


@dataclass(frozen=True, eq=False)
class GameStructure:
    players: Tuple[Player, ...]
    states: Tuple[State, ...]
    propositions: Tuple[str, ...]
    labeling: Tuple[FrozenSet[str], ...]
    # alternatives[a][q] = moves of player a at state q, in declaration order
    alternatives: Tuple[Tuple[Tuple[Move, ...], ...], ...]
    transitions: Mapping[Tuple[int, MoveVector], int]
    fingerprint: str = field(init=False, repr=False)
    _state_index: Dict[str, int] = field(init=False, repr=False, compare=False)
    _player_index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'transitions', MappingProxyType(dict(self.transitions)))
        object.__setattr__(self, '_state_index', {s.name: s.id for s in self.states})
        object.__setattr__(self, '_player_index', {p.name: p.id for p in self.players})
        object.__setattr__(self, 'fingerprint', self._compute_fingerprint())

    def __hash__(self):
        return hash(self.fingerprint)

    def __eq__(self, other):
        if not isinstance(other, GameStructure):
            return NotImplemented
        return self.fingerprint == other.fingerprint

    def _compute_fingerprint(self):
        canonical = {
            'players': [p.name for p in self.players],
            'states': [s.name for s in self.states],
            'propositions': list(self.propositions),
            'labeling': [sorted(labels) for labels in self.labeling],
            'alternatives': [[list(moves) for moves in per_state] for per_state in self.alternatives],
            'transitions': sorted(
                [q, list(mv), target] for (q, mv), target in self.transitions.items()
            ),
        }
        payload = json.dumps(canonical, sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()

    @property
    def num_states(self):
        return len(self.states)

    @property
    def num_players(self):
        return len(self.players)

    @cached_property
    def all_states(self) -> SatSet:
        return frozenset(range(len(self.states)))

    @property
    def all_players(self) -> Coalition:
        return frozenset(range(len(self.players)))

    def state_id(self, name):
        try:
            return self._state_index[name]
        except KeyError:
            raise UnknownState(f"unknown state '{name}'") from None

    def player_id(self, name):
        try:
            return self._player_index[name]
        except KeyError:
            raise UnknownPlayer(f"unknown player '{name}'") from None

    def coalition(self, names: Iterable[str]) -> Coalition:
        """Resolve player names to a coalition of player ids."""
        return frozenset(self.player_id(name) for name in names)

    def state_names(self, states: Iterable[int]) -> List[str]:
        """Names of the given states, ascending by state id."""
        return [self.states[q].name for q in sorted(states)]

    def check_state(self, q):
        if not isinstance(q, int) or not 0 <= q < len(self.states):
            raise UnknownState(f"unknown state id {q!r}")


def move_vectors(structure, q):
    """D(q): the full product d_1(q) x ... x d_k(q), in a fixed order."""
    structure.check_state(q)
    return tuple(itertools.product(*(per_player[q] for per_player in structure.alternatives)))


def successor(structure, q, mv):
    """delta(q, mv)."""
    structure.check_state(q)
    try:
        return structure.transitions[(q, tuple(mv))]
    except KeyError:
        raise UnknownMoveVector(
            f"<{', '.join(mv)}> is not a move vector at state '{structure.states[q].name}'"
        ) from None


def successors(structure, q):
    return frozenset(successor(structure, q, mv) for mv in move_vectors(structure, q))


def states_labeled(structure, p):
    """{q | p in gamma(q)}."""
    if p not in structure.propositions:
        raise UnknownProposition(f"proposition '{p}' is not declared by the model")
    return frozenset(q for q, labels in enumerate(structure.labeling) if p in labels)


def player_moves(structure, a):
    """D_a: every move player a can make somewhere in the structure."""
    if not 0 <= a < len(structure.players):
        raise UnknownPlayer(f"unknown player id {a!r}")
    return frozenset(itertools.chain.from_iterable(structure.alternatives[a]))


def edges(structure: GameStructure) -> Dict[Tuple[int, int], FrozenSet[MoveVector]]:
    """
    The multigraph of the structure: (b, e) -> the move vectors leading from b to e.
    """
    labels: Dict[Tuple[int, int], set] = {}
    for (b, mv), e in structure.transitions.items():
        labels.setdefault((b, e), set()).add(mv)
    return {edge: frozenset(mvs) for edge, mvs in labels.items()}


def turn_owner(structure, q):
    """
    The only player with a real choice at q, or None when nobody has one.

    Raises ValueError when several players choose at q (not turn-based).
    """
    structure.check_state(q)
    choosing = [a for a, per_state in enumerate(structure.alternatives) if len(per_state[q]) > 1]
    if len(choosing) > 1:
        raise ValueError(f"state '{structure.states[q].name}' is not turn-based")
    return choosing[0] if choosing else None


def is_turn_based(structure):
    for q in range(structure.num_states):
        try:
            turn_owner(structure, q)
        except ValueError:
            return False
    return True


def _valid_move_token(move):
    return isinstance(move, str) and move != '' and not any(ch.isspace() for ch in move)


def diagnose(description: StructureDescription) -> List[Diagnostic]:
    """Collect every well-formedness violation of a description."""
    diagnostics: List[Diagnostic] = []

    def report(code, message, **where):
        diagnostics.append(Diagnostic(code, message, **where))

    players = list(description.players)
    states = [name for name, _ in description.states]
    propositions = set(description.propositions)

    if not players:
        report('EmptyPlayers', 'a game structure needs at least one player')
    if not states:
        report('EmptyStates', 'a game structure needs at least one state')

    for kind, names in (('player', players), ('state', states),
                        ('proposition', list(description.propositions))):
        for name in sorted(n for n, count in Counter(names).items() if count > 1):
            report('DuplicateName', f"{kind} name '{name}' is declared more than once")

    for name, labels in description.states:
        for p in labels:
            if p not in propositions:
                report('UnknownProposition', f"state '{name}' is labelled with undeclared proposition '{p}'",
                       state=name)

    known_states = set(states)
    known_players = set(players)

    for player in description.moves:
        if player not in known_players:
            report('UnknownPlayer', f"moves are given for undeclared player '{player}'", player=player)
            continue
        for state in description.moves[player]:
            if state not in known_states:
                report('UnknownState', f"moves of player '{player}' mention undeclared state '{state}'",
                       player=player, state=state)

    alternatives: Dict[Tuple[str, str], Tuple[str, ...]] = {}
    for player in players:
        per_state = description.moves.get(player, {})
        for state in states:
            moves = list(per_state.get(state, ()))
            if not moves:
                report('EmptyAlternatives', f"player '{player}' has no move at state '{state}'",
                       player=player, state=state)
            for move in moves:
                if not _valid_move_token(move):
                    report('InvalidMove', f"move {move!r} of player '{player}' at state '{state}' "
                                          f"must be a nonempty token without whitespace",
                           player=player, state=state)
            for move in sorted(m for m, count in Counter(moves).items() if count > 1):
                report('DuplicateMove', f"move '{move}' is listed twice for player '{player}' at state '{state}'",
                       player=player, state=state)
            alternatives[(player, state)] = tuple(dict.fromkeys(moves))

    seen = {}
    for source, vector, target in description.transitions:
        vector = tuple(vector)
        if source not in known_states:
            report('UnknownState', f"transition from undeclared state '{source}'", state=source, vector=vector)
            continue
        if target not in known_states:
            report('UnknownState', f"transition to undeclared state '{target}'", state=source, vector=vector)
            continue
        if len(vector) != len(players):
            report('VectorArity', f"move vector <{', '.join(vector)}> at state '{source}' has {len(vector)} "
                                  f"moves, expected {len(players)}", state=source, vector=vector)
            continue
        bad = [(player, move) for player, move in zip(players, vector)
               if move not in alternatives.get((player, source), ())]
        if bad:
            for player, move in bad:
                report('UnknownMove', f"move '{move}' is not available to player '{player}' at state '{source}'",
                       player=player, state=source, vector=vector)
            continue
        if (source, vector) in seen:
            report('DuplicateTransition', f"more than one transition for <{', '.join(vector)}> at state '{source}'",
                   state=source, vector=vector)
            continue
        seen[(source, vector)] = target

    if players:
        for state in states:
            if not all(alternatives.get((p, state)) for p in players):
                continue
            for vector in itertools.product(*(alternatives[(p, state)] for p in players)):
                if (state, vector) not in seen:
                    report('MissingTransition', f"no transition for <{', '.join(vector)}> at state '{state}'",
                           state=state, vector=vector)

    return diagnostics


def validate(description: StructureDescription) -> GameStructure:
    """
    Build an immutable GameStructure from a description.

    Args:
        description: name-based structure description

    Returns:
        The validated structure

    Raises:
        StructureError: with every diagnostic when the description is not well formed
    """
    diagnostics = diagnose(description)
    if diagnostics:
        logger.info(f"Structure rejected with {len(diagnostics)} diagnostic(s)")
        raise StructureError(diagnostics)

    players = tuple(Player(i, name) for i, name in enumerate(description.players))
    states = tuple(State(i, name) for i, (name, _) in enumerate(description.states))
    state_ids = {s.name: s.id for s in states}

    alternatives = tuple(
        tuple(tuple(dict.fromkeys(description.moves[p.name][s.name])) for s in states)
        for p in players
    )
    transitions = {
        (state_ids[source], tuple(vector)): state_ids[target]
        for source, vector, target in description.transitions
    }

    structure = GameStructure(
        players=players,
        states=states,
        propositions=tuple(description.propositions),
        labeling=tuple(frozenset(labels) for _, labels in description.states),
        alternatives=alternatives,
        transitions=transitions,
    )
    logger.info(
        f"Validated structure: {structure.num_players} player(s), {structure.num_states} state(s), "
        f"{len(transitions)} transition(s)"
    )
    return structure
