"""
Random concurrent game structures, for benchmarks and randomized tests.
"""

import itertools
import random
from typing import Optional, Sequence

from .cgs import GameStructure, StructureDescription, validate
from .utils.logger import setup_logger

logger = setup_logger('generators')

DEFAULT_PROPOSITIONS = ('p', 'q', 'r')


def random_description(n_states: int, n_players: int, max_moves: int,
                       propositions: Sequence[str] = DEFAULT_PROPOSITIONS,
                       rng: Optional[random.Random] = None) -> StructureDescription:
    """
    A well-formed description with random labels, alternatives and transitions.

    Each player gets between 1 and max_moves alternatives at each state; the
    transition function is total on the full product of alternatives.
    """
    if n_states < 1 or n_players < 1 or max_moves < 1:
        raise ValueError("states, players and moves must all be at least 1")
    rng = rng or random.Random()

    players = [str(i + 1) for i in range(n_players)]
    states = [f"s{i}" for i in range(n_states)]
    move_pool = [chr(ord('a') + i) for i in range(max_moves)]

    labelled = [(name, sorted(p for p in propositions if rng.random() < 0.5)) for name in states]
    moves = {
        player: {state: move_pool[:rng.randint(1, max_moves)] for state in states}
        for player in players
    }
    transitions = []
    for state in states:
        for vector in itertools.product(*(moves[player][state] for player in players)):
            transitions.append((state, list(vector), rng.choice(states)))

    return StructureDescription(
        players=players,
        propositions=list(propositions),
        states=labelled,
        moves=moves,
        transitions=transitions,
    )


def random_structure(n_states: int, n_players: int, max_moves: int,
                     propositions: Sequence[str] = DEFAULT_PROPOSITIONS,
                     seed: Optional[int] = None, rng: Optional[random.Random] = None) -> GameStructure:
    """
    Random validated structure.

    Args:
        n_states: number of states
        n_players: number of players
        max_moves: upper bound on the alternatives of a player at a state
        propositions: proposition names, each labelling a state with probability 1/2
        seed: seed for a fresh generator (ignored when rng is given)
        rng: generator to draw from

    Returns:
        GameStructure
    """
    if rng is None:
        rng = random.Random(seed)
    structure = validate(random_description(n_states, n_players, max_moves, propositions, rng))
    logger.debug(f"Random structure {structure.fingerprint[:12]}: {n_states} states, {n_players} players")
    return structure
