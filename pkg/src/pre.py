"""
Pre(A, Theta): the states from which coalition A can force the next state into Theta.

Two independent backends:
  - direct: enumerate the coalition's joint moves at each state and check every
    completion by the remaining players;
  - relational: an in-memory version of the SQL query plan over the table
    model(B, E, LABEL) - two filtered distinct projections and a left anti-join
    on (B, LABEL).
"""

import itertools
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import FrozenSet, Tuple

from .cgs import Move, edges
from .config import RELATION_CACHE_SIZE
from .errors import FingerprintMismatch, UnknownState
from .utils.logger import setup_logger

logger = setup_logger('pre')

CoalitionLabel = Tuple[Move, ...]
Row = Tuple[int, int, CoalitionLabel]


def _check_theta(structure, theta):
    theta = frozenset(theta)
    bad = [q for q in theta if not (isinstance(q, int) and 0 <= q < structure.num_states)]
    if bad:
        raise UnknownState(f"state id(s) {sorted(bad, key=repr)} are not states of the structure")
    return theta


def _members(coalition):
    """Coalition members in ascending player id order, the canonical label order."""
    return tuple(sorted(set(coalition)))


def pre_direct(structure, coalition, theta):
    """
    Pre by quantifier enumeration: exists a joint move of the coalition such that
    every completion by the other players lands in theta.
    """
    theta = _check_theta(structure, theta)
    members = _members(coalition)
    others = tuple(a for a in range(structure.num_players) if a not in members)
    result = set()

    for q in range(structure.num_states):
        own_choices = itertools.product(*(structure.alternatives[a][q] for a in members))
        for label in own_choices:
            forced = True
            for completion in itertools.product(*(structure.alternatives[b][q] for b in others)):
                vector = [None] * structure.num_players
                for a, move in zip(members, label):
                    vector[a] = move
                for b, move in zip(others, completion):
                    vector[b] = move
                if structure.transitions[(q, tuple(vector))] not in theta:
                    forced = False
                    break
            if forced:
                result.add(q)
                break

    return frozenset(result)


@dataclass(frozen=True)
class CoalitionRelation:
    """The table model(B, E, LABEL) for one coalition, rows distinct."""
    coalition: Tuple[int, ...]
    rows: FrozenSet[Row]
    fingerprint: str

    def __len__(self):
        return len(self.rows)


def build_relation(structure, coalition):
    """
    Project the labels of every edge (b, e) of the structure's multigraph onto the coalition.
    """
    members = _members(coalition)
    for a in members:
        if not 0 <= a < structure.num_players:
            raise ValueError(f"player id {a} is not a player of the structure")

    rows = set()
    for (b, e), vectors in edges(structure).items():
        for mv in vectors:
            rows.add((b, e, tuple(mv[a] for a in members)))

    logger.debug(f"Built relation for coalition {members}: {len(rows)} rows")
    return CoalitionRelation(coalition=members, rows=frozenset(rows), fingerprint=structure.fingerprint)


def pre_relational(relation, theta, structure=None):
    """
    Pre as the relational query:

        X = distinct (B, LABEL) where E in theta
        Y = distinct (B, LABEL) where E not in theta
        result = distinct B of X left-anti-join Y on (B, LABEL)

    Args:
        relation: table built by build_relation
        theta: target states
        structure: when given, the relation must have been built for it

    Raises:
        FingerprintMismatch: relation and structure differ
    """
    if structure is not None:
        if relation.fingerprint != structure.fingerprint:
            raise FingerprintMismatch("relation was built for a different structure")
        theta = _check_theta(structure, theta)
    else:
        theta = frozenset(theta)

    x = {(b, label) for b, e, label in relation.rows if e in theta}
    y = {(b, label) for b, e, label in relation.rows if e not in theta}
    return frozenset(b for b, label in x if (b, label) not in y)


class RelationCache:
    """Thread-safe LRU cache of relations keyed by (structure fingerprint, coalition)."""

    def __init__(self, capacity=RELATION_CACHE_SIZE):
        self.capacity = capacity
        self._entries = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, structure, coalition):
        key = (structure.fingerprint, _members(coalition))
        with self._lock:
            relation = self._entries.get(key)
            if relation is not None:
                self._entries.move_to_end(key)
                self.hits += 1
                return relation
            self.misses += 1

        # Built outside the lock; concurrent misses may build the same relation twice
        relation = build_relation(structure, coalition)
        with self._lock:
            self._entries[key] = relation
            self._entries.move_to_end(key)
            while len(self._entries) > self.capacity:
                self._entries.popitem(last=False)
        return relation

    def clear(self):
        with self._lock:
            self._entries.clear()
            self.hits = 0
            self.misses = 0

    def __len__(self):
        return len(self._entries)


relation_cache = RelationCache()


class DirectPre:
    """Backend calling pre_direct."""

    name = 'direct'

    def __init__(self, structure):
        self.structure = structure

    def __call__(self, coalition, theta):
        return pre_direct(self.structure, coalition, theta)


class RelationalPre:
    """Backend calling pre_relational on cached relations."""

    name = 'relational'

    def __init__(self, structure, cache=None):
        self.structure = structure
        self.cache = relation_cache if cache is None else cache

    def __call__(self, coalition, theta):
        relation = self.cache.get(self.structure, coalition)
        return pre_relational(relation, theta, self.structure)


BACKENDS = {
    DirectPre.name: DirectPre,
    RelationalPre.name: RelationalPre,
}


def make_backend(name, structure, cache=None):
    """Instantiate the Pre backend called name for a structure."""
    if name == RelationalPre.name:
        return RelationalPre(structure, cache)
    if name == DirectPre.name:
        return DirectPre(structure)
    raise ValueError(f"unknown backend '{name}' (choose from {', '.join(sorted(BACKENDS))})")
