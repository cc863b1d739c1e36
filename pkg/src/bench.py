"""
Benchmark harness: time formula checks over generated structures.

Generator specs:

    ttt:plies=4,3,2,1,0[,first=1]
        Tic-Tac-Toe structures rooted at the boards reached after the given
        numbers of plies of the fixed opening 0, 1, 2, 3 (players alternate).
    random:states=100,players=2,moves=3,count=3,seed=7
        count random structures drawn from one seeded generator.
"""

import csv
import hashlib
import random
import statistics
from dataclasses import asdict, dataclass, fields
from typing import Dict, Iterator, List, Sequence, Tuple

from .cgs import GameStructure
from .config import BACKENDS, BENCH_REPETITIONS
from .engine import ModelChecker
from .errors import InvalidGeneratorSpec
from .formula import format_formula, parse
from .generators import random_structure
from .pre import RelationCache
from .ttt import Board, generate_structure
from .utils.logger import setup_logger

logger = setup_logger('bench')

OPENING = (0, 1, 2, 3)

DEFAULT_FORMULAS = {
    'ttt': ('<<1>>~ 111',),
    'random': ('<<1>>~ p',),
}

_RANDOM_DEFAULTS = {'states': 100, 'players': 2, 'moves': 3, 'count': 1, 'seed': 0}


@dataclass(frozen=True)
class BenchRow:
    generator: str
    states: int
    formula: str
    backend: str
    milliseconds: float
    iterations: int
    satisfying: int
    digest: str


CSV_COLUMNS = tuple(f.name for f in fields(BenchRow))


def satisfying_digest(structure: GameStructure, satisfying) -> str:
    """Short sha256 of the satisfying state names in id order; equal digests mean equal sets."""
    names = '\n'.join(structure.state_names(satisfying))
    return hashlib.sha256(names.encode('utf-8')).hexdigest()[:16]


def _int(value, key, spec):
    try:
        return int(value)
    except ValueError:
        raise InvalidGeneratorSpec(f"'{key}' must be an integer in generator spec '{spec}'") from None


def parse_generator_spec(spec: str) -> Tuple[str, Dict[str, object]]:
    """
    Split a generator spec into its kind and parameters.

    Raises:
        InvalidGeneratorSpec: unknown kind, unknown key or a bad value
    """
    kind, _, rest = spec.partition(':')
    kind = kind.strip()
    if kind not in DEFAULT_FORMULAS:
        raise InvalidGeneratorSpec(f"unknown generator '{kind}' (choose from ttt, random)")

    params: Dict[str, object] = {}
    key = None
    for part in filter(None, (p.strip() for p in rest.split(','))):
        if '=' in part:
            key, _, value = part.partition('=')
            key = key.strip()
            value = value.strip()
        elif key == 'plies':
            value = part
        else:
            raise InvalidGeneratorSpec(f"expected key=value in generator spec '{spec}', got '{part}'")

        if kind == 'ttt' and key == 'plies':
            params.setdefault('plies', []).append(_int(value, key, spec))
        elif kind == 'ttt' and key == 'first':
            params['first'] = _int(value, key, spec)
        elif kind == 'random' and key in _RANDOM_DEFAULTS:
            params[key] = _int(value, key, spec)
        else:
            raise InvalidGeneratorSpec(f"unknown parameter '{key}' for generator '{kind}'")

    if kind == 'ttt':
        plies = params.setdefault('plies', [0])
        if any(not 0 <= p <= len(OPENING) for p in plies):
            raise InvalidGeneratorSpec(f"plies must be between 0 and {len(OPENING)}")
        if params.setdefault('first', 1) not in (1, 2):
            raise InvalidGeneratorSpec("first must be 1 or 2")
    else:
        for key, default in _RANDOM_DEFAULTS.items():
            params.setdefault(key, default)
        if min(params['states'], params['players'], params['moves'], params['count']) < 1:
            raise InvalidGeneratorSpec("states, players, moves and count must be positive")
    return kind, params


def opening_board(plies: int, first_mover: int = 1) -> Board:
    board = Board.empty(first_mover)
    for cell in OPENING[:plies]:
        board = board.play(cell)
    return board


def generate(spec: str) -> Iterator[Tuple[str, GameStructure]]:
    """Yield (label, structure) for every structure a generator spec describes."""
    kind, params = parse_generator_spec(spec)
    if kind == 'ttt':
        for plies in params['plies']:
            root = opening_board(plies, params['first'])
            yield f"ttt:plies={plies}", generate_structure(root)
    else:
        rng = random.Random(params['seed'])
        for i in range(params['count']):
            structure = random_structure(params['states'], params['players'], params['moves'], rng=rng)
            yield f"random:seed={params['seed']}#{i}", structure


def run_bench(generator: str, formulas: Sequence[str] = (), repetitions: int = BENCH_REPETITIONS,
              backends: Sequence[str] = BACKENDS) -> List[BenchRow]:
    """
    Time every (structure, formula, backend) combination.

    Args:
        generator: generator spec
        formulas: formula texts (defaults depend on the generator kind)
        repetitions: timed runs per combination; the median is reported
        backends: Pre backends to compare

    Returns:
        Rows in generator, formula, backend order
    """
    if repetitions <= 0:
        raise InvalidGeneratorSpec(f"repetitions must be positive (got {repetitions})")
    unknown = [b for b in backends if b not in BACKENDS]
    if unknown:
        raise InvalidGeneratorSpec(f"unknown backend(s): {', '.join(unknown)}")

    kind, _ = parse_generator_spec(generator)
    parsed = [parse(text) for text in (formulas or DEFAULT_FORMULAS[kind])]

    rows = []
    for label, structure in generate(generator):
        for formula in parsed:
            for backend in backends:
                timings = []
                result = None
                for _ in range(repetitions):
                    # Fresh cache per run: relation construction is part of the timing
                    checker = ModelChecker(structure, backend, cache=RelationCache())
                    result = checker.check(formula)
                    timings.append(result.stats.elapsed_ms)
                row = BenchRow(
                    generator=label,
                    states=structure.num_states,
                    formula=format_formula(formula),
                    backend=backend,
                    milliseconds=round(statistics.median(timings), 3),
                    iterations=result.stats.iterations,
                    satisfying=len(result.satisfying),
                    digest=satisfying_digest(structure, result.satisfying),
                )
                logger.info(f"{label} {backend}: {row.milliseconds} ms over {row.states} states")
                rows.append(row)
    return rows


def write_csv(rows: Sequence[BenchRow], stream) -> None:
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow(asdict(row))
