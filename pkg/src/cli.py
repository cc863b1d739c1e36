"""
Command-line operations behind main.py.

Exit codes: 0 success, 2 user errors (bad model, formula, board or generator
spec), 1 internal errors. In check mode stdout carries only the result
document; messages and errors go to stderr.
"""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import requests

from .bench import run_bench as bench_rows
from .bench import write_csv
from .cgs import is_turn_based
from .client import CheckerClient
from .config import (
    BACKENDS,
    BENCH_REPETITIONS,
    DEFAULT_BACKEND,
    SERVICE_HOST,
    SERVICE_PORT,
    SERVICE_URL,
    STRICT_PROPOSITIONS,
)
from .engine import ModelChecker
from .errors import ATLError, StructureError
from .model_io import dump_error, dump_result, load_formula, load_model_file
from .ttt import Board, play_interactive, synthesize_move
from .utils.logger import set_verbosity, setup_logger

logger = setup_logger('cli')

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USER_ERROR = 2

PLAYERS_BY_NAME = {'computer': 1, 'user': 2, '1': 1, '2': 2}


def render_error(error: ATLError, source: Optional[str] = None) -> str:
    """error: <kind>: <message> [at <location>], one extra line per diagnostic."""
    if source and error.location and source in error.location:
        source = None
    where = ' '.join(part for part in (source, error.location) if part)
    lines = [f"error: {error.kind}: {error.message}" + (f" at {where}" if where else '')]
    if isinstance(error, StructureError):
        for diagnostic in error.diagnostics:
            lines.append(f"  {diagnostic.code}: {diagnostic.message}")
    return '\n'.join(lines)


def _report(error: ATLError, json_errors: bool, source: Optional[str] = None) -> int:
    if json_errors:
        sys.stderr.write(dump_error(error).decode('utf-8'))
    else:
        sys.stderr.write(render_error(error, source) + '\n')
    return EXIT_USER_ERROR


def _internal(error: Exception) -> int:
    logger.error(f"❌ Internal error: {error}", exc_info=True)
    sys.stderr.write(f"error: internal error: {error}\n")
    return EXIT_INTERNAL


def _emit(data: bytes, output: Optional[str]) -> None:
    if output:
        Path(output).write_bytes(data)
    else:
        sys.stdout.write(data.decode('utf-8'))
        sys.stdout.flush()


def run_check(model_path: str, formula: str, backend: str = DEFAULT_BACKEND, trace: bool = False,
              output: Optional[str] = None, strict_atoms: bool = STRICT_PROPOSITIONS,
              json_errors: bool = False) -> int:
    """
    Load a model, check one formula and print the result document.

    Args:
        model_path: model document path
        formula: formula text, or @path to read it from a file
        backend: Pre backend
        trace: include the per-node attribute table
        output: write the document here instead of stdout
        strict_atoms: undeclared propositions are errors
        json_errors: report errors as JSON documents on stderr

    Returns:
        Exit code
    """
    source = model_path
    try:
        structure = load_model_file(model_path)
        source = None
        text = load_formula(formula)
        checker = ModelChecker(structure, backend, strict_atoms=strict_atoms)
        result = checker.check(text, trace=trace)
        _emit(dump_result(result, structure), output)
    except ATLError as e:
        return _report(e, json_errors, source)
    except Exception as e:
        return _internal(e)
    return EXIT_OK


def run_validate(model_path: str, json_errors: bool = False) -> int:
    """Validate a model and print a short summary."""
    try:
        structure = load_model_file(model_path)
    except ATLError as e:
        return _report(e, json_errors, model_path)
    except Exception as e:
        return _internal(e)

    players = ', '.join(p.name for p in structure.players)
    summary = [
        f"model: {model_path}",
        f"players: {structure.num_players} ({players})",
        f"states: {structure.num_states}",
        f"propositions: {len(structure.propositions)}",
        f"transitions: {len(structure.transitions)}",
        f"turn-based: {'yes' if is_turn_based(structure) else 'no'}",
        f"fingerprint: {structure.fingerprint}",
    ]
    sys.stdout.write('\n'.join(summary) + '\n')
    return EXIT_OK


def run_bench(generator: str, formulas: Sequence[str] = (), repetitions: int = BENCH_REPETITIONS,
              backends: Sequence[str] = BACKENDS, output: Optional[str] = None) -> int:
    """Run the benchmark and write its CSV."""
    try:
        rows = bench_rows(generator, [load_formula(f) for f in formulas], repetitions, backends)
    except ATLError as e:
        return _report(e, False)
    except Exception as e:
        return _internal(e)

    if output:
        with open(output, 'w', encoding='utf-8', newline='') as stream:
            write_csv(rows, stream)
    else:
        write_csv(rows, sys.stdout)
    return EXIT_OK


def run_synthesize(board: str, turn: int, first_mover: int, backend: str = DEFAULT_BACKEND) -> int:
    """Print the computer's move for one Tic-Tac-Toe position."""
    try:
        position = Board.from_string(board, turn, first_mover)
        choice = synthesize_move(position, backend=backend)
    except ATLError as e:
        return _report(e, False)
    except Exception as e:
        return _internal(e)
    sys.stdout.write(f"cell {choice.cell} (tier {int(choice.tier)}: {choice.tier.label})\n")
    return EXIT_OK


def run_play(first: str, backend: str = DEFAULT_BACKEND) -> int:
    try:
        transcript = play_interactive(PLAYERS_BY_NAME[first], backend=backend)
    except KeyboardInterrupt:
        sys.stdout.write('\n')
        return EXIT_OK
    except ATLError as e:
        return _report(e, False)
    return EXIT_OK if transcript.outcome else EXIT_INTERNAL


def run_submit(url: str, model_path: str, formula: str, backend: Optional[str] = None) -> int:
    """Forward a check to a running service; 0 on 200, 2 on 4xx, 1 otherwise."""
    try:
        model = Path(model_path).read_bytes()
    except OSError as e:
        sys.stderr.write(f"error: cannot read model file {model_path}: {e.strerror}\n")
        return EXIT_USER_ERROR

    try:
        response = CheckerClient(url).submit(model, load_formula(formula), backend)
    except ATLError as e:
        return _report(e, False, model_path)
    except requests.RequestException as e:
        sys.stderr.write(f"error: cannot reach {url}: {e}\n")
        return EXIT_INTERNAL

    if response.ok:
        sys.stdout.write(response.body.decode('utf-8'))
        return EXIT_OK
    sys.stderr.write(response.body.decode('utf-8', errors='replace'))
    return EXIT_USER_ERROR if 400 <= response.status_code < 500 else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='main.py',
        description='ATL model checker',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py validate --model models/two_process.json
  python main.py check --model models/two_process.json --formula "<<1>>@ (x and y)"
  python main.py ttt synthesize --board 120000000 --turn 1 --first 1
  python main.py ttt play --first user
  python main.py bench --generator ttt:plies=4,3,2,1,0 --output bench.csv
  python main.py serve --port 8080
        """
    )
    parser.add_argument('-v', '--verbose', action='store_true', help='Log everything at DEBUG level')
    commands = parser.add_subparsers(dest='command', required=True)

    validate = commands.add_parser('validate', help='Validate a model document')
    validate.add_argument('--model', required=True, help='Model document (JSON)')
    validate.add_argument('--json-errors', action='store_true', help='Report errors as JSON')

    check = commands.add_parser('check', help='Check a formula against a model')
    check.add_argument('--model', required=True, help='Model document (JSON)')
    check.add_argument('--formula', required=True, help='Formula text, or @path to a formula file')
    check.add_argument('--backend', choices=BACKENDS, default=DEFAULT_BACKEND, help='Pre implementation')
    check.add_argument('--trace', action='store_true', help='Include every subformula\'s satisfying set')
    check.add_argument('--output', help='Write the result here instead of stdout')
    check.add_argument('--lenient-atoms', action='store_true',
                       help='Treat undeclared propositions as false instead of failing')
    check.add_argument('--json-errors', action='store_true', help='Report errors as JSON')

    ttt = commands.add_parser('ttt', help='Tic-Tac-Toe demo')
    ttt_commands = ttt.add_subparsers(dest='ttt_command', required=True)
    play = ttt_commands.add_parser('play', help='Play against the synthesized strategy')
    play.add_argument('--first', choices=('user', 'computer'), default='user', help='Who moves first')
    play.add_argument('--backend', choices=BACKENDS, default=DEFAULT_BACKEND)
    synthesize = ttt_commands.add_parser('synthesize', help="Print the computer's move for a board")
    synthesize.add_argument('--board', required=True, help='9 characters of 0/1/2, cells 0-8')
    synthesize.add_argument('--turn', type=int, choices=(1, 2), required=True)
    synthesize.add_argument('--first', type=int, choices=(1, 2), required=True)
    synthesize.add_argument('--backend', choices=BACKENDS, default=DEFAULT_BACKEND)

    bench = commands.add_parser('bench', help='Time formula checks over generated structures')
    bench.add_argument('--generator', required=True,
                       help='ttt:plies=4,3,2,1,0 or random:states=100,players=2,moves=3,count=3,seed=7')
    bench.add_argument('--formula', action='append', default=[], help='Formula to time (repeatable)')
    bench.add_argument('--repetitions', type=int, default=BENCH_REPETITIONS)
    bench.add_argument('--backend', action='append', choices=BACKENDS,
                       help='Backend to time (repeatable, default both)')
    bench.add_argument('--output', help='CSV path (default stdout)')

    serve = commands.add_parser('serve', help='Run the HTTP service')
    serve.add_argument('--host', default=SERVICE_HOST)
    serve.add_argument('--port', type=int, default=SERVICE_PORT)

    submit = commands.add_parser('submit', help='Send a check to a running service')
    submit.add_argument('--url', default=SERVICE_URL)
    submit.add_argument('--model', required=True, help='Model document (JSON)')
    submit.add_argument('--formula', required=True, help='Formula text, or @path to a formula file')
    submit.add_argument('--backend', choices=BACKENDS)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments and run one subcommand; returns the exit code."""
    args = build_parser().parse_args(argv)
    if args.verbose:
        set_verbosity('DEBUG')

    if args.command == 'validate':
        return run_validate(args.model, args.json_errors)
    if args.command == 'check':
        return run_check(args.model, args.formula, args.backend, args.trace, args.output,
                         strict_atoms=STRICT_PROPOSITIONS and not args.lenient_atoms,
                         json_errors=args.json_errors)
    if args.command == 'ttt':
        if args.ttt_command == 'play':
            return run_play(args.first, args.backend)
        return run_synthesize(args.board, args.turn, args.first, args.backend)
    if args.command == 'bench':
        return run_bench(args.generator, args.formula, args.repetitions,
                         tuple(args.backend) if args.backend else BACKENDS, args.output)
    if args.command == 'serve':
        from .service import serve

        serve(args.host, args.port)
        return EXIT_OK
    if args.command == 'submit':
        return run_submit(args.url, args.model, args.formula, args.backend)
    return EXIT_INTERNAL
