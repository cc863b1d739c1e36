"""
ATL model checking engine.

A formula is evaluated post-order: every AST node gets exactly one attribute,
its satisfaction set, computed from the attributes of its children. Temporal
nodes use the fixpoint loops over Pre(A, .) below.
"""

import time
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from .cgs import Coalition, GameStructure, SatSet, states_labeled
from .config import DEFAULT_BACKEND, STRICT_PROPOSITIONS
from .errors import UnknownProposition
from .formula import (
    Always,
    And,
    Atom,
    Eventually,
    FalseLit,
    Formula,
    Imply,
    Next,
    Not,
    Or,
    TrueLit,
    Until,
    children,
    format_formula,
    parse,
)
from .pre import RelationCache, make_backend
from .utils.logger import setup_logger

logger = setup_logger('engine')


@dataclass
class CheckStats:
    """Counters collected while checking one formula."""
    pre_calls: int = 0
    # iteration count of every fixpoint loop, in evaluation order
    fixpoints: List[int] = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def iterations(self):
        return sum(self.fixpoints)

    @property
    def max_iterations(self):
        return max(self.fixpoints, default=0)


@dataclass(frozen=True)
class NodeAttribute:
    """Synthesized attribute of one AST node; index is the post-order position."""
    index: int
    formula: Formula
    satisfying: SatSet


@dataclass(frozen=True)
class CheckResult:
    satisfying: SatSet
    formula: Formula
    backend: str
    stats: CheckStats
    trace: Optional[Tuple[NodeAttribute, ...]] = None


def _record_fixpoint(stats, operator, iterations):
    if stats is not None:
        stats.fixpoints.append(iterations)
    logger.debug(f"{operator} fixpoint stabilised after {iterations} iteration(s)")


class ModelChecker:
    """
    Evaluates ATL formulas over one game structure with one Pre backend.

    Counters live in a CheckStats created per check() call, so one checker
    can serve concurrent checks.
    """

    def __init__(self, structure: GameStructure, backend: str = DEFAULT_BACKEND,
                 strict_atoms: bool = STRICT_PROPOSITIONS, cache: Optional[RelationCache] = None):
        self.structure = structure
        self.backend_name = backend
        self.strict_atoms = strict_atoms
        self._pre = make_backend(backend, structure, cache)

    # Pre and the derived temporal operations

    def pre(self, coalition: Coalition, theta: SatSet, stats: Optional[CheckStats] = None) -> SatSet:
        if stats is not None:
            stats.pre_calls += 1
        return self._pre(coalition, theta)

    def eval_next(self, coalition: Coalition, phi: SatSet, stats: Optional[CheckStats] = None) -> SatSet:
        return self.pre(coalition, frozenset(phi), stats)

    def eval_always(self, coalition: Coalition, phi: SatSet, stats: Optional[CheckStats] = None) -> SatSet:
        """Greatest fixpoint of Z = phi & Pre(A, Z)."""
        phi = frozenset(phi)
        z = self.structure.all_states
        z1 = phi
        iterations = 0
        while not z <= z1:
            iterations += 1
            z = z1
            z1 = self.pre(coalition, z, stats) & phi
        _record_fixpoint(stats, 'always', iterations)
        return z

    def eval_eventually(self, coalition: Coalition, phi: SatSet, stats: Optional[CheckStats] = None) -> SatSet:
        """Least fixpoint of Z = phi | Pre(A, Z)."""
        z = frozenset()
        z1 = frozenset(phi)
        iterations = 0
        while not z1 <= z:
            iterations += 1
            z = z | z1
            z1 = self.pre(coalition, z, stats)
        _record_fixpoint(stats, 'eventually', iterations)
        return z

    def eval_until(self, coalition: Coalition, phi1: SatSet, phi2: SatSet,
                   stats: Optional[CheckStats] = None) -> SatSet:
        """Least fixpoint of Z = phi2 | (phi1 & Pre(A, Z))."""
        phi1 = frozenset(phi1)
        z = frozenset()
        z1 = frozenset(phi2)
        iterations = 0
        while not z1 <= z:
            iterations += 1
            z = z | z1
            z1 = self.pre(coalition, z, stats) & phi1
        _record_fixpoint(stats, 'until', iterations)
        return z

    # Formula evaluation

    def check(self, formula, trace: bool = False) -> CheckResult:
        """
        Compute the set of states satisfying a formula.

        Args:
            formula: Formula AST or formula text
            trace: keep the attribute of every node

        Returns:
            CheckResult with the satisfying set of the root node
        """
        if isinstance(formula, str):
            formula = parse(formula)

        stats = CheckStats()
        started = time.perf_counter()
        table: Optional[List[NodeAttribute]] = [] if trace else None

        satisfying = self._evaluate(formula, table, stats)

        stats.elapsed_ms = (time.perf_counter() - started) * 1000.0
        logger.info(
            f"Checked {format_formula(formula)} with {self.backend_name} backend: "
            f"{len(satisfying)}/{self.structure.num_states} state(s), {stats.pre_calls} Pre call(s), "
            f"{stats.elapsed_ms:.1f} ms"
        )
        return CheckResult(
            satisfying=satisfying,
            formula=formula,
            backend=self.backend_name,
            stats=stats,
            trace=tuple(table) if table is not None else None,
        )

    def _evaluate(self, root: Formula, table: Optional[List[NodeAttribute]], stats: CheckStats) -> SatSet:
        # Iterative post-order walk; nesting may exceed the recursion limit
        values: List[SatSet] = []
        stack = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            kids = children(node)
            if not expanded:
                stack.append((node, True))
                stack.extend((child, False) for child in reversed(kids))
                continue
            args = values[len(values) - len(kids):] if kids else []
            if kids:
                del values[len(values) - len(kids):]
            result = self._apply(node, args, stats)
            values.append(result)
            if table is not None:
                table.append(NodeAttribute(len(table), node, result))
        return values[0]

    def _apply(self, node: Formula, args: Sequence[SatSet], stats: CheckStats) -> SatSet:
        everything = self.structure.all_states
        if isinstance(node, TrueLit):
            return everything
        if isinstance(node, FalseLit):
            return frozenset()
        if isinstance(node, Atom):
            return self._atom(node.name)
        if isinstance(node, Not):
            return everything - args[0]
        if isinstance(node, And):
            return args[0] & args[1]
        if isinstance(node, Or):
            return args[0] | args[1]
        if isinstance(node, Imply):
            return (everything - args[0]) | args[1]

        coalition = self.structure.coalition(node.coalition)
        if isinstance(node, Next):
            return self.eval_next(coalition, args[0], stats)
        if isinstance(node, Always):
            return self.eval_always(coalition, args[0], stats)
        if isinstance(node, Eventually):
            return self.eval_eventually(coalition, args[0], stats)
        if isinstance(node, Until):
            return self.eval_until(coalition, args[0], args[1], stats)
        raise TypeError(f"not a formula node: {node!r}")

    def _atom(self, name) -> SatSet:
        try:
            return states_labeled(self.structure, name)
        except UnknownProposition:
            if self.strict_atoms:
                raise
            logger.warning(f"Proposition '{name}' is not declared by the model; treating it as false")
            return frozenset()


def check(structure: GameStructure, formula, backend: str = DEFAULT_BACKEND, trace: bool = False,
          strict_atoms: bool = STRICT_PROPOSITIONS) -> CheckResult:
    """Check a formula (AST or text) against a structure."""
    return ModelChecker(structure, backend=backend, strict_atoms=strict_atoms).check(formula, trace=trace)


def eval_next(structure: GameStructure, coalition: Iterable[int], phi: Iterable[int],
              backend: str = DEFAULT_BACKEND) -> SatSet:
    return ModelChecker(structure, backend).eval_next(frozenset(coalition), frozenset(phi))


def eval_always(structure: GameStructure, coalition: Iterable[int], phi: Iterable[int],
                backend: str = DEFAULT_BACKEND) -> SatSet:
    return ModelChecker(structure, backend).eval_always(frozenset(coalition), frozenset(phi))


def eval_eventually(structure: GameStructure, coalition: Iterable[int], phi: Iterable[int],
                    backend: str = DEFAULT_BACKEND) -> SatSet:
    return ModelChecker(structure, backend).eval_eventually(frozenset(coalition), frozenset(phi))


def eval_until(structure: GameStructure, coalition: Iterable[int], phi1: Iterable[int], phi2: Iterable[int],
               backend: str = DEFAULT_BACKEND) -> SatSet:
    return ModelChecker(structure, backend).eval_until(frozenset(coalition), frozenset(phi1), frozenset(phi2))
