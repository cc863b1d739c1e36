"""
Model documents, formula arguments and result serialization.

Model schema v1 (JSON, UTF-8):

    {
      "version": 1,
      "players": ["1", "2"],
      "propositions": ["x", "y"],
      "states": [{"name": "q0", "labels": []}, ...],
      "moves": {"1": {"q0": ["L", "C"], ...}, ...},
      "transitions": [{"from": "q0", "vector": ["C", "L"], "to": "q1"}, ...]
    }
"""

import json
from pathlib import Path
from typing import Dict, List, Literal, Optional, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .cgs import GameStructure, StructureDescription, validate
from .engine import CheckResult
from .errors import ATLError, ModelParseError, SchemaError
from .formula import format_formula
from .utils.logger import setup_logger

logger = setup_logger('io')

MODEL_VERSION = 1

D = TypeVar('D', bound=BaseModel)


class StateEntry(BaseModel):
    model_config = ConfigDict(extra='forbid')

    name: str
    labels: List[str] = Field(default_factory=list)


class TransitionEntry(BaseModel):
    model_config = ConfigDict(extra='forbid', populate_by_name=True)

    source: str = Field(alias='from')
    vector: List[str]
    to: str


class ModelDocument(BaseModel):
    model_config = ConfigDict(extra='forbid')

    version: Literal[1] = MODEL_VERSION
    players: List[str]
    propositions: List[str] = Field(default_factory=list)
    states: List[StateEntry]
    moves: Dict[str, Dict[str, List[str]]]
    transitions: List[TransitionEntry]

    def to_description(self) -> StructureDescription:
        return StructureDescription(
            players=list(self.players),
            propositions=list(self.propositions),
            states=[(s.name, list(s.labels)) for s in self.states],
            moves={player: {state: list(moves) for state, moves in per_state.items()}
                   for player, per_state in self.moves.items()},
            transitions=[(t.source, list(t.vector), t.to) for t in self.transitions],
        )

    @classmethod
    def from_structure(cls, structure: GameStructure) -> 'ModelDocument':
        return cls(
            players=[p.name for p in structure.players],
            propositions=list(structure.propositions),
            states=[StateEntry(name=s.name, labels=sorted(structure.labeling[s.id]))
                    for s in structure.states],
            moves={p.name: {s.name: list(structure.alternatives[p.id][s.id]) for s in structure.states}
                   for p in structure.players},
            transitions=[
                TransitionEntry(source=structure.states[q].name, vector=list(mv),
                                to=structure.states[target].name)
                for (q, mv), target in sorted(structure.transitions.items())
            ],
        )


class ResultStats(BaseModel):
    iterations: int
    max_iterations: int
    pre_calls: int
    milliseconds: float


class TraceEntry(BaseModel):
    node: int
    formula: str
    satisfying: List[str]


class ResultDocument(BaseModel):
    formula: str
    backend: str
    satisfying: List[str]
    stats: ResultStats
    trace: Optional[List[TraceEntry]] = None


def _schema_path(loc) -> str:
    return '/' + '/'.join(str(part) for part in loc)


def parse_document(data: Union[bytes, str, dict], document_type: Type[D]) -> D:
    """
    Decode JSON and schema-check it against a pydantic document type.

    Raises:
        ModelParseError: the text is not JSON
        SchemaError: the JSON does not match document_type
    """
    if isinstance(data, (bytes, str)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise ModelParseError(f"document is not valid JSON: {e.msg}",
                                  location=f"line {e.lineno} column {e.colno}") from None
        except UnicodeDecodeError as e:
            raise ModelParseError(f"document is not UTF-8: {e.reason}", location=f"byte {e.start}") from None

    try:
        return document_type.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        path = _schema_path(first['loc'])
        raise SchemaError(f"{path}: {first['msg']}", path) from None


def parse_model_document(data: Union[bytes, str, dict]) -> ModelDocument:
    return parse_document(data, ModelDocument)


def load_model(data: Union[bytes, str, dict]) -> GameStructure:
    """Decode a model document and validate it into a GameStructure."""
    document = parse_model_document(data)
    return validate(document.to_description())


def load_model_file(path) -> GameStructure:
    path = Path(path)
    logger.info(f"Loading model from {path}")
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ModelParseError(f"cannot read model file: {e.strerror}", location=str(path)) from None
    return load_model(data)


def dump_json(payload) -> bytes:
    return (json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + '\n').encode('utf-8')


def dump_model(structure: GameStructure) -> bytes:
    """Canonical model document for a structure."""
    document = ModelDocument.from_structure(structure)
    return dump_json(document.model_dump(by_alias=True))


def load_formula(argument: str) -> str:
    """Formula text given inline, or read from a file when written as @path."""
    if not argument.startswith('@'):
        return argument
    path = Path(argument[1:])
    try:
        return path.read_text(encoding='utf-8').strip()
    except OSError as e:
        raise ModelParseError(f"cannot read formula file: {e.strerror}", location=str(path)) from None


def result_document(result: CheckResult, structure: GameStructure) -> ResultDocument:
    trace = None
    if result.trace is not None:
        trace = [
            TraceEntry(node=attr.index, formula=format_formula(attr.formula),
                       satisfying=structure.state_names(attr.satisfying))
            for attr in result.trace
        ]
    return ResultDocument(
        formula=format_formula(result.formula),
        backend=result.backend,
        satisfying=structure.state_names(result.satisfying),
        stats=ResultStats(
            iterations=result.stats.iterations,
            max_iterations=result.stats.max_iterations,
            pre_calls=result.stats.pre_calls,
            milliseconds=round(result.stats.elapsed_ms, 3),
        ),
        trace=trace,
    )


def dump_result(result: CheckResult, structure: GameStructure) -> bytes:
    """Deterministic JSON bytes: sorted keys, states ascending by id."""
    return dump_json(result_document(result, structure).model_dump(exclude_none=True))


def dump_error(error: ATLError) -> bytes:
    return dump_json({'error': error.to_dict()})
