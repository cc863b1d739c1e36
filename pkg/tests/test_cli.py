import json

import pytest
import requests

from src import cli
from src.cli import EXIT_INTERNAL, EXIT_OK, EXIT_USER_ERROR, main
from src.client import SubmitResponse


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check(capsys, model_path):
    code, out, err = run(capsys, 'check', '--model', model_path, '--formula', '<<1>>@ (x and y)')
    assert code == EXIT_OK
    document = json.loads(out)
    assert document['satisfying'] == ['q2', 'q3']
    assert document['formula'] == '<<1>>@ ((x) and (y))'


@pytest.mark.parametrize('backend', ['direct', 'relational'])
def test_check_true_is_every_state(capsys, model_path, backend):
    code, out, _ = run(capsys, 'check', '--model', model_path, '--formula', 'true', '--backend', backend)
    assert code == EXIT_OK
    assert json.loads(out)['satisfying'] == ['q0', 'q1', 'q2', 'q3']


def test_syntax_error(capsys, model_path):
    code, out, err = run(capsys, 'check', '--model', model_path, '--formula', '<<1>> U x')
    assert code == EXIT_USER_ERROR
    assert out == ''
    assert err.startswith('error: SyntaxError: ')
    assert 'offset 6' in err


def test_json_errors(capsys, model_path):
    code, _, err = run(capsys, 'check', '--model', model_path, '--formula', 'z', '--json-errors')
    assert code == EXIT_USER_ERROR
    assert json.loads(err)['error']['kind'] == 'UnknownProposition'


def test_lenient_atoms(capsys, model_path):
    code, out, _ = run(capsys, 'check', '--model', model_path, '--formula', 'z or x', '--lenient-atoms')
    assert code == EXIT_OK
    assert json.loads(out)['satisfying'] == ['q1', 'q3']


def test_missing_model(capsys, tmp_path):
    code, _, err = run(capsys, 'check', '--model', str(tmp_path / 'none.json'), '--formula', 'x')
    assert code == EXIT_USER_ERROR
    assert err.startswith('error: ParseError: cannot read model file')


def test_structure_errors_list_every_diagnostic(capsys, tmp_path, model_bytes):
    document = json.loads(model_bytes)
    document['transitions'] = [t for t in document['transitions'] if t['from'] != 'q0']
    path = tmp_path / 'broken.json'
    path.write_text(json.dumps(document), encoding='utf-8')

    code, _, err = run(capsys, 'validate', '--model', str(path))
    assert code == EXIT_USER_ERROR
    lines = err.splitlines()
    assert lines[0].startswith('error: MissingTransition: ')
    assert sum(line.startswith('  MissingTransition: ') for line in lines) == 4


def test_output_and_formula_file(capsys, tmp_path, model_path):
    formula = tmp_path / 'formula.atl'
    formula.write_text('not x\n', encoding='utf-8')
    output = tmp_path / 'result.json'
    code, out, _ = run(capsys, 'check', '--model', model_path, '--formula', f"@{formula}",
                       '--output', str(output), '--trace')
    assert code == EXIT_OK
    assert out == ''
    document = json.loads(output.read_bytes())
    assert document['satisfying'] == ['q0', 'q2']
    assert len(document['trace']) == 2


def test_validate(capsys, model_path):
    code, out, _ = run(capsys, 'validate', '--model', model_path)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[1] == 'players: 2 (1, 2)'
    assert lines[2] == 'states: 4'
    assert lines[4] == 'transitions: 9'
    assert lines[5] == 'turn-based: no'


def test_synthesize(capsys):
    code, out, _ = run(capsys, 'ttt', 'synthesize', '--board', '110220000', '--turn', '1', '--first', '1')
    assert code == EXIT_OK
    assert out == 'cell 2 (tier 0: immediate win)\n'


def test_synthesize_rejects_bad_boards(capsys):
    code, _, err = run(capsys, 'ttt', 'synthesize', '--board', '110000000', '--turn', '1', '--first', '1')
    assert code == EXIT_USER_ERROR
    assert err.startswith('error: InvalidBoard: ')


def test_bench_csv(capsys):
    code, out, _ = run(capsys, 'bench', '--generator', 'random:states=8,count=1,seed=2',
                       '--formula', '<<1>>~ p', '--repetitions', '1', '--backend', 'direct')
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == 'generator,states,formula,backend,milliseconds,iterations,satisfying'
    assert len(lines) == 2
    assert lines[1].startswith('random:seed=2#0,8,')


def test_bench_bad_spec(capsys):
    code, _, err = run(capsys, 'bench', '--generator', 'chess')
    assert code == EXIT_USER_ERROR
    assert 'InvalidGeneratorSpec' in err


class FakeClient:
    answer = SubmitResponse(200, b'{"satisfying": []}\n')
    calls = []

    def __init__(self, url):
        self.url = url

    def submit(self, model, formula, backend=None):
        self.calls.append((self.url, formula, backend))
        if isinstance(self.answer, Exception):
            raise self.answer
        return self.answer


@pytest.fixture
def fake_client(monkeypatch):
    FakeClient.calls = []
    monkeypatch.setattr(cli, 'CheckerClient', FakeClient)
    return FakeClient


def test_submit(capsys, model_path, fake_client):
    code, out, _ = run(capsys, 'submit', '--url', 'http://checker:8080', '--model', model_path, '--formula', 'x')
    assert code == EXIT_OK
    assert out == '{"satisfying": []}\n'
    assert fake_client.calls == [('http://checker:8080', 'x', None)]


@pytest.mark.parametrize('answer, expected', [
    (SubmitResponse(400, b'{"error": {}}\n'), EXIT_USER_ERROR),
    (SubmitResponse(500, b'{"error": {}}\n'), EXIT_INTERNAL),
    (requests.ConnectionError('refused'), EXIT_INTERNAL),
])
def test_submit_failures(capsys, model_path, fake_client, monkeypatch, answer, expected):
    monkeypatch.setattr(fake_client, 'answer', answer)
    code, out, _ = run(capsys, 'submit', '--model', model_path, '--formula', 'x')
    assert code == expected
    assert out == ''
