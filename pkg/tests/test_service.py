import json
import re
from concurrent.futures import ThreadPoolExecutor

import pytest
from fastapi.testclient import TestClient

from src.cli import main
from src.service import create_app


@pytest.fixture
def client():
    return TestClient(create_app())


@pytest.fixture
def model(model_bytes):
    return json.loads(model_bytes)


def post_check(client, model, formula, **extra):
    return client.post('/check', json={'model': model, 'formula': formula, **extra})


def test_check(client, model):
    response = post_check(client, model, '<<1>>@ (x and y)')
    assert response.status_code == 200
    assert response.headers['content-type'].startswith('application/json')
    assert response.json()['satisfying'] == ['q2', 'q3']


def test_true_is_every_state(client, model):
    response = post_check(client, model, 'true', backend='direct')
    assert response.json()['satisfying'] == ['q0', 'q1', 'q2', 'q3']


def _without_timing(data):
    return re.sub(rb'"milliseconds": [0-9.eE+-]+', b'"milliseconds": 0', data)


def test_same_document_as_the_cli(client, model, model_path, capsys):
    formula = '<<1>>~ (x and y)'
    assert main(['check', '--model', model_path, '--formula', formula]) == 0
    from_cli = capsys.readouterr().out.encode('utf-8')
    from_service = post_check(client, model, formula).content

    assert json.loads(from_cli)['satisfying'] == ['q2', 'q3']
    assert b'"milliseconds": ' in from_service
    assert _without_timing(from_cli) == _without_timing(from_service)


def test_malformed_body(client):
    response = client.post('/check', content=b'{"model": ', headers={'content-type': 'application/json'})
    assert response.status_code == 400
    assert response.json()['error']['kind'] == 'ParseError'


def test_schema_error_path(client, model):
    del model['transitions']
    response = post_check(client, model, 'x')
    assert response.status_code == 400
    error = response.json()['error']
    assert error['kind'] == 'SchemaError'
    assert error['location'] == '/model/transitions'


def test_unknown_backend(client, model):
    response = post_check(client, model, 'x', backend='sql')
    assert response.status_code == 400
    assert response.json()['error']['location'] == '/backend'


def test_structure_error(client, model):
    model['transitions'].append({'from': 'q0', 'vector': ['L', 'L'], 'to': 'q1'})
    response = post_check(client, model, 'x')
    assert response.status_code == 400
    error = response.json()['error']
    assert error['kind'] == 'DuplicateTransition'
    assert error['diagnostics'][0]['state'] == 'q0'


def test_formula_error(client, model):
    response = post_check(client, model, '<<1>> U x')
    assert response.status_code == 400
    assert response.json()['error']['kind'] == 'SyntaxError'


def test_request_too_large(model):
    client = TestClient(create_app(max_request_bytes=64))
    response = post_check(client, model, 'x')
    assert response.status_code == 413
    assert response.json()['error']['kind'] == 'RequestTooLarge'


def test_health(client):
    first = client.get('/health').json()
    second = client.get('/health').json()
    assert first['status'] == 'ok'
    assert second['uptime_seconds'] >= first['uptime_seconds'] >= 0


def test_unknown_route(client):
    assert client.get('/foo').status_code == 404


def test_concurrent_requests_agree(client, model):
    def ask(_):
        return post_check(client, model, '<<1>>~ (x and y)').json()['satisfying']

    with ThreadPoolExecutor(max_workers=8) as pool:
        answers = list(pool.map(ask, range(16)))
    assert answers == [['q2', 'q3']] * 16
