"""
HTTP JSON endpoint for the model checker.

POST /check takes {"model": <model document>, "formula": "...", "backend": "relational"}
and answers with the same result document the CLI prints. Models travel with
every request; the server keeps no per-request state.
"""

import time
from typing import Literal, Optional

from fastapi import APIRouter, FastAPI, Request, Response, status
from fastapi.concurrency import run_in_threadpool
from pydantic import BaseModel, ConfigDict

from . import __version__
from .config import DEFAULT_BACKEND, MAX_REQUEST_BYTES, STRICT_PROPOSITIONS
from .cgs import validate
from .engine import ModelChecker
from .errors import ATLError
from .model_io import ModelDocument, dump_error, dump_json, dump_result, parse_document
from .utils.logger import setup_logger

logger = setup_logger('service')

JSON = 'application/json'


class CheckRequest(BaseModel):
    model_config = ConfigDict(extra='forbid')

    model: ModelDocument
    formula: str
    backend: Optional[Literal['direct', 'relational']] = None


class RequestTooLarge(Exception):
    pass


def check_request(body: bytes) -> bytes:
    """
    Run one check request end to end.

    Returns:
        Result document bytes

    Raises:
        ATLError: any parse, schema, validation or formula error
    """
    request = parse_document(body, CheckRequest)
    structure = validate(request.model.to_description())
    checker = ModelChecker(structure, request.backend or DEFAULT_BACKEND, strict_atoms=STRICT_PROPOSITIONS)
    result = checker.check(request.formula)
    return dump_result(result, structure)


def _error(status_code, kind, message):
    payload = dump_json({'error': {'kind': kind, 'message': message, 'location': None}})
    return Response(payload, status_code=status_code, media_type=JSON)


async def _read_body(request: Request, limit: int) -> bytes:
    declared = request.headers.get('content-length')
    if declared and declared.isdigit() and int(declared) > limit:
        raise RequestTooLarge()
    chunks = []
    size = 0
    async for chunk in request.stream():
        size += len(chunk)
        if size > limit:
            raise RequestTooLarge()
        chunks.append(chunk)
    return b''.join(chunks)


router = APIRouter(
    responses={
        400: {"description": "Malformed model, formula or request"},
        413: {"description": "Request body over the configured limit"},
    },
)


@router.post('/check')
async def check(request: Request) -> Response:
    """Check a formula against an inline model."""
    limit = request.app.state.max_request_bytes
    try:
        body = await _read_body(request, limit)
    except RequestTooLarge:
        logger.warning(f"Rejected request over {limit} bytes")
        return _error(status.HTTP_413_REQUEST_ENTITY_TOO_LARGE, 'RequestTooLarge',
                      f"request body exceeds {limit} bytes")

    try:
        payload = await run_in_threadpool(check_request, body)
    except ATLError as e:
        logger.info(f"Check rejected: {e.kind}: {e.message}")
        return Response(dump_error(e), status_code=status.HTTP_400_BAD_REQUEST, media_type=JSON)
    except Exception as e:
        logger.error(f"❌ Internal error while checking: {e}", exc_info=True)
        return _error(status.HTTP_500_INTERNAL_SERVER_ERROR, 'InternalError', 'internal error')

    logger.info(f"✅ Check answered ({len(body)} request bytes)")
    return Response(payload, status_code=status.HTTP_200_OK, media_type=JSON)


@router.get('/health')
async def health(request: Request) -> dict:
    """Liveness with version and uptime."""
    return {
        'status': 'ok',
        'version': __version__,
        'uptime_seconds': time.monotonic() - request.app.state.started,
    }


def create_app(max_request_bytes: int = MAX_REQUEST_BYTES) -> FastAPI:
    app = FastAPI(title='ATL model checker', version=__version__)
    app.state.max_request_bytes = max_request_bytes
    app.state.started = time.monotonic()
    app.include_router(router)
    return app


def serve(host: str, port: int) -> None:
    import uvicorn

    logger.info(f"🚀 Serving ATL checker on http://{host}:{port}")
    uvicorn.run(create_app(), host=host, port=port, log_level='info')
