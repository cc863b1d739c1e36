"""
Client for a running checker service.
"""

import json
from dataclasses import dataclass
from typing import Optional

import requests

from .config import CLIENT_TIMEOUT_SECONDS, SERVICE_URL
from .errors import ModelParseError
from .utils.logger import setup_logger

logger = setup_logger('client')


@dataclass(frozen=True)
class SubmitResponse:
    status_code: int
    body: bytes

    @property
    def ok(self):
        return self.status_code == 200


class CheckerClient:
    """Forwards models and formulas to the /check endpoint."""

    def __init__(self, base_url: str = SERVICE_URL, timeout: float = CLIENT_TIMEOUT_SECONDS,
                 session: Optional[requests.Session] = None):
        self.base_url = base_url.rstrip('/')
        self.timeout = timeout
        self.session = session or requests.Session()

    def submit(self, model: bytes, formula: str, backend: Optional[str] = None) -> SubmitResponse:
        """
        Send one check request.

        Args:
            model: model document bytes (JSON)
            formula: formula text
            backend: Pre backend, or None for the server default

        Returns:
            SubmitResponse with the status code and the raw response body

        Raises:
            ModelParseError: model is not JSON
            requests.RequestException: the service could not be reached
        """
        try:
            document = json.loads(model)
        except ValueError as e:
            raise ModelParseError(f"model is not valid JSON: {e}") from None
        payload = {'model': document, 'formula': formula}
        if backend:
            payload['backend'] = backend

        url = f"{self.base_url}/check"
        logger.info(f"Submitting check to {url}")
        response = self.session.post(url, json=payload, timeout=self.timeout)
        logger.info(f"Service answered {response.status_code}")
        return SubmitResponse(response.status_code, response.content)

    def health(self) -> dict:
        response = self.session.get(f"{self.base_url}/health", timeout=self.timeout)
        response.raise_for_status()
        return response.json()
