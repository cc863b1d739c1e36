"""
Configuration management for the ATL model checker.
Loads settings from environment variables and .env file.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Base directory
BASE_DIR = Path(__file__).parent.parent

# Bundled models
MODELS_DIR = BASE_DIR / 'models'
TWO_PROCESS_MODEL_PATH = str(MODELS_DIR / 'two_process.json')

# Model checking
BACKENDS = ('direct', 'relational')
DEFAULT_BACKEND = os.getenv('ATL_BACKEND', 'relational').lower()
STRICT_PROPOSITIONS = os.getenv('ATL_STRICT_PROPOSITIONS', 'true').lower() == 'true'
MAX_FORMULA_DEPTH = int(os.getenv('ATL_MAX_FORMULA_DEPTH', '10000'))
RELATION_CACHE_SIZE = int(os.getenv('ATL_RELATION_CACHE_SIZE', '64'))

# Web service
SERVICE_HOST = os.getenv('ATL_SERVICE_HOST', '127.0.0.1')
SERVICE_PORT = int(os.getenv('ATL_SERVICE_PORT', '8080'))
MAX_REQUEST_BYTES = int(os.getenv('ATL_MAX_REQUEST_BYTES', str(64 * 1024 * 1024)))
SERVICE_URL = os.getenv('ATL_SERVICE_URL', f'http://{SERVICE_HOST}:{SERVICE_PORT}')
CLIENT_TIMEOUT_SECONDS = float(os.getenv('ATL_CLIENT_TIMEOUT', '300'))

# Benchmarks
BENCH_REPETITIONS = int(os.getenv('ATL_BENCH_REPETITIONS', '3'))

# Logging
LOG_LEVEL = os.getenv('ATL_LOG_LEVEL', 'WARNING').upper()
LOG_FILE = os.getenv('ATL_LOG_FILE') or None


# Validation
def validate_config():
    """Validate that the configured values are usable."""
    errors = []

    if DEFAULT_BACKEND not in BACKENDS:
        errors.append(f"ATL_BACKEND must be one of {', '.join(BACKENDS)} (got '{DEFAULT_BACKEND}')")

    if not 1 <= SERVICE_PORT <= 65535:
        errors.append(f"ATL_SERVICE_PORT must be between 1 and 65535 (got {SERVICE_PORT})")

    if MAX_REQUEST_BYTES <= 0:
        errors.append("ATL_MAX_REQUEST_BYTES must be positive")

    if MAX_FORMULA_DEPTH <= 0:
        errors.append("ATL_MAX_FORMULA_DEPTH must be positive")

    if RELATION_CACHE_SIZE <= 0:
        errors.append("ATL_RELATION_CACHE_SIZE must be positive")

    if BENCH_REPETITIONS <= 0:
        errors.append("ATL_BENCH_REPETITIONS must be positive")

    if LOG_LEVEL not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
        errors.append(f"ATL_LOG_LEVEL '{LOG_LEVEL}' is not a logging level")

    return errors
