"""
Main entry point for the ATL model checker.
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.config import validate_config
from src.utils.logger import setup_logger
from src.cli import main as run_cli

# Set up main logger
logger = setup_logger('main')


def main():
    """Main entry point."""
    config_errors = validate_config()
    if config_errors:
        logger.error("❌ Configuration errors found:")
        for error in config_errors:
            logger.error(f"  - {error}")
        logger.error("Please check your .env file; see .env.example for reference.")
        sys.exit(1)

    logger.debug("✅ Configuration validated")
    sys.exit(run_cli())


if __name__ == '__main__':
    main()
