"""
Hecke Norm - Main Application
Entry point untuk aplikasi dengan logging dan error handling
"""

import sys
import logging
from typing import Optional, Sequence

from config import LogConfig, APP_NAME, APP_VERSION, EXIT_INPUT_ERROR
from core.settings_manager import get_settings_manager


def setup_logging():
    """Configure logging system; stdout stays reserved for results"""
    logging.basicConfig(
        level=getattr(logging, LogConfig.LOG_LEVEL, logging.INFO),
        format=LogConfig.LOG_FORMAT,
        handlers=[
            logging.FileHandler(LogConfig.LOG_FILE, encoding='utf-8'),
            logging.StreamHandler(sys.stderr)
        ]
    )

    logger = logging.getLogger(__name__)
    logger.debug(f"Starting {APP_NAME} v{APP_VERSION}")
    return logger


def apply_user_settings(logger):
    """Load and apply settings from settings.json at startup"""
    try:
        manager = get_settings_manager()
        issues = manager.validate_settings()
        if issues:
            logger.warning(f"Invalid settings ignored, using defaults: {issues}")
            manager.reset_to_defaults()
        manager.apply_to_config()
        logging.getLogger().setLevel(getattr(logging, LogConfig.LOG_LEVEL, logging.INFO))
    except Exception as e:
        logger.error(f"Failed to apply user settings: {e}")


def check_dependencies():
    """Check if required dependencies are installed"""
    required = ['numpy', 'mpmath', 'sympy']
    missing = []

    for module in required:
        try:
            __import__(module)
        except ImportError:
            missing.append(module)

    if missing:
        print(f"❌ Missing dependencies: {', '.join(missing)}", file=sys.stderr)
        print("Install with: pip install -r requirements.txt", file=sys.stderr)
        sys.exit(EXIT_INPUT_ERROR)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main application entry point"""
    logger = setup_logging()
    check_dependencies()
    apply_user_settings(logger)

    try:
        from ui.cli import CLI
        code = CLI().run(argv)

    except KeyboardInterrupt:
        print("\n\n👋 Interrupted by user.", file=sys.stderr)
        logger.info("Application interrupted by user")
        code = EXIT_INPUT_ERROR

    except Exception as e:
        logger.error(f"Fatal error: {str(e)}", exc_info=True)
        print(f"\n❌ Fatal error occurred: {str(e)}", file=sys.stderr)
        print(f"Check logs for details: {LogConfig.LOG_FILE}", file=sys.stderr)
        code = EXIT_INPUT_ERROR

    sys.exit(code)


if __name__ == "__main__":
    main()
