"""
Logging setup utilities for cavity-array transport runs.
"""

import logging
import logging.handlers
from typing import Dict, Any, Optional
from pathlib import Path

APP_LOGGER = 'cavity_transport'


def setup_logging(config: Dict[str, Any], level_override: Optional[str] = None,
                  log_to_file: bool = True) -> logging.Logger:
    """
    Set up logging configuration based on config.

    Args:
        config: Full configuration dictionary (reads its ``logging`` section)
        level_override: Level from the command line, wins over the file
        log_to_file: Attach the rotating file handler

    Returns:
        Configured application logger
    """
    log_config = config.get('logging', {})

    log_level = (level_override or log_config.get('level', 'INFO')).upper()
    log_file = log_config.get('log_file', 'logs/cavity_transport.log')
    log_format = log_config.get('log_format',
                                '%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    max_log_size_mb = log_config.get('max_log_size_mb', 10)
    backup_count = log_config.get('backup_count', 3)
    level = getattr(logging, log_level, logging.INFO)

    logger = logging.getLogger()
    logger.setLevel(level)
    logger.handlers.clear()

    formatter = logging.Formatter(log_format)

    # stderr keeps stdout free for the one-line command summaries
    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_to_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=max_log_size_mb * 1024 * 1024,
            backupCount=backup_count,
            encoding='utf-8'
        )
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    app_logger = logging.getLogger(APP_LOGGER)
    app_logger.setLevel(level)
    app_logger.info(f"Logging initialized - Level: {log_level}, File: {log_file if log_to_file else '-'}")

    return app_logger


def log_system_info(logger: logging.Logger):
    """Log interpreter, numeric stack and machine information at startup."""
    import sys
    import platform
    import psutil
    import numpy
    import scipy

    logger.debug("=" * 60)
    logger.debug("CAVITY TRANSPORT STARTUP")
    logger.debug("=" * 60)
    logger.debug(f"Python Version: {sys.version.split()[0]}")
    logger.debug(f"Platform: {platform.platform()}")
    logger.debug(f"numpy {numpy.__version__}, scipy {scipy.__version__}")
    logger.debug(f"CPU Count: {psutil.cpu_count()}")

    memory = psutil.virtual_memory()
    logger.debug(f"Available Memory: {memory.available / (1024**3):.2f} GB of {memory.total / (1024**3):.2f} GB")
    logger.debug("=" * 60)


def configure_library_loggers():
    """Configure logging levels for third-party libraries."""
    logging.getLogger('matplotlib').setLevel(logging.WARNING)
    logging.getLogger('PIL').setLevel(logging.WARNING)
