"""
Utility modules: configuration, logging and verification progress.
"""

from .config_manager import ConfigManager, RunConfig
from .progress_tracker import ProgressTracker, DrawRecord, SuiteProgress
from .logging_setup import setup_logging, configure_library_loggers

__all__ = [
    'ConfigManager',
    'RunConfig',
    'ProgressTracker',
    'DrawRecord',
    'SuiteProgress',
    'setup_logging',
    'configure_library_loggers'
]
