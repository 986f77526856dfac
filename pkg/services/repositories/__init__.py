# Repository layer for cached data
import time

from config.config_loader import config_loader
from config.logging_config import get_logger, log_error_with_context, log_function_entry, log_function_exit, log_performance
from .qexpansion_repository import QExpansionRepository

logger = get_logger(__name__)


def get_qexpansion_repository():
    """Repository rooted at MODFORMS_CACHE_DIR, or None when caching is disabled."""
    log_function_entry(logger, "get_qexpansion_repository")
    start_time = time.time()
    try:
        directory = config_loader.get_config_value("MODFORMS_CACHE_DIR")
        repository = QExpansionRepository(directory) if directory else None
        duration = time.time() - start_time
        log_performance(logger, "get_qexpansion_repository", duration)
        log_function_exit(logger, "get_qexpansion_repository", result=directory or "disabled", duration=duration)
        return repository
    except Exception as e:
        log_error_with_context(logger, e, "get_qexpansion_repository")
        raise


__all__ = [
    "QExpansionRepository",
    "get_qexpansion_repository",
]
