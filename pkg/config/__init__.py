from .logging_config import setup_logging, get_logger
from .config_loader import config_loader, ConfigLoader

__all__ = ["setup_logging", "get_logger", "config_loader", "ConfigLoader"]
