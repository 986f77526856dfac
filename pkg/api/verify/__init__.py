# Verification command
from .verify import add_parser, cmd_verify

__all__ = ["add_parser", "cmd_verify"]
