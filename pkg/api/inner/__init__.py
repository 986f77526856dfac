# Inner product command
from .inner import add_parser, cmd_inner

__all__ = ["add_parser", "cmd_inner"]
