# Expansion coefficients command
from .expand import add_parser, cmd_expand

__all__ = ["add_parser", "cmd_expand"]
