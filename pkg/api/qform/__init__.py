# Quadratic form command
from .qform import add_parser, cmd_qform

__all__ = ["add_parser", "cmd_qform"]
