# Poincare series command
from .poincare import add_parser, cmd_poincare

__all__ = ["add_parser", "cmd_poincare"]
