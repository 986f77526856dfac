# Command-line handlers, one subpackage per subcommand
from . import expand, inner, poincare, qform, verify

__all__ = ["expand", "inner", "poincare", "qform", "verify"]
