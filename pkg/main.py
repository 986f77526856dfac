import argparse
import sys
import time
from typing import List, Optional

from pydantic import ValidationError

from config.config_loader import config_loader
from config.logging_config import get_logger, log_error_with_context, log_performance, setup_logging
from models.schemas.request_models import RunConfig
from api import expand, inner, poincare, qform, verify
from api.output import emit
from services.exceptions import ModularFormsError, exit_code_for

logger = get_logger(__name__)

COMMANDS = (expand, poincare, qform, inner, verify)
EXIT_OK, EXIT_FAILED = 0, 1


def common_parser() -> argparse.ArgumentParser:
    """Flags shared by every subcommand; unset values fall back to numerics.json."""
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("common options")
    group.add_argument("--group", default="sl2z", help="sl2z or gamma0:N (default sl2z)")
    group.add_argument("--weight", type=int, default=None, help="even weight k (default: the form's weight)")
    group.add_argument("--form", default="delta", help="delta, newform11 or zero (default delta)")
    group.add_argument("--point", default=None, help="elliptic point z0: i, rho or x+yi")
    group.add_argument("--cusp", choices=["oo", "0"], default="oo", help="cusp for parabolic data (default oo)")
    group.add_argument("--disc", type=int, default=None, help="discriminant D of a hyperbolic datum")
    group.add_argument("--matrix", default=None, help="hyperbolic element as a,b;c,d")
    group.add_argument("--coset-bound", type=int, default=None, help="coset truncation bound")
    group.add_argument("--qorder", dest="q_order", type=int, default=None, help="q-expansion order M")
    group.add_argument("--quad-order", type=int, default=None, help="Gauss-Legendre order per panel")
    group.add_argument("--ycap", dest="y_cap", type=float, default=None, help="fundamental domain cutoff")
    group.add_argument("--format", dest="output_format", choices=["json", "csv"], default="json")
    group.add_argument("--out", default=None, help="write the table to this path instead of stdout")
    group.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR (default LOG_LEVEL)")
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modforms", description=config_loader.get_message("cli", "description"))
    subparsers = parser.add_subparsers(dest="command", required=True)
    parents = [common_parser()]
    for command in COMMANDS:
        command.add_parser(subparsers, parents)
    return parser


def to_config(args: argparse.Namespace) -> RunConfig:
    values = {key: value for key, value in vars(args).items()
              if key not in ("handler", "log_level") and value is not None}
    return RunConfig(**values)


def main(argv: Optional[List[str]] = None, stream=None) -> int:
    stream = stream or sys.stdout
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        config = to_config(args)
    except ValidationError as e:
        logger.error(f"[ERROR] Invalid arguments for '{args.command}': {e}")
        return 2
    start_time = time.time()
    try:
        document = args.handler(config)
    except ModularFormsError as e:
        log_error_with_context(logger, e, f"command {config.command}", group=config.group)
        return exit_code_for(e)
    emit(document, config, stream)
    log_performance(logger, f"modforms {config.command}", time.time() - start_time, rows=len(document.rows))
    return EXIT_FAILED if document.meta.get("passed") is False else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
