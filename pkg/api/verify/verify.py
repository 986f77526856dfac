from config.logging_config import get_logger, log_function_entry, log_function_exit
from models.schemas.request_models import RunConfig
from models.schemas.response_models import TableResponse
from api.output import build_document
from services.verification.verification_service import SUITES, verification_service

logger = get_logger(__name__)


def add_parser(subparsers, parents):
    parser = subparsers.add_parser(
        "verify", parents=parents,
        help="run the built-in numerical checks",
        description="Run a verification suite; exits 1 when any check fails.")
    parser.add_argument("suite", nargs="?", default="all", choices=("all",) + SUITES)
    parser.add_argument("--only", action="append", default=[], help="run only this check; repeatable")
    parser.set_defaults(handler=cmd_verify)
    return parser


def cmd_verify(config: RunConfig) -> TableResponse:
    """One row per check; meta carries ``passed`` for the exit code."""
    log_function_entry(logger, "cmd_verify", suite=config.suite, only=config.only)
    report = verification_service.run(config.suite, config.only)
    rows = [check.model_dump() for check in report.checks]
    for failure in report.failures:
        logger.warning(f"[VERIFY] FAILED {failure.suite}/{failure.name}: {failure.detail}")
    log_function_exit(logger, "cmd_verify", result=f"passed={report.passed}", duration=report.duration)
    return build_document(config, rows, passed=report.passed, total=len(report.checks),
                          failed=len(report.failures), duration=report.duration)
