import time

from config.logging_config import get_logger, log_function_entry, log_function_exit, log_performance
from models.schemas.request_models import RunConfig
from models.schemas.response_models import CoefficientRow, TableResponse
from api.output import build_document
from services.analysis.expansion_service import expansion_service
from services.analysis.form_service import form_service
from services.dependencies import describe_datum, parse_group, resolve_datum, resolve_form

logger = get_logger(__name__)


def add_parser(subparsers, parents):
    parser = subparsers.add_parser(
        "expand", parents=parents,
        help="parabolic, hyperbolic or elliptic expansion coefficients of a form",
        description="Emit (index, re, im) rows of the chosen expansion of --form.")
    parser.add_argument("kind", choices=["par", "hyp", "ell"])
    parser.add_argument("--mmax", dest="m_max", type=int, default=8,
                        help="largest index for par and ell (default 8)")
    parser.add_argument("--mwin", dest="m_window", type=int, default=None,
                        help="hyperbolic window |m| <= W (default expansions.hyperbolic_window)")
    parser.add_argument("--y-sample", type=float, default=None,
                        help="sample height for par and hyp (default from numerics.json)")
    parser.add_argument("--radius", type=float, default=None,
                        help="contour radius for ell; switches from Taylor to the Cauchy sum")
    parser.set_defaults(handler=cmd_expand)
    return parser


def cmd_expand(config: RunConfig) -> TableResponse:
    """Coefficients b_a(m), b_eta(m) or c_z0(l) of the form, one row per index."""
    start_time = time.time()
    log_function_entry(logger, "cmd_expand", kind=config.kind, form=config.form, group=config.group)
    group = parse_group(config.group)
    form = resolve_form(config, group)
    f = form_service.evaluator(form)
    datum = resolve_datum(config, group)
    k = form.weight
    if config.kind == "par":
        coeffs = expansion_service.parabolic_coeffs(f, k, datum, config.m_max, config.y_sample)
    elif config.kind == "hyp":
        coeffs = expansion_service.hyperbolic_coeffs(f, k, datum, config.m_window, config.y_sample)
    elif config.radius is not None:
        coeffs = expansion_service.elliptic_coeffs_contour(f, k, datum, config.m_max, config.radius)
    else:
        coeffs = expansion_service.elliptic_coeffs_taylor(f, k, datum, config.m_max)
    rows = [CoefficientRow(**row).model_dump() for row in coeffs.to_rows()]
    duration = time.time() - start_time
    log_performance(logger, "cmd_expand", duration, kind=config.kind, rows=len(rows))
    log_function_exit(logger, "cmd_expand", result=f"{len(rows)} rows", duration=duration)
    return build_document(config, rows, form=form.label, weight=k, q_order=form.order,
                          datum=describe_datum(datum), extraction=coeffs.meta)
