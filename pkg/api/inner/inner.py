import time

from config.logging_config import (get_logger, log_error_with_context, log_function_entry, log_function_exit,
                                   log_performance)
from models.schemas.request_models import RunConfig
from models.schemas.response_models import TableResponse, ValueRow
from api.output import build_document
from services.analysis.expansion_service import expansion_service
from services.analysis.form_service import form_service
from services.analysis.quadrature_service import quadrature_service
from services.dependencies import describe_datum, parse_group, resolve_datum, resolve_form
from services.exceptions import InvalidInputError
from services.series.poincare_service import poincare_service

logger = get_logger(__name__)


def add_parser(subparsers, parents):
    parser = subparsers.add_parser(
        "inner", parents=parents,
        help="Petersson inner product of --form with a Poincare series against its closed form",
        description="Computed <f, P(., m)> (or the unfolded annulus integral for hyp) next to b(m) times "
                    "the closed-form constant.")
    parser.add_argument("kind", choices=["par", "hyp", "ell"])
    parser.add_argument("--m", type=int, default=1, help="series index m (default 1)")
    parser.set_defaults(handler=cmd_inner)
    return parser


def _parabolic(config: RunConfig, f, k: int, datum, group):
    if config.m < 1:
        raise InvalidInputError(f"Parabolic series need m >= 1, got {config.m}")
    coeffs = expansion_service.parabolic_coeffs(f, k, datum, max(config.m, 1), config.y_sample)
    series = poincare_service.parabolic_series(group, k, config.m, datum, config.coset_bound)
    computed = quadrature_service.petersson_inner(f, series, config.y_cap, config.quad_order)
    return computed, coeffs.value(config.m), quadrature_service.parabolic_inner_constant(config.m, k)


def _elliptic(config: RunConfig, f, k: int, datum, group):
    l = datum.order * config.m - k // 2
    series = poincare_service.elliptic_series(group, k, config.m, datum, config.coset_bound)
    coeffs = expansion_service.elliptic_coeffs_taylor(f, k, datum, l)
    computed = quadrature_service.petersson_inner(f, series, config.y_cap, config.quad_order)
    b = coeffs.elliptic_b()[config.m]
    return computed, b, quadrature_service.elliptic_inner_constant(config.m, k, datum.order)


def _hyperbolic(config: RunConfig, f, k: int, datum, group):
    window = max(abs(config.m), 1)
    coeffs = expansion_service.hyperbolic_coeffs(f, k, datum, window, config.y_sample)
    computed = quadrature_service.annulus_unfolded_inner(f, k, datum, config.m, config.quad_order)
    return computed, coeffs.value(config.m), quadrature_service.hyperbolic_inner_constant(config.m, k, datum.xi)


HANDLERS = {"par": _parabolic, "ell": _elliptic, "hyp": _hyperbolic}


def cmd_inner(config: RunConfig) -> TableResponse:
    """Rows: computed, predicted = b(m) * constant, coefficient, constant and their relative residual."""
    start_time = time.time()
    log_function_entry(logger, "cmd_inner", kind=config.kind, m=config.m, form=config.form)
    group = parse_group(config.group)
    if config.kind != "hyp" and group.level != 1:
        e = InvalidInputError(f"Petersson quadrature over a fundamental domain is implemented on sl2z only, "
                              f"got {group.tag}")
        log_error_with_context(logger, e, "cmd_inner", kind=config.kind)
        raise e
    form = resolve_form(config, group)
    f = form_service.evaluator(form)
    k = form.weight
    datum = resolve_datum(config, group)
    computed, coefficient, constant = HANDLERS[config.kind](config, f, k, datum, group)
    predicted = coefficient * constant
    residual = abs(computed - predicted) / max(abs(predicted), 1e-300)
    rows = [
        ValueRow(quantity="computed", re=computed.real, im=computed.imag).model_dump(),
        ValueRow(quantity="predicted", re=predicted.real, im=predicted.imag,
                 detail="b(m) * constant").model_dump(),
        ValueRow(quantity="coefficient", re=coefficient.real, im=coefficient.imag,
                 detail=f"b({config.m})").model_dump(),
        ValueRow(quantity="constant", re=complex(constant).real, im=complex(constant).imag).model_dump(),
        ValueRow(quantity="relative_residual", re=residual).model_dump(),
    ]
    duration = time.time() - start_time
    log_performance(logger, "cmd_inner", duration, kind=config.kind, residual=f"{residual:.2e}")
    log_function_exit(logger, "cmd_inner", result=f"residual {residual:.2e}", duration=duration)
    return build_document(config, rows, form=form.label, weight=k, datum=describe_datum(datum))
