import time

import numpy as np

from config.logging_config import get_logger, log_function_entry, log_function_exit, log_performance
from models.schemas.request_models import RunConfig
from models.schemas.response_models import SeriesRow, TableResponse
from api.output import build_document
from services.dependencies import (default_weight, describe_datum, format_point, parse_group, parse_points,
                                   resolve_datum)
from services.exceptions import InvalidInputError
from services.series.poincare_service import poincare_service
from services.series.second_order_service import PeriodHom, second_order_service

logger = get_logger(__name__)


def add_parser(subparsers, parents):
    parser = subparsers.add_parser(
        "poincare", parents=parents,
        help="evaluate a first- or second-order relative Poincare series",
        description="Values of P[phi] (order 1) or P[phi, L] (order 2) at the --at points.")
    parser.add_argument("kind", choices=["par", "hyp", "ell"])
    parser.add_argument("--order", type=int, choices=[1, 2], default=1)
    parser.add_argument("--m", type=int, default=1, help="seed index m (default 1)")
    parser.add_argument("--at", dest="points", action="append", default=[],
                        help="evaluation point x+yi; repeat for several (default i)")
    parser.add_argument("--hom", choices=["plus", "minus"], default="plus",
                        help="basis homomorphism for order 2: periods of f (plus) or their conjugates (minus)")
    parser.add_argument("--zero-hom", action="store_true", help="twist by the zero homomorphism")
    parser.set_defaults(handler=cmd_poincare)
    return parser


def _homomorphism(config: RunConfig, group, datum):
    if config.zero_hom:
        return PeriodHom(None, None, group)
    if group.genus == 0:
        raise InvalidInputError(f"Hom0({group.tag}, C) is trivial (genus 0); second-order series need genus >= 1")
    if config.kind == "hyp":
        return second_order_service.twist_for_hyperbolic(group, datum.generator)
    plus, minus = second_order_service.hom_basis(group)
    return plus if config.hom == "plus" else minus


def cmd_poincare(config: RunConfig) -> TableResponse:
    """Series values with the magnitude of the outermost shell of terms as a truncation diagnostic."""
    start_time = time.time()
    log_function_entry(logger, "cmd_poincare", kind=config.kind, order=config.order, m=config.m)
    group = parse_group(config.group)
    k = default_weight(config)
    datum = resolve_datum(config, group)
    points = parse_points(config.points or ["i"])
    hom = _homomorphism(config, group, datum) if config.order == 2 or config.zero_hom else None
    if hom is not None:
        series = second_order_service.build_second_order(config.kind, config.m, k, datum, hom, group,
                                                         config.coset_bound)
    elif config.kind == "par":
        series = poincare_service.parabolic_series(group, k, config.m, datum, config.coset_bound)
    elif config.kind == "hyp":
        series = poincare_service.hyperbolic_series(group, k, config.m, datum, config.coset_bound)
    else:
        series = poincare_service.elliptic_series(group, k, config.m, datum, config.coset_bound)
    rows = []
    for z in points:
        value, last_shell = series.evaluate(np.array([z]))
        rows.append(SeriesRow(point=format_point(z), re=float(value[0].real), im=float(value[0].imag),
                              last_shell=last_shell).model_dump())
    duration = time.time() - start_time
    log_performance(logger, "cmd_poincare", duration, terms=len(series.reps), points=len(points))
    log_function_exit(logger, "cmd_poincare", result=f"{len(rows)} rows", duration=duration)
    return build_document(config, rows, weight=k, terms=len(series.reps), cosets=repr(series.cosets),
                          datum=describe_datum(datum), hom=repr(hom) if hom is not None else None)
