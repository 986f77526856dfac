import math
import time

import numpy as np

from config.logging_config import get_logger, log_function_entry, log_function_exit, log_performance
from models.domain.quadform import QuadForm
from models.schemas.request_models import RunConfig
from models.schemas.response_models import TableResponse, ValueRow
from api.output import build_document
from services.analysis.form_service import form_service
from services.arithmetic.coset_service import coset_service
from services.arithmetic.moebius_service import moebius_service
from services.arithmetic.quadform_service import quadform_service
from services.dependencies import (default_weight, describe_datum, format_point, parse_group, parse_points,
                                   optional_int, resolve_hyperbolic_generator)
from services.exceptions import InvalidInputError

logger = get_logger(__name__)


def add_parser(subparsers, parents):
    parser = subparsers.add_parser(
        "qform", parents=parents,
        help="indefinite quadratic forms: classes, automorph, theta and Zagier sums, periods",
        description="Class list of discriminant --disc (or the form of --matrix), its automorph, "
                    "theta_{k,g} and F_{k,D,[Q]} at the --at points, and the hyperbolic period of --form.")
    parser.add_argument("--at", dest="points", action="append", default=[],
                        help="evaluation point x+yi; repeat for several (default i)")
    parser.add_argument("--lattice-bound", type=int, default=None,
                        help="max(|a|, |b|, |c|) for the Zagier lattice sum (default qforms.lattice_bound)")
    parser.set_defaults(handler=cmd_qform)
    return parser


def primitive_part(form: QuadForm) -> QuadForm:
    content = math.gcd(math.gcd(form.a, form.b), form.c)
    return QuadForm(form.a // content, form.b // content, form.c // content)


def _value(quantity: str, value: complex, detail: str = None) -> dict:
    value = complex(value)
    return ValueRow(quantity=quantity, re=value.real, im=value.imag, detail=detail).model_dump()


def cmd_qform(config: RunConfig) -> TableResponse:
    start_time = time.time()
    log_function_entry(logger, "cmd_qform", disc=config.disc, matrix=config.matrix)
    group = parse_group(config.group)
    if group.level != 1:
        raise InvalidInputError("Quadratic-form sums are implemented on sl2z only")
    k = default_weight(config)
    lattice_bound = optional_int(config.lattice_bound, "qforms", "lattice_bound", 300)
    generator = resolve_hyperbolic_generator(config, group)
    base_form = primitive_part(quadform_service.form_of(generator))
    D = base_form.discriminant
    rows = []
    classes = quadform_service.class_list(D)
    rows.append(_value("class_number", len(classes), f"D = {D}"))
    for index, form_class in enumerate(classes):
        rows.append(_value(f"class[{index}]", len(form_class.cycle),
                           f"reduced {form_class.representative}, cycle length {len(form_class.cycle)}"))
    automorph = quadform_service.automorph(base_form)
    rows.append(_value("automorph_trace", automorph.trace, f"automorph of {base_form}: {automorph}"))
    datum = moebius_service.make_hyperbolic_datum(generator)
    rows.append(_value("xi", datum.xi, f"generator {generator}, Q_g = {base_form}"))
    rows.append(_value("period_constant", quadform_service.period_constant(k, generator), f"k = {k}"))

    cosets = coset_service.cosets_hyperbolic(group, datum, config.coset_bound)
    points = np.array(parse_points(config.points or ["i"]))
    theta = np.atleast_1d(quadform_service.theta_katok(points, k, generator, cosets))
    target = classes[quadform_service.class_index(base_form)]
    zagier = np.atleast_1d(quadform_service.zagier_F(points, k, D, lattice_bound, target))
    for z, t, F in zip(points, theta, zagier):
        label = format_point(z)
        rows.append(_value(f"theta({label})", t, f"{len(cosets)} cosets"))
        rows.append(_value(f"F({label})", F, f"lattice bound {lattice_bound}, class of {target.representative}"))

    form = form_service.get_form(config.form, group, config.q_order)
    if form.weight == k:
        period, error = quadform_service.hyperbolic_period(form, generator, 1j)
        rows.append(_value(f"period({form.label})", period, f"from i to g i, error {error:.2e}"))
    else:
        logger.info(f"Skipping the period: {form.label} has weight {form.weight}, not {k}")
    duration = time.time() - start_time
    log_performance(logger, "cmd_qform", duration, D=D, rows=len(rows))
    log_function_exit(logger, "cmd_qform", result=f"{len(rows)} rows", duration=duration)
    return build_document(config, rows, discriminant=D, weight=k, datum=describe_datum(datum),
                          lattice_bound=lattice_bound)
