import math
import re
from fractions import Fraction
from typing import List, Optional

from config.config_loader import config_loader
from config.logging_config import get_logger, log_error_with_context
from models.domain.fixed_point import EllipticDatum, HyperbolicDatum, ParabolicDatum
from models.domain.group import ArithmeticGroup
from models.domain.group_element import INFINITY, GroupElement
from models.domain.qexpansion import QExpansion
from models.schemas.request_models import RunConfig
from services.analysis.form_service import form_service
from services.arithmetic.moebius_service import moebius_service
from services.arithmetic.quadform_service import quadform_service
from services.exceptions import InvalidInputError

logger = get_logger(__name__)

POINT_ALIASES = {
    "i": 1j,
    "rho": complex(0.5, math.sqrt(3) / 2),
    "rho-1": complex(-0.5, math.sqrt(3) / 2),
}

MATRIX_PATTERN = re.compile(r"^\s*(-?\d+)\s*,\s*(-?\d+)\s*;\s*(-?\d+)\s*,\s*(-?\d+)\s*$")


def parse_group(tag: str) -> ArithmeticGroup:
    return ArithmeticGroup.parse(tag)


def parse_point(text: str) -> complex:
    """'i', 'rho' or a decimal literal 'x+yi' (also 'yi', 'x-yi')."""
    cleaned = text.strip().lower().replace(" ", "")
    if cleaned in POINT_ALIASES:
        return POINT_ALIASES[cleaned]
    try:
        z = complex(cleaned.replace("i", "j"))
    except ValueError:
        raise InvalidInputError(config_loader.get_message("errors", "parse_point", text=text))
    if z.imag <= 0:
        raise InvalidInputError(config_loader.get_message("errors", "not_upper_half_plane", z=z))
    return z


def parse_points(texts: List[str]) -> List[complex]:
    return [parse_point(text) for text in texts]


def parse_matrix(text: str) -> GroupElement:
    """'a,b;c,d' with integer entries and determinant 1."""
    match = MATRIX_PATTERN.match(text)
    if not match:
        raise InvalidInputError(config_loader.get_message("errors", "parse_matrix", text=text))
    g = GroupElement(*(int(x) for x in match.groups()))
    if g.det != 1:
        raise InvalidInputError(f"Matrix {g} has determinant {g.det}, expected 1")
    return g


def resolve_form(config: RunConfig, group: ArithmeticGroup) -> QExpansion:
    form = form_service.get_form(config.form, group, config.q_order)
    if config.weight is not None and config.weight != form.weight:
        raise InvalidInputError(f"Form {form.label} has weight {form.weight}, not {config.weight}")
    return form


def resolve_parabolic_datum(config: RunConfig, group: ArithmeticGroup) -> ParabolicDatum:
    cusp = INFINITY if config.cusp == "oo" else Fraction(0)
    return moebius_service.make_parabolic_datum(group, cusp)


def resolve_hyperbolic_generator(config: RunConfig, group: ArithmeticGroup) -> GroupElement:
    """The matrix given with --matrix, or the least power of the automorph of the first reduced
    form of discriminant --disc that lies in the group."""
    if config.matrix:
        g = parse_matrix(config.matrix)
        if not group.contains(g):
            raise InvalidInputError(f"{g} is not an element of {group.tag}")
        return g
    if config.disc is None:
        raise InvalidInputError("A hyperbolic datum needs --disc or --matrix")
    reduced = quadform_service.class_list(config.disc)[0].representative
    automorph = quadform_service.automorph(reduced)
    power = automorph
    for _ in range(group.index):
        if group.contains(power):
            logger.debug(f"Hyperbolic generator for D={config.disc} on {group.tag}: {power}")
            return power
        power = power @ automorph
    e = InvalidInputError(f"No power of {automorph} up to {group.index} lies in {group.tag}")
    log_error_with_context(logger, e, "resolve_hyperbolic_generator", disc=config.disc)
    raise e


def resolve_hyperbolic_datum(config: RunConfig, group: ArithmeticGroup) -> HyperbolicDatum:
    return moebius_service.make_hyperbolic_datum(resolve_hyperbolic_generator(config, group))


def resolve_elliptic_datum(config: RunConfig, group: ArithmeticGroup) -> EllipticDatum:
    if not config.point:
        raise InvalidInputError("An elliptic datum needs --point")
    return moebius_service.make_elliptic_datum(parse_point(config.point), group)


def resolve_datum(config: RunConfig, group: ArithmeticGroup):
    if config.kind == "par":
        return resolve_parabolic_datum(config, group)
    if config.kind == "hyp":
        return resolve_hyperbolic_datum(config, group)
    return resolve_elliptic_datum(config, group)


def describe_datum(datum) -> dict:
    """JSON-friendly summary of a fixed-point datum for output headers."""
    if isinstance(datum, ParabolicDatum):
        return {"cusp": str(datum.cusp), "generator": str(datum.generator)}
    if isinstance(datum, HyperbolicDatum):
        return {"generator": str(datum.generator), "xi": datum.xi, "log_xi": datum.log_xi,
                "eta1": datum.eta1, "eta2": datum.eta2, "strip_height": datum.strip_height}
    if isinstance(datum, EllipticDatum):
        return {"z0": format_point(datum.z0), "order": datum.order, "epsilon": str(datum.epsilon)}
    return {}


def format_point(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


def default_weight(config: RunConfig, fallback: int = 12) -> int:
    return config.weight if config.weight is not None else fallback


def optional_int(value: Optional[int], section: str, key: str, default: int) -> int:
    return value if value is not None else config_loader.get_numeric(section, key, default)
