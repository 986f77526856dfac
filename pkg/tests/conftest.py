import math
import os

os.environ.setdefault("MODFORMS_FILE_LOGGING", "false")
os.environ.setdefault("LOG_LEVEL", "WARNING")

import pytest

from models.domain.group import ArithmeticGroup
from models.domain.group_element import GroupElement
from services.analysis.form_service import form_service
from services.arithmetic.moebius_service import moebius_service

TAU = (1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920)
NEWFORM_11 = (1, -2, -1, 2, 1, 2, -2, 0, -2, -2)

# elements of Gamma0(11) used for second-order checks
LEVEL11_ELEMENTS = (GroupElement(4, -1, 33, -8), GroupElement(3, 1, 11, 4), GroupElement(2, 1, 11, 6))
SAMPLE_POINTS = (0.2 + 1.5j, 0.1 + 1.2j, -0.3 + 2.0j)


@pytest.fixture(scope="session")
def sl2z():
    return ArithmeticGroup(1)


@pytest.fixture(scope="session")
def level11():
    return ArithmeticGroup(11)


@pytest.fixture(scope="session")
def delta():
    return form_service.evaluator(form_service.delta_qexp())


@pytest.fixture(scope="session")
def delta_qexp():
    return form_service.delta_qexp()


@pytest.fixture(scope="session")
def newform():
    return form_service.newform_11()


@pytest.fixture(scope="session")
def d5_datum():
    """Hyperbolic datum of the automorph of x^2 + xy - y^2 (D = 5)."""
    return moebius_service.make_hyperbolic_datum(GroupElement(1, 1, 1, 2))


@pytest.fixture(scope="session")
def i_datum(sl2z):
    return moebius_service.make_elliptic_datum(1j, sl2z)


@pytest.fixture(scope="session")
def rho_datum(sl2z):
    return moebius_service.make_elliptic_datum(complex(0.5, math.sqrt(3) / 2), sl2z)


@pytest.fixture(scope="session")
def cusp_datum(sl2z):
    return moebius_service.make_parabolic_datum(sl2z)
