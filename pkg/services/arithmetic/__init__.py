# Integer arithmetic of SL2(Z): Moebius action, cosets, quadratic forms
from .coset_service import CosetService, coset_service
from .moebius_service import MoebiusService, moebius_service
from .quadform_service import QuadFormService, quadform_service

__all__ = ["CosetService", "MoebiusService", "QuadFormService", "coset_service", "moebius_service", "quadform_service"]
