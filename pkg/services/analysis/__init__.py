# Evaluation, expansion and quadrature services
from .expansion_service import ExpansionService, expansion_service
from .form_service import FormEvaluator, FormService, form_service
from .quadrature_service import QuadratureService, quadrature_service

__all__ = [
    "ExpansionService",
    "FormEvaluator",
    "FormService",
    "QuadratureService",
    "expansion_service",
    "form_service",
    "quadrature_service",
]
