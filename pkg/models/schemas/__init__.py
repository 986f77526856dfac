# Request/Response schemas
from .request_models import RunConfig
from .response_models import CheckResult, CoefficientRow, SeriesRow, TableResponse, ValueRow, VerifyReport

__all__ = ["RunConfig", "CheckResult", "CoefficientRow", "SeriesRow", "TableResponse", "ValueRow", "VerifyReport"]
