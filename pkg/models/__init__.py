from .domain import ArithmeticGroup, GroupElement, QExpansion, QuadForm
from .schemas import RunConfig, TableResponse

__all__ = ["ArithmeticGroup", "GroupElement", "QExpansion", "QuadForm", "RunConfig", "TableResponse"]
