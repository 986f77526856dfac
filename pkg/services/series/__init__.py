# Relative Poincare series of first and second order
from .modular_symbol_service import ModularSymbols, ModularSymbolService, modular_symbol_service
from .poincare_service import PoincareSeries, PoincareService, SeedFunction, TranslateFamilies, poincare_service
from .second_order_service import LambdaPair, PeriodHom, SecondOrderService, second_order_service

__all__ = [
    "LambdaPair",
    "ModularSymbolService",
    "ModularSymbols",
    "PeriodHom",
    "PoincareSeries",
    "PoincareService",
    "SecondOrderService",
    "SeedFunction",
    "TranslateFamilies",
    "modular_symbol_service",
    "poincare_service",
    "second_order_service",
]
