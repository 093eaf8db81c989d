"""Exact fusion-ring, tilting and small-quantum-group computations at roots of unity."""

from .cyclo import CyclotomicNumber, qint
from .fusion import FusionElement, FusionTable, fusion_coefficients, fusion_table, sl2_fusion_closed_form
from .rootdata import RootDatum, root_datum

__all__ = [
    "CyclotomicNumber",
    "qint",
    "RootDatum",
    "root_datum",
    "FusionElement",
    "FusionTable",
    "fusion_coefficients",
    "fusion_table",
    "sl2_fusion_closed_form",
]

__version__ = "0.1.0"
