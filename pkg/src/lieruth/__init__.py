"""Lie algebroids on coordinate charts, representations up to homotopy and the Weil algebra,
with every identity checked in exact rational arithmetic."""

from .symcore import Poly, parse_poly
from .algebroid import AConnection, ChartAlgebroid, Connection, curvature_identities
from .ruth import Ruth, RuthMorphism, adjoint
from .weil import brst_compare, build_weil, im_form_check, weil_cohomology, weil_d

__version__ = "0.1.0"

__all__ = ["Poly", "parse_poly", "AConnection", "ChartAlgebroid", "Connection", "curvature_identities", "Ruth",
           "RuthMorphism", "adjoint", "brst_compare", "build_weil", "im_form_check", "weil_cohomology", "weil_d"]
