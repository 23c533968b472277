"""Coulomb wave functions F, G, H(+/-) for complex l, eta, rho.

Two backends:

* :func:`coulwkb.wkbcore.wkb_quad` -- closed-form uniform (Airy-type) WKB
  approximation, accurate to ~1% for sizeable eta and exact in the
  Wronskian.
* :func:`coulwkb.exactref.exact_quad` -- exact values from power series,
  asymptotic expansions and direct ODE integration.

:mod:`coulwkb.contour` evaluates the WKB formulas branch-continuously along
complex contours; :mod:`coulwkb.cli` provides the ``coulwkb`` command.
"""

from .airy import AiryQuad, airy_quad
from .contour import BranchState, ContourPath, continue_quad
from .errors import CoulwkbError
from .exactref import (
    NormalizationConstants,
    SeriesDiagnostics,
    exact_quad,
    exact_quad_grid,
    f_series,
    h_asymptotic,
    norm_constants,
    ode_propagate,
)
from .wkbcore import (
    ComplexParams,
    CoulombQuad,
    PhiJet,
    TurningGeometry,
    h_from_quad,
    phi_jet,
    phi_residual,
    turning_geometry,
    wkb_quad,
)

__version__ = "0.1.0"

__all__ = [
    "AiryQuad",
    "BranchState",
    "ComplexParams",
    "ContourPath",
    "CoulombQuad",
    "CoulwkbError",
    "NormalizationConstants",
    "PhiJet",
    "SeriesDiagnostics",
    "TurningGeometry",
    "airy_quad",
    "continue_quad",
    "exact_quad",
    "exact_quad_grid",
    "f_series",
    "h_asymptotic",
    "h_from_quad",
    "norm_constants",
    "ode_propagate",
    "phi_jet",
    "phi_residual",
    "turning_geometry",
    "wkb_quad",
]
