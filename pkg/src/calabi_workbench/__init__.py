"""Numerical workbench for the area/diastole inequality on the Calabi sphere.

The sphere is modelled as the quotient of the flat hexagonal torus by a
rotation of order three; metrics in its conformal class are
``g = exp(2u) g_c`` with ``u`` a finite trigonometric series.
"""
from .cover import ConformalFactorField, load_field, parse_field, random_field, sphere_area
from .kernels import BACKEND
from .lattice import HEX, LatticeBasis, PlanePoint, TorusPoint, loewner_check, reduce_mod_hex
from .reports import FAILS, HOLDS, OUTSIDE, InequalityReport
from .sweep import sweep_cycle, trapezoid_domains
from .verify import VerifySettings, averaged_inequality_check, neighborhood_certificate, theorem_check

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConformalFactorField",
    "FAILS",
    "HEX",
    "HOLDS",
    "InequalityReport",
    "LatticeBasis",
    "OUTSIDE",
    "PlanePoint",
    "TorusPoint",
    "VerifySettings",
    "averaged_inequality_check",
    "load_field",
    "loewner_check",
    "neighborhood_certificate",
    "parse_field",
    "random_field",
    "reduce_mod_hex",
    "sphere_area",
    "sweep_cycle",
    "theorem_check",
    "trapezoid_domains",
]
