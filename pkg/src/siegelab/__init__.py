"""High-precision laboratory for quadratic Siegel disks.

Modules:
  contfrac   continued fractions, approximants, the small-divisor sum
  explosion  parabolic cycle tracking and collision radii
  conformal  hyperbolic densities, slit maps, conformal radius bounds
  siegel     linearization series and the Siegel disk radius
  ladder     good approximants, nested parameter disks, the global budget
  cli        batch command line front end
"""

from .contfrac import (ApproximantTable, BrunoEvaluation, ContinuedFraction,
                       QuadraticIrrational, approximants, appendix_constants,
                       bruno_partial, cf_expand, parse_alpha, parse_cf_literal)
from .siegel import TheoremReport, siegel_radius, theorem_check

__all__ = [
    "ApproximantTable", "BrunoEvaluation", "ContinuedFraction",
    "QuadraticIrrational", "approximants", "appendix_constants",
    "bruno_partial", "cf_expand", "parse_alpha", "parse_cf_literal",
    "TheoremReport", "siegel_radius", "theorem_check",
]

__version__ = "0.1.0"
