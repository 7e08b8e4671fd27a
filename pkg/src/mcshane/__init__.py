"""Numerical laboratory for McShane-type identities in rank-one geometry.

Cross-ratios on the boundaries of real and complex hyperbolic space, gap
functions of pants decompositions, Farey/Markov enumeration of simple closed
curves on the torus, and summation engines that verify the cusp, boundary,
quasi-Fuchsian, C-Fuchsian SU(2,1), and mapping-torus identities.
"""

from . import algebra, crossratio, enumeration, identity, models, pants
from .algebra import INF, Isometry, herm_product, sl2_complex_length, su21_eigendata
from .crossratio import BoundaryPoint, cx_crossratio, period, pp_invariants, sl2_crossratio
from .enumeration import Representation, Slope, parse_rep_spec
from .identity import (
    ExpansionPolicy,
    IdentityReport,
    sum_boundary_identity,
    sum_cusp_identity,
    sum_mapping_torus,
)

__version__ = "0.1.0"
