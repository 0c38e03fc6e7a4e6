"""capmarkov: numerical verification of the sharp capacitary derivative
bound for polynomials on plane continua."""

from .capacity import CapacityEstimate, capacity, dn_estimate, dn_ladder, dn_select
from .deform import (
    DeformationGrid,
    F_functional,
    SubharmonicityReport,
    family_shift,
    scan,
    subharmonicity_test,
)
from .levelset import (
    BoundarySample,
    ConnectivityResult,
    LevelSetComponent,
    boundary_points,
    components,
    extract_components,
    is_connected,
    sup_on_boundary,
    sup_on_component,
)
from .markov import (
    ExtremalCertificate,
    MarkovReport,
    SweepResult,
    bound,
    certify_extremal,
    corollary_bound,
    normalize_pair,
    pommerenke_bound,
    quotient,
    sweep_random,
    verify_corollary,
    verify_theorem1,
    verify_theorem2,
    verify_theoremA,
)
from .poly import Poly, chebyshev, critical_points, critical_values, parse_poly, roots
from .sets import Cloud, Disc, Polyline, Segment, check_diam_cap, diameter, parse_set

__version__ = "0.1.0"

__all__ = [
    "BoundarySample",
    "CapacityEstimate",
    "Cloud",
    "ConnectivityResult",
    "DeformationGrid",
    "Disc",
    "ExtremalCertificate",
    "F_functional",
    "LevelSetComponent",
    "MarkovReport",
    "Poly",
    "Polyline",
    "Segment",
    "SubharmonicityReport",
    "SweepResult",
    "bound",
    "boundary_points",
    "capacity",
    "certify_extremal",
    "chebyshev",
    "check_diam_cap",
    "components",
    "corollary_bound",
    "critical_points",
    "critical_values",
    "diameter",
    "dn_estimate",
    "dn_ladder",
    "dn_select",
    "extract_components",
    "family_shift",
    "is_connected",
    "normalize_pair",
    "parse_poly",
    "parse_set",
    "pommerenke_bound",
    "quotient",
    "roots",
    "scan",
    "subharmonicity_test",
    "sup_on_boundary",
    "sup_on_component",
    "sweep_random",
    "verify_corollary",
    "verify_theorem1",
    "verify_theorem2",
    "verify_theoremA",
]
