"""flatklein: exact geometry of flat n-dimensional Klein bottles.

Quotient metric and lifts (`klein_space`), cut-locus polytopes
(`cut_polytope`), parameter-space stratification (`stratification`),
geodesic planning (`planner`), independent brute-force/certification
oracles (`oracle`), and a command-line interface (`cli`).
"""

from .klein_space import (
    RatScalar,
    LiftPoint,
    KleinPoint,
    DeckElement,
    apply_deck,
    as_point,
    canonicalize,
    equivalent,
    format_rat,
    geodesic_path,
    minimal_lifts,
    neighbor_set,
    project,
    rat,
    squared_distance,
)
from .cut_polytope import (
    CutPolytope,
    Vertex,
    Face,
    cut_polytope,
    delta,
    face_equivalences,
    face_lattice,
    halfspaces,
    k_value,
    vertex_equivalences,
    vertices,
)
from .oracle import (
    CertificationReport,
    brute_distance,
    brute_geodesic_count,
    brute_minimal_images,
    brute_vertices,
    certify_vertices,
)
from .planner import FaceKey, PlanResult, partition_index, plan, representatives
from .stratification import (
    DomainDescriptor,
    SignVector,
    Stratum,
    catalog,
    classify,
    same_stratum,
    stratum_dimension,
)

__all__ = [
    "RatScalar",
    "LiftPoint",
    "KleinPoint",
    "DeckElement",
    "apply_deck",
    "as_point",
    "canonicalize",
    "equivalent",
    "format_rat",
    "geodesic_path",
    "minimal_lifts",
    "neighbor_set",
    "project",
    "rat",
    "squared_distance",
    "CutPolytope",
    "Vertex",
    "Face",
    "cut_polytope",
    "delta",
    "face_equivalences",
    "face_lattice",
    "halfspaces",
    "k_value",
    "vertex_equivalences",
    "vertices",
    "CertificationReport",
    "brute_distance",
    "brute_geodesic_count",
    "brute_minimal_images",
    "brute_vertices",
    "certify_vertices",
    "FaceKey",
    "PlanResult",
    "partition_index",
    "plan",
    "representatives",
    "DomainDescriptor",
    "SignVector",
    "Stratum",
    "catalog",
    "classify",
    "same_stratum",
    "stratum_dimension",
]

__version__ = "0.1.0"
