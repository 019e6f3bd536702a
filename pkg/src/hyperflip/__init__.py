"""Exact engine for level-k hypertriangulations of planar point sets.

Construction by coherent lifting or by aging level-1 triangulations, a
validator for the labeled-tiling conditions, the four geometric flip types,
flip-graph enumeration, and the constructive level-2 flip-connectivity
algorithm.  All geometry is exact rational.
"""

from .aging import (
    age_triangle,
    aging_overlap,
    build_level2,
    collapse_level2,
    star_convexity_witness,
    unage_triangle,
)
from .coherent import (
    AgingChainResult,
    CoherenceResult,
    GkzVector,
    HeightFunction,
    NonTriangularReport,
    coherent_aging_check,
    coherent_subdivision,
    gkz,
    is_coherent,
)
from .connectivity import (
    ConnectivityReport,
    FlipGraph,
    connect_level2,
    convex_position_check,
    coherent_subgraph_check,
    delaunay_triangulation,
    enumerate_all,
    flip_graph,
    level1_path,
    polygon_path,
)
from .errors import (
    BudgetExceeded,
    ColorUndefined,
    EdgeConditionViolated,
    FlipNotApplicable,
    GenericityError,
    GeometryError,
    HyperflipError,
    InvalidHypertriangulation,
    LabelError,
    PreconditionError,
    RegionTraceError,
)
from .flips import Direction, Flip, FlipType, apply_flip, enumerate_flips
from .geometry import (
    CCW,
    COLLINEAR,
    CW,
    Point2,
    Rational,
    SimplePolygon,
    convex_hull,
    ear_clip,
    orientation,
    pt,
    trace_regions,
    triangles_overlap,
)
from .hypertriangulations import (
    Color,
    Hypertriangulation,
    LabeledTriangle,
    ValidityReport,
    canonical_key,
    classify,
    complement,
    validate,
    white_regions,
)
from .points import (
    GenericityResult,
    GenericityTier,
    KFoldConfig,
    Label,
    PointConfig,
    genericity,
    k_fold_sums,
    label_text,
    perturb,
)

__version__ = "0.1.0"
