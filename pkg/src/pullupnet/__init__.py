"""Unfold closed polyhedral meshes into laser-cuttable pull-up nets."""

from .fabricate import (
    FabricateError,
    Hole,
    HolePlacementError,
    SvgStyle,
    build_plan,
    export_plan,
    export_svg,
    layout_holes,
)
from .foldsim import (
    FoldError,
    FoldState,
    RefoldReport,
    export_frames,
    fold_state_at,
    target_fold_angles,
    verify_refold,
)
from .mesh import (
    DegenerateGeometryError,
    Edge,
    EdgeGeometry,
    Mesh,
    MeshError,
    ParseError,
    PipelineError,
    UnsupportedEntryError,
    ValidationReport,
    Violation,
    edge_geometry,
    normalize_orientation,
    parse_netlib,
    parse_obj,
    serialize_netlib,
    serialize_obj,
    validate_manifold,
)
from .pullup import (
    AlgorithmDivergenceError,
    DanglingHoleError,
    JoinSet,
    PullupError,
    StringPath,
    compute_join_sets,
    default_lambda,
    plan_string_path,
    prune_join_sets,
)
from .unfold import (
    BudgetExceededError,
    CutTree,
    DegenerateDirectionError,
    Net,
    OverlapError,
    UnfoldConfig,
    UnfoldError,
    UnfoldResult,
    build_cut_tree,
    detect_overlaps,
    place_faces,
    split_mesh,
    unfold_single,
    unfold_with_fallback,
)

__version__ = "0.1.0"

__all__ = [
    "AlgorithmDivergenceError",
    "BudgetExceededError",
    "CutTree",
    "DanglingHoleError",
    "DegenerateDirectionError",
    "DegenerateGeometryError",
    "Edge",
    "EdgeGeometry",
    "FabricateError",
    "FoldError",
    "FoldState",
    "Hole",
    "HolePlacementError",
    "JoinSet",
    "Mesh",
    "MeshError",
    "Net",
    "OverlapError",
    "ParseError",
    "PipelineError",
    "PullupError",
    "RefoldReport",
    "StringPath",
    "SvgStyle",
    "UnfoldConfig",
    "UnfoldError",
    "UnfoldResult",
    "UnsupportedEntryError",
    "ValidationReport",
    "Violation",
    "build_cut_tree",
    "build_plan",
    "compute_join_sets",
    "default_lambda",
    "detect_overlaps",
    "edge_geometry",
    "export_frames",
    "export_plan",
    "export_svg",
    "fold_state_at",
    "layout_holes",
    "normalize_orientation",
    "parse_netlib",
    "parse_obj",
    "place_faces",
    "plan_string_path",
    "prune_join_sets",
    "serialize_netlib",
    "serialize_obj",
    "split_mesh",
    "target_fold_angles",
    "unfold_single",
    "unfold_with_fallback",
    "validate_manifold",
    "verify_refold",
    "__version__",
]
