"""Content-based similarity search with coordinated visual-analytics views."""

from .dataset import Dataset, FeatureVector, get_row, load_dataset, page_rows, serialize
from .errors import (
    ConflictError,
    ContractError,
    EngineError,
    IntegrityError,
    NotFoundError,
    ParseError,
    UnsupportedError,
)
from .fastmap import Projection3D, project, projection_to_csv
from .index import (
    QuerySpec,
    QueryStats,
    ResultSet,
    VpTree,
    build_vptree,
    knn_scan,
    knn_tree,
    query_stats,
    range_scan,
)
from .metrics import (
    MetricDescriptor,
    MetricRegistry,
    city_block,
    distance,
    euclidean,
    exp_weighted,
    minkowski,
    validate_axioms,
    weighted_minkowski,
)
from .workspace import Session, Workspace, load_session, result_to_csv, save_session

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "FeatureVector",
    "get_row",
    "load_dataset",
    "page_rows",
    "serialize",
    "ConflictError",
    "ContractError",
    "EngineError",
    "IntegrityError",
    "NotFoundError",
    "ParseError",
    "UnsupportedError",
    "Projection3D",
    "project",
    "projection_to_csv",
    "QuerySpec",
    "QueryStats",
    "ResultSet",
    "VpTree",
    "build_vptree",
    "knn_scan",
    "knn_tree",
    "query_stats",
    "range_scan",
    "MetricDescriptor",
    "MetricRegistry",
    "city_block",
    "distance",
    "euclidean",
    "exp_weighted",
    "minkowski",
    "validate_axioms",
    "weighted_minkowski",
    "Session",
    "Workspace",
    "load_session",
    "result_to_csv",
    "save_session",
]
