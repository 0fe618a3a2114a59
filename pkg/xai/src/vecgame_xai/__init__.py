"""Post-hoc explainability over race feature tables."""

__version__ = "0.1.0"

from .columns import ColumnError, ColumnInfo, parse_column, validate_header
from .frame import FeatureFrame
from .heatmap import heatmap_export, heatmap_grid
from .importance import ImportanceReport, importance_report, shannon_entropy
from .surrogate import DegenerateTargetError, SurrogateModel, train_surrogate

__all__ = [
    "ColumnError",
    "ColumnInfo",
    "DegenerateTargetError",
    "FeatureFrame",
    "ImportanceReport",
    "SurrogateModel",
    "heatmap_export",
    "heatmap_grid",
    "importance_report",
    "parse_column",
    "shannon_entropy",
    "train_surrogate",
    "validate_header",
]
