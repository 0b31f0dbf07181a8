"""Signed normalized geodesic soft labels for volumetric segmentation.

Turns binary masks into smooth signed regression targets built from
geodesic distances, provides the matching focal L1 loss with analytic
gradients, overlap/surface metrics, simple volume I/O, and a synthetic
end-to-end training study.
"""

from .boundary import BoundarySet, extract_boundary, inner_boundary_mask, outer_boundary_mask
from .geodesic import (
    GeoConfig,
    GeodesicMap,
    SeedSet,
    edge_weight,
    geodesic_dijkstra,
    geodesic_raster,
)
from .grid import (
    GridIndex,
    Mask,
    VALID_CONNECTIVITIES,
    Volume,
    connectivity_offsets,
    neighbors,
    normalize_minmax,
)
from .io import (
    NiftiFormatError,
    SvolFormatError,
    load_volume,
    read_nifti,
    read_svol,
    read_svol_meta,
    sniff_format,
    write_svol,
)
from .loss import LossConfig, LossReport, focal_l1, l1_loss, l2_loss, pairwise_sum, tanh_map
from .metrics import MetricReport, compute_metrics, dice, hd95, iou, volume_diagonal_mm
from .sing import DegenerateMaskWarning, SingMap, SingParams, sing_transform, threshold_mask
from .trainer import (
    EvalAggregate,
    PatchModel,
    SyntheticDataset,
    TrainConfig,
    TrainResult,
    evaluate,
    gen_synthetic,
    make_targets,
    split_indices,
    train,
    write_eval_csv,
    write_history_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BoundarySet",
    "DegenerateMaskWarning",
    "EvalAggregate",
    "GeoConfig",
    "GeodesicMap",
    "GridIndex",
    "LossConfig",
    "LossReport",
    "Mask",
    "MetricReport",
    "NiftiFormatError",
    "PatchModel",
    "SeedSet",
    "SingMap",
    "SingParams",
    "SvolFormatError",
    "SyntheticDataset",
    "TrainConfig",
    "TrainResult",
    "VALID_CONNECTIVITIES",
    "Volume",
    "compute_metrics",
    "connectivity_offsets",
    "dice",
    "edge_weight",
    "evaluate",
    "extract_boundary",
    "focal_l1",
    "gen_synthetic",
    "geodesic_dijkstra",
    "geodesic_raster",
    "hd95",
    "inner_boundary_mask",
    "iou",
    "l1_loss",
    "l2_loss",
    "load_volume",
    "make_targets",
    "neighbors",
    "normalize_minmax",
    "outer_boundary_mask",
    "pairwise_sum",
    "read_nifti",
    "read_svol",
    "read_svol_meta",
    "sing_transform",
    "sniff_format",
    "split_indices",
    "tanh_map",
    "threshold_mask",
    "train",
    "volume_diagonal_mm",
    "write_eval_csv",
    "write_history_csv",
    "write_svol",
]
