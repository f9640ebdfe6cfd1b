"""pqdtw: elastic product quantization for time series.

Compact codebook-based compression with DTW-compatible approximate
distances, structure-aware pre-alignment segmentation, and applications to
nearest-neighbour classification, hierarchical clustering and real-time
handwritten-symbol recognition.
"""

from .codec import (
    Codebook,
    asym_distance,
    asym_table,
    encode,
    encode_dataset,
    memory_report,
    reconstruct,
    sym_distance,
    train,
)
from .dba import ClusterModel, dba_barycenter, dba_kmeans
from .distance import (
    Envelope,
    dtw,
    euclidean,
    keogh_envelope,
    lb_keogh,
    lb_kim,
    nn_search_cascaded,
)
from .mining import (
    ClassificationResult,
    Dendrogram,
    adjusted_rand_index,
    agglomerative,
    cut_k,
    knn_classify,
    pairwise_matrix,
    rand_index,
)
from .segmentation import SegmentPlan, extract_segments, modwt_scale, plan_segments, segment_points
from .series import LabeledDataset, load_ucr_tsv, resample_linear, save_ucr_tsv, z_normalize
from .strokes import Stroke, preprocess, redistribute, smooth, to_angles

__version__ = "0.1.0"
