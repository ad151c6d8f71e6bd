"""Dynamic-community tracking for snapshot networks.

Static communities from every snapshot become vertices of a similarity
network; single-phase local modularity optimization groups them into
dynamic communities without any similarity threshold, and the grouped
timelines yield birth/death/growth/contraction/merge/split events.
"""

__version__ = "0.1.0"

from .graphs import (  # noqa: F401
    FormatError,
    Graph,
    Partition,
    SnapshotSeries,
    load_partitions,
    load_snapshots,
    save_partitions,
    save_snapshots,
    weighted_degree,
)
from .louvain import LouvainResult, detect, modularity, modularity_gain, pick_level  # noqa: F401
from .simnet import (  # noqa: F401
    CommunityRef,
    SimilarityNetwork,
    build,
    jaccard,
    overlap_coefficient,
)
from .tracker import DynamicCommunity, track, track_partitions  # noqa: F401
from .events import EventRecord, merge_split_sets, reconstruct, reconstruct_all  # noqa: F401
