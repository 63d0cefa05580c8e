"""BHV tree space: Newick input/output, split algebra and geodesics."""

from .gtp import GeodesicSupport, Leg, bhv_distance, bhv_point, gtp_geodesic, min_weight_vertex_cover
from .newick import parse_newick, read_newick_file, serialize_newick
from .space import TreeSpace, tree_ray_point
from .tree import PhyloTree, Split, compatible, split_from_labels

__all__ = [
    "GeodesicSupport", "Leg", "PhyloTree", "Split", "TreeSpace", "bhv_distance",
    "bhv_point", "compatible", "gtp_geodesic", "min_weight_vertex_cover",
    "parse_newick", "read_newick_file", "serialize_newick", "split_from_labels",
    "tree_ray_point",
]
