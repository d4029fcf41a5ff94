"""Low-diameter decompositions with strong diameter guarantees, plus the checks that back them."""

from .backbone import (BackboneClustering, PathNet, build_backbone_clustering, build_kpath_ldd,
                       path_net, refine)
from .bbg import BlurResult, blur
from .clustering import Cluster, Clustering
from .generators import generate
from .graph import GraphError, SsspResult, WeightedGraph, ball, connected_components, exact_sssp
from .ldc import DriverConfig, IterationCapError, build_ldc, build_ldd, measure_cut_rates
from .oracle import Oracle, VirtualSourceSpec, approx_set_sssp
from .padded import CoveringError, PaddedDecomposition, pseudo_padded_decompose
from .sampling import TexpParams, make_rng, pick_uniform, sample_texp
from .separator import WeakSeparator, sample_weak_separator, verify_weak_separation
from .verify import RunStats, audit_clustering, ci_cut_rate, wilson_interval

__version__ = "0.1.0"
