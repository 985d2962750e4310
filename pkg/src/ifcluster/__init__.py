"""Interference-minimizing clustering of base-stations and users."""

from .assign import assign_users, dp_similarity_clustering, prune_bs
from .dph import dph_cluster, dph_cluster_naive
from .dynamic import DynamicClusterer, apply_event
from .errors import (
    ClusteringError,
    InstanceTooLargeError,
    ParameterError,
    StructureError,
    UndefinedRatioError,
)
from .generator import GeneratorConfig, Instance, generate
from .metrics import class_cut, class_weight, tinf, tinf_value
from .model import BsPartition, ClusterSystem, WeightMatrix, validate_if_cluster
from .oracle import brute_force_optimal
from .similarity import GramTable, gram_init, gram_merge, rho
from .spectral import spectral_cluster

__version__ = "0.1.0"
