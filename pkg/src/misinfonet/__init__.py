"""Topology classification, SIR misinformation spread and percolation-cluster
immunization on social graphs."""

__version__ = "0.1.0"

from .graph import (
    DegreeHistogram,
    Graph,
    GraphError,
    average_clustering,
    average_path_length,
    bfs_distances,
    connected_components,
    degree,
    degree_histogram,
    from_edge_list,
    induced_subgraph,
    local_clustering,
    to_edge_list,
)
from .generators import (
    GeneratorParams,
    gen_barabasi_albert,
    gen_erdos_renyi,
    gen_erdos_renyi_mean_degree,
    gen_watts_strogatz,
)
from .classifier import FitResult, TopologyReport, classify, expected_features, fit_poisson, fit_power_law
from .epidemic import EpidemicParams, EpidemicTrace, evaluate_immunization, run_ensemble, simulate_sir
from .percolation import high_clustering_cluster, isolation_metric, percolation_sweep
