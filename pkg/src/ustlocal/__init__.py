"""Uniform spanning trees on dense regular graphs: samplers, effective
resistance, and the local limit of the tree around a uniform vertex."""
from . import electric, graph_core, local_stats, ust_sampler
from .errors import UstError

__version__ = "0.1.0"

__all__ = ["electric", "graph_core", "local_stats", "ust_sampler", "UstError"]
