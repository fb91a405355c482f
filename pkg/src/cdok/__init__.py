"""Color distance oracles on integer arrays.

Exact and (1+eps)-approximate color-to-color proximity queries over colored
points, a multi-color oracle over laminar color hierarchies, a text index
answering closest-co-occurrence pattern queries, and min-plus product
harnesses that cross-check the oracles against direct computation.
"""

from ._kernels import ACTIVE_BACKEND, HAVE_NUMBA
from .acdo import APPROXIMATE, EXACT, CdoOracle, QueryStats
from .amcdoch import HierarchyOracle
from .core import (INF, ColoredPointSet, ColorHierarchy, DistanceAnswer,
                   HierarchyViolation, normalize, validate_hierarchy)
from .errors import (CdokError, DimensionError, InvalidInput, InvalidParameter,
                     InvalidRange, OracleFormatError, PatternNotFound, UnknownColor)
from .estar import EStarMatrix, EStarParams, classify_colors, construct_estar
from .nns import NnsIndex
from .reductions import (MinPlusInstance, minplus_direct, reduce_to_cdo_randomized,
                         reduce_to_mcdo)
from .rmq2d import Rmq2dIndex
from .rnns import RnnsIndex
from .snippets import TextIndex, build_index

__version__ = "0.1.0"

__all__ = [
    "ACTIVE_BACKEND", "HAVE_NUMBA", "APPROXIMATE", "EXACT", "INF",
    "CdoOracle", "QueryStats", "HierarchyOracle", "ColoredPointSet",
    "ColorHierarchy", "DistanceAnswer", "HierarchyViolation", "normalize",
    "validate_hierarchy", "CdokError", "DimensionError", "InvalidInput",
    "InvalidParameter", "InvalidRange", "OracleFormatError", "PatternNotFound",
    "UnknownColor", "EStarMatrix", "EStarParams", "classify_colors",
    "construct_estar", "NnsIndex", "MinPlusInstance", "minplus_direct",
    "reduce_to_cdo_randomized", "reduce_to_mcdo", "Rmq2dIndex", "RnnsIndex",
    "TextIndex", "build_index",
]
