"""In-forest matrices of weighted digraphs and what they compute.

The forest weights and forest matrices of a digraph come from a single
trace recursion on its Laplacian (:func:`forest_spectrum`).  From them the
package derives the eigenprojection, characteristic polynomial and
eigenvectors, group and Moore-Penrose inverses, dense in-forest matrices
and Markov-chain long-run matrices.  :mod:`inforest.oracle` recomputes the
same quantities by exhaustive enumeration for verification.
"""

from .errors import (
    DegenerateGraphError,
    DimensionError,
    InForestError,
    InputError,
    MatrixOverflowError,
    MultichainError,
    NoEigenvectorError,
    NumericalError,
    NumericalInstabilityError,
    RootFindingError,
    SingularMatrixError,
    SizeLimitError,
)
from .forest import ForestSpectrum, faddeev_recursion, forest_spectrum
from .graph import WeightedDigraph, forest_dimension, laplacian, parse_edge_list

__all__ = [
    "DegenerateGraphError",
    "DimensionError",
    "ForestSpectrum",
    "InForestError",
    "InputError",
    "MatrixOverflowError",
    "MultichainError",
    "NoEigenvectorError",
    "NumericalError",
    "NumericalInstabilityError",
    "RootFindingError",
    "SingularMatrixError",
    "SizeLimitError",
    "WeightedDigraph",
    "faddeev_recursion",
    "forest_dimension",
    "forest_spectrum",
    "laplacian",
    "parse_edge_list",
]
