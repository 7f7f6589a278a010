"""Common zeros of Laplace eigenfunctions: spheres, circles, tori and group orbits."""
from .errors import (ConvergenceError, CriticalLevelError, DegenerateError, DomainError, NodalLabError,
                     ParallelAxesError, SearchFailure, TheoremViolation)
from .harmonics import Eigenfunction, evaluate, zonal_from_axis
from .legendre import legendre_zeros
from .mesh import TriMesh, icosphere, torus_mesh

__version__ = "0.1.0"
