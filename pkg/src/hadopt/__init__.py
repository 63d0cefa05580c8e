"""Busemann-subgradient optimisation on Hadamard spaces."""

from . import oracles, presets, reference, solvers, spaces, treespace
from .errors import (DomainError, ExtensionError, HadoptError, NewickError,
                     SpaceMismatchError, UnsupportedSpaceError)
from .oracles import (BusemannSubgradient, DistBall, DistHoroball, DistPower, Huber,
                      MaxOfDistances, Objective, eval_component, eval_objective,
                      subgrad_component, subgrad_distance)
from .solvers import (WHOLE, Ball, Explicit, Harmonic, IndexSampler, RunTrace, Theory,
                      complexity_bound, cyclic_proximal_median, incremental_median,
                      incremental_subgradient, median_setup, pmean_setup,
                      stochastic_median, stochastic_subgradient)
from .presets import EXAMPLE7_1, EXAMPLE7_2, PRESETS
from .spaces import (ZERO, Cone, ConePoint, Direction, Euclidean, EuclideanPoint, ExtensionPolicy,
                     Hyperbolic, HyperbolicPoint, Spider, SpiderPoint, TowardPoint)
from .treespace import PhyloTree, TreeSpace, bhv_distance, parse_newick, serialize_newick

__version__ = "0.1.0"
