"""
구간 사상: 기본 타입, 켤레 커널, 패밀리, 궤도
"""

from .base import (
    BoundaryTag,
    Branch,
    MapKind,
    OpenInterval,
    Orientation,
    PiecewiseMap,
    TagCheck,
    verify_boundary_tags,
)
from .chart import InvariantDensity, TentChart
from .families import make_chebyshev_map, make_f_alpha, make_g_alpha, make_g_b, make_tent_map, tent
from .kernel import ChebyshevConjugacy, ConjugacyKernel
from .orbit import Orbit, generate_orbit, iterate

__all__ = [
    "BoundaryTag",
    "Branch",
    "ChebyshevConjugacy",
    "ConjugacyKernel",
    "InvariantDensity",
    "MapKind",
    "OpenInterval",
    "Orbit",
    "Orientation",
    "PiecewiseMap",
    "TagCheck",
    "TentChart",
    "generate_orbit",
    "iterate",
    "make_chebyshev_map",
    "make_f_alpha",
    "make_g_alpha",
    "make_g_b",
    "make_tent_map",
    "tent",
    "verify_boundary_tags",
]
