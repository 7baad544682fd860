"""Realizability, construction and gluing of hyperbolic tetragonal
trapezohedra with prescribed dihedral angles."""

from .errors import (
    DegenerateCircle,
    HoledInput,
    InvalidStart,
    NegativeHeight,
    NoConvergence,
    NotRealizable,
    TrapezoError,
)
from .region import (
    CUBE_ANGLE,
    DOUBLE_POINT_COS,
    AngleQuad,
    Classification,
    CosQuad,
    Kind,
    PathCrossing,
    ShapeParams,
    angles_of,
    angles_of_shape,
    classify,
    cos_quad,
    in_universal_cube,
    phi,
    realizable_edges,
    solve_shape,
    trace_path,
)

__version__ = "0.1.0"
