"""Bipartite (two-colorable) triangle and tetrahedral meshes.

Build or load a mesh, refine it with the bipartite gridding so that its
element graph becomes two-colorable, verify that with two independent tests,
and score element shape quality.
"""

from .bipartite import (
    CharacterizationResult,
    ElementColoring,
    MeshGraph,
    OddCycleWitness,
    adjacency_graph,
    characterization_check,
    characterization_check_2d,
    characterization_check_3d,
    is_bipartite,
    two_color,
)
from .errors import (
    DegenerateElement,
    DuplicateElement,
    EmptyMesh,
    IndexBaseMismatch,
    InvalidParam,
    MeshError,
    NonConforming,
    OutOfRangeIndex,
    ParseError,
)
from .mesh import TetMesh, TriMesh, build_tet_mesh, build_tri_mesh, check_conformity, classify, euler_characteristic
from .quality import mesh_quality, tet_quality, triangle_quality, verify_deterioration_bound, verify_shape_inequalities
from .refine import (
    bipartite_grid_tet,
    bipartite_grid_triangle,
    bipartite_refine,
    bipartite_refine_2d,
    bipartite_refine_3d,
    bipartite_then_red,
    red_refine_2d,
)
from .samples import sample_mesh

__version__ = "0.1.0"

__all__ = [
    "CharacterizationResult",
    "ElementColoring",
    "MeshGraph",
    "OddCycleWitness",
    "adjacency_graph",
    "characterization_check",
    "characterization_check_2d",
    "characterization_check_3d",
    "is_bipartite",
    "two_color",
    "DegenerateElement",
    "DuplicateElement",
    "EmptyMesh",
    "IndexBaseMismatch",
    "InvalidParam",
    "MeshError",
    "NonConforming",
    "OutOfRangeIndex",
    "ParseError",
    "bipartite_grid_tet",
    "bipartite_grid_triangle",
    "bipartite_refine",
    "bipartite_refine_2d",
    "bipartite_refine_3d",
    "bipartite_then_red",
    "red_refine_2d",
    "TetMesh",
    "TriMesh",
    "build_tet_mesh",
    "build_tri_mesh",
    "check_conformity",
    "classify",
    "euler_characteristic",
    "mesh_quality",
    "tet_quality",
    "triangle_quality",
    "verify_deterioration_bound",
    "verify_shape_inequalities",
    "sample_mesh",
]
