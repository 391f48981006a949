"""Equivariant K-stability and Kaehler-Ricci solitons for complexity-one
Fano torus actions, computed exactly from divisorial polytopes."""

from . import errors
from .exactgeom import (
    Polytope,
    Simplex,
    barycenter,
    face,
    hull,
    interior_lattice_points,
    lattice_distance,
    primitive,
    triangulate,
    volume,
)
from .divpol import (
    AffinePiece,
    DivisorialPolytope,
    FanoCertificate,
    FanoFailure,
    PLConcave,
    ProjPoint,
    ValidationReport,
    canonicalize,
    degree_function,
    divisorial_polytope,
    evaluate,
    fano_check,
    linearity_cells,
    mu_of_point,
    plconcave,
    support,
    validate,
)
from .pdiv import (
    Cone,
    PDivisor,
    TailedPolyhedron,
    degree,
    eval_pdiv,
    from_divpol,
    is_admissible,
    is_proper,
    pdivisor,
)
from .degen import (
    DegenerationCandidate,
    distinguished_point,
    enumerate_candidates,
    is_normal_fiber,
    special_fiber_polytope,
)
from .futaki import (
    DEFAULT_PRECISION,
    SolitonField,
    SolitonVerdict,
    Stability,
    StabilityVerdict,
    df_invariant,
    exp_moment,
    futaki_oracle_lattice_count,
    kstability_verdict,
    modified_df,
    solve_soliton_field,
    soliton_verdict,
)
from .symmetry import (
    AutomorphismPair,
    Mobius,
    box_lattice_automorphisms,
    find_automorphism_pairs,
    mobius,
    mobius_from_pairs,
    soliton_criteria,
)
from .io import InputDocument, parse_input, serialize
from .catalog import catalog, catalog_names

__version__ = "0.1.0"
