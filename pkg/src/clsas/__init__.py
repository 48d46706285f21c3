"""Exact-arithmetic verification, classification and affinization of
compatible left-symmetric structures on high rank Witt and Virasoro algebras.
"""

from .scalars import (
    ParseError,
    Polynomial,
    Scalar,
    ScalarError,
    SingularEvaluation,
    Symbols,
    parse_scalar,
    scalar_sum,
)
from .groups import embed, is_in_group, window
from .structures import (
    Aff,
    Central,
    CustomTable,
    Element,
    ModuleVec,
    SpecError,
    StructureSpec,
    TableDomainError,
    VAlphaTheta,
    VGammaLambda,
    VirTheta,
    WAlphaMuZeta,
    Witt,
    bracket,
    build_spec,
    load_spec,
    multiply,
    read_spec_config,
    to_table,
    validate_spec,
    witt,
)
from .report import Counterexample, Report
from .verifier import (
    AModule,
    BModule,
    ModuleSpec,
    VModule,
    check_cocycle,
    check_graded_equations,
    check_left_symmetric,
    check_module,
    check_nongraded_equations,
    check_novikov,
    check_pair_identities,
    check_sub_adjacent,
)
from .classifier import (
    CocycleSolution,
    FitResult,
    are_isomorphic,
    identify,
    solve_cocycle,
)
from .affinization import AffElement, aff, affine_bracket, check_jacobi

__version__ = "0.1.0"
