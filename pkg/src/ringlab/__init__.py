"""ringlab: exact Lie-theoretic structure of finite associative algebras
over prime fields, with a theorem-audit harness."""

__version__ = "0.1.0"

from .errors import Budgets, BudgetExceeded
from .fields import FMatrix, FVector, PrimeField, field_elements, rref, solve_linear
from .algebras import (
    Algebra,
    AlgebraElement,
    Unitization,
    bracket,
    direct_sum,
    matrix_algebra,
    mul,
    opposite,
    quotient,
    triangular_algebra,
    truncated_poly,
    unitize,
    zero_mult_algebra,
)
from .subspaces import (
    Subspace,
    TowerRecord,
    bracket_space,
    center,
    commutator_subspace,
    contains,
    derived_tower,
    ideal_closure,
    intersect,
    is_full,
    is_fully_noncentral,
    is_lie_ideal,
    is_rr_submodule,
    is_two_sided_ideal,
    leq,
    product_space,
    span,
    subspace_sum,
    t_of,
    t_tower,
    whole_space,
    zero_space,
)

__all__ = [name for name in dir() if not name.startswith("_")]
