from app.services.opalgebra.generators import (
    AXES,
    DEFAULT_TABLE,
    CommutationTable,
    Generator,
    Kind,
    Monomial,
    Sector,
    gen,
)
from app.services.opalgebra.operator_expr import (
    OperatorExpr,
    add,
    adjoint,
    commutator,
    linear_combination,
    mul,
    normal_form,
    substitute_params,
)
from app.services.opalgebra.param_scalar import I, ONE, ZERO, PARAMETER_NAMES, ParamScalar, rational

__all__ = [
    "AXES",
    "DEFAULT_TABLE",
    "CommutationTable",
    "Generator",
    "Kind",
    "Monomial",
    "Sector",
    "gen",
    "OperatorExpr",
    "add",
    "adjoint",
    "commutator",
    "linear_combination",
    "mul",
    "normal_form",
    "substitute_params",
    "I",
    "ONE",
    "ZERO",
    "PARAMETER_NAMES",
    "ParamScalar",
    "rational",
]
