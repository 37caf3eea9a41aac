"""
Classification of Galilei-covariant hybrid interaction terms.

An interaction Ĥ_int is admissible when it commutes with the hybrid
translations 𝒫 = k + λq, boosts G = M r − t k − t λq − m λp and rotations 𝒥.
The search runs over every normal-ordered monomial allowed by a
ClassificationConfig: the constraint system is assembled at generic numeric
masses with t = 0, solved exactly over the Gaussian rationals, and its null
space is lifted back to named scalar combinations with symbolic M and m, which
are then re-verified with symbolic M, m and t.

t = 0 is sufficient: the t-dependent part of [G, Ĥ_int] is −t[𝒫, Ĥ_int],
which vanishes once the translation rows are imposed.
"""

import copy
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import combinations, combinations_with_replacement
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from sympy.polys.domains import QQ_I

from app.core.config import settings
from app.core.exceptions import InvalidParameterError, NonHermitianOperatorError
from app.models.galilei_schemas import ClassificationConfig
from app.services.classify.exact_linear_algebra import (
    ReducedRowEchelon,
    SparseRow,
    null_space,
    row_echelon,
)
from app.services.galilei.algebra_verifier import verify_algebra
from app.services.galilei.representations import Representation, build_hybrid_rep, total_momentum
from app.services.opalgebra.generators import AXES, SYMBOL_TABLE, Generator, Kind, Monomial, monomial_key
from app.services.opalgebra.operator_expr import OperatorExpr, add, adjoint, commutator, linear_combination
from app.services.opalgebra.param_scalar import I, ONE, ParamScalar
from app.services.opalgebra.vectors import LP, LQ, K, P, Q, R, Vector, cross, dot, symmetrized_dot, vscale, vsub

logger = logging.getLogger(__name__)

MOMENTUM_ROW_PREFIX = "Ptot"
HALF = ParamScalar.gaussian(1) / 2


# ===== RESULT TYPES =====

@dataclass(frozen=True)
class ConservationFlags:
    conserves_momentum: bool
    commutes_with_q: bool
    commutes_with_p: bool

    @property
    def back_reaction(self) -> bool:
        """True when the term can move the classical observables."""
        return not (self.commutes_with_q and self.commutes_with_p)


@dataclass(frozen=True)
class AccelerationResult:
    components: Tuple[OperatorExpr, OperatorExpr, OperatorExpr]
    observable: bool
    lambda_generators: Tuple[str, ...] = ()


@dataclass(frozen=True)
class CandidateScalar:
    """A named rotation, translation and boost invariant built from u = r − q, w = k/M − p/m and λ."""

    label: str
    unicode_label: str
    operator: OperatorExpr
    degree: int
    order_key: Tuple[int, ...] = ()

    @property
    def hermitian(self) -> bool:
        return self.operator.is_hermitian()


@dataclass(frozen=True)
class InvariantElement:
    label: str
    unicode_label: str
    operator: OperatorExpr
    hermitian: bool
    symbolic: bool
    verified: bool
    flags: Optional[ConservationFlags] = None


@dataclass(frozen=True)
class ScalarReport:
    label: str
    unicode_label: str
    operator: OperatorExpr
    flags: ConservationFlags
    acceleration_observable: Optional[bool]


@dataclass(frozen=True)
class MomentumFilterCheck:
    """Dimensions of the momentum-conserving space computed two ways."""

    constraint_rows_dimension: int
    restricted_kernel_dimension: int

    @property
    def consistent(self) -> bool:
        return self.constraint_rows_dimension == self.restricted_kernel_dimension


@dataclass
class ConstraintSystem:
    basis: List[Monomial]
    row_keys: List[Tuple[str, Monomial]]
    rows: List[SparseRow]

    @property
    def ncols(self) -> int:
        return len(self.basis)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def invariance_rows(self) -> List[SparseRow]:
        return [row for key, row in zip(self.row_keys, self.rows) if not key[0].startswith(MOMENTUM_ROW_PREFIX)]

    def momentum_rows(self) -> List[SparseRow]:
        return [row for key, row in zip(self.row_keys, self.rows) if key[0].startswith(MOMENTUM_ROW_PREFIX)]

    def to_dense(self) -> List[List]:
        return [[row.get(c, QQ_I.zero) for c in range(self.ncols)] for row in self.rows]

    def to_numpy(self) -> np.ndarray:
        matrix = np.zeros((self.nrows, self.ncols), dtype=np.complex128)
        for i, row in enumerate(self.rows):
            for c, value in row.items():
                matrix[i, c] = complex(float(value.x), float(value.y))
        return matrix


@dataclass
class InvariantBasis:
    config: ClassificationConfig
    elements: List[InvariantElement]
    echelon: List[OperatorExpr]
    numeric_dimension: int
    monomial_count: int
    scalars: List[ScalarReport] = field(default_factory=list)
    momentum_check: Optional[MomentumFilterCheck] = None
    elapsed_seconds: float = 0.0

    @property
    def dimension(self) -> int:
        return len(self.elements)

    @property
    def matched(self) -> bool:
        """Every element was identified with named scalar combinations."""
        return all(element.symbolic for element in self.elements)

    @property
    def verified(self) -> bool:
        return all(element.verified for element in self.elements)

    def operators(self) -> List[OperatorExpr]:
        return [element.operator for element in self.elements]


# ===== MONOMIAL SEARCH SPACE =====

def building_block_generators(config: ClassificationConfig) -> List[Generator]:
    gens = []
    for symbol in config.building_blocks:
        sector, kind = SYMBOL_TABLE[symbol]
        gens.extend(Generator(sector, kind, axis) for axis in AXES)
    return sorted(gens)


def monomial_basis(config: ClassificationConfig) -> List[Monomial]:
    """All normal-ordered monomials within the degree bounds, identity first."""
    gens = building_block_generators(config)
    basis: List[Monomial] = []
    for degree in range(config.max_degree + 1):
        for combo in combinations_with_replacement(gens, degree):
            if sum(1 for g in combo if g.kind == Kind.LAMBDA_P) > config.max_lambda_p_degree:
                continue
            monomial: List[Tuple[Generator, int]] = []
            for g in combo:
                if monomial and monomial[-1][0] == g:
                    monomial[-1] = (g, monomial[-1][1] + 1)
                else:
                    monomial.append((g, 1))
            basis.append(tuple(monomial))
    logger.debug(f"Monomial basis: {len(basis)} monomials over {len(gens)} generators")
    return basis


# ===== CONSTRAINT SYSTEM =====

def _constraint_components(rep: Representation, conserve_momentum: bool) -> List[Tuple[str, OperatorExpr]]:
    components = []
    for label, vec in (("T", rep.translations), ("G", rep.boosts), ("J", rep.rotations)):
        components.extend((f"{label}{axis}", op) for axis, op in zip(AXES, vec))
    if conserve_momentum:
        components.extend(
            (f"{MOMENTUM_ROW_PREFIX}{axis}", op) for axis, op in zip(AXES, total_momentum())
        )
    return components


def _check_generic_masses(rep: Representation) -> None:
    masses = dict(rep.masses)
    for role, value in masses.items():
        if not value:
            raise InvalidParameterError(f"{role} mass is zero", field=role, value=value.to_dsl())
    if "quantum" in masses and "classical" in masses and masses["quantum"] == masses["classical"]:
        raise InvalidParameterError(
            "Quantum and classical masses must differ in the constraint system",
            field="masses",
            value=masses["quantum"].to_dsl(),
        )


def constraint_matrix(
    basis: Sequence[Monomial],
    rep: Representation,
    conserve_momentum: bool = False,
    max_workers: Optional[int] = None,
) -> ConstraintSystem:
    """Stack [X, b] for every generator component X and basis monomial b.

    Column j holds the normal-ordered coefficients of [X, b_j]; a coefficient
    vector c is a solution iff Σ c_j [X, b_j] = 0 for every X.

    Raises:
        InvalidParameterError: the representation still has symbolic
            coefficients, or its masses are zero or equal
    """
    if not rep.has_numeric_coefficients():
        raise InvalidParameterError(
            "Constraint system needs a representation with numeric masses and t",
            field="representation",
            value=rep.name,
        )
    _check_generic_masses(rep)
    components = _constraint_components(rep, conserve_momentum)
    component_rank = {label: i for i, (label, _) in enumerate(components)}
    workers = max_workers or settings.CLASSIFY_MAX_WORKERS

    def column(index: int) -> List[Tuple[Tuple[str, Monomial], object]]:
        candidate = OperatorExpr({basis[index]: 1})
        entries = []
        for label, op in components:
            for monomial, coeff in commutator(op, candidate).raw_terms().items():
                entries.append(((label, monomial), coeff.to_gaussian()))
        return entries

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(column, range(len(basis))))
    else:
        columns = [column(index) for index in range(len(basis))]

    by_row: Dict[Tuple[str, Monomial], SparseRow] = {}
    for index, entries in enumerate(columns):
        for key, value in entries:
            by_row.setdefault(key, {})[index] = value

    row_keys = sorted(by_row, key=lambda key: (component_rank[key[0]], monomial_key(key[1])))
    logger.info(f"Constraint system: {len(row_keys)} rows x {len(basis)} columns")
    return ConstraintSystem(basis=list(basis), row_keys=row_keys, rows=[by_row[key] for key in row_keys])


# ===== NAMED SCALARS =====

@dataclass(frozen=True)
class _BuildingVector:
    label: str
    unicode_label: str
    components: Vector
    is_lambda: bool


def _building_vectors(
    config: ClassificationConfig,
    masses: Tuple[Union[ParamScalar, str, int], Union[ParamScalar, str, int]],
) -> List[_BuildingVector]:
    M, m = (ParamScalar.coerce(value) for value in masses)
    blocks = set(config.building_blocks)
    vectors = []
    if {"r", "q"} <= blocks:
        vectors.append(_BuildingVector("(r-q)", "(r−q)", vsub(R(), Q()), False))
    if {"k", "p"} <= blocks:
        w = vsub(vscale(K(), ONE / M), vscale(P(), ONE / m))
        vectors.append(_BuildingVector("(k/M-p/m)", "(k/M−p/m)", w, False))
    if "lp" in blocks and config.max_lambda_p_degree >= 1:
        vectors.append(_BuildingVector("lp", "λp", LP(), True))
    if "lq" in blocks:
        vectors.append(_BuildingVector("lq", "λq", LQ(), True))
    return vectors


def _generating_invariants(vectors: List[_BuildingVector], hermitian: bool) -> List[CandidateScalar]:
    generators = []
    for a, b in combinations_with_replacement(vectors, 2):
        lambda_count = int(a.is_lambda) + int(b.is_lambda)
        if a is b:
            generators.append(CandidateScalar(
                label=f"{a.label}^2",
                unicode_label=f"{a.unicode_label}²",
                operator=dot(a.components, a.components),
                degree=2,
                order_key=(2, lambda_count, 0),
            ))
            continue
        product = symmetrized_dot if hermitian else dot
        generators.append(CandidateScalar(
            label=f"{a.label}.{b.label}",
            unicode_label=f"{a.unicode_label}·{b.unicode_label}",
            operator=product(a.components, b.components),
            degree=2,
            order_key=(2, lambda_count, 1),
        ))
    for a, b, c in combinations(vectors, 3):
        generators.append(CandidateScalar(
            label=f"{a.label}.({b.label}x{c.label})",
            unicode_label=f"{a.unicode_label}·({b.unicode_label}×{c.unicode_label})",
            operator=dot(a.components, cross(b.components, c.components)),
            degree=3,
            order_key=(3, int(a.is_lambda) + int(b.is_lambda) + int(c.is_lambda), 0),
        ))
    return generators


def _within_caps(op: OperatorExpr, config: ClassificationConfig) -> bool:
    return op.degree() <= config.max_degree and op.kind_degree(Kind.LAMBDA_P) <= config.max_lambda_p_degree


def candidate_scalars(
    config: Optional[ClassificationConfig] = None,
    masses: Tuple[Union[ParamScalar, str, int], Union[ParamScalar, str, int]] = ("M", "m"),
) -> List[CandidateScalar]:
    """Identity plus products of the generating invariants within the degree caps.

    Generating invariants are the dot products of u = r − q, w = k/M − p/m, λp
    (and λq when opted in) and their triple products. Products of several
    invariants are Hermitian-symmetrized when the config asks for it.
    """
    config = config or ClassificationConfig()
    vectors = _building_vectors(config, masses)
    generators = [
        g for g in _generating_invariants(vectors, config.require_hermitian)
        if g.degree <= config.max_degree
    ]
    candidates = [CandidateScalar("1", "𝟙", OperatorExpr.identity(), 0, (0, 0, 0))]
    factors = 1
    while generators and factors * min(g.degree for g in generators) <= config.max_degree:
        for combo in combinations_with_replacement(generators, factors):
            degree = sum(g.degree for g in combo)
            if degree > config.max_degree:
                continue
            if len(combo) == 1:
                candidate = combo[0]
            else:
                product = OperatorExpr.identity()
                for g in combo:
                    product = product * g.operator
                if config.require_hermitian:
                    product = add(product, adjoint(product)).scale(HALF)
                candidate = CandidateScalar(
                    label="".join(f"[{g.label}]" for g in combo),
                    unicode_label="".join(f"[{g.unicode_label}]" for g in combo),
                    operator=product,
                    degree=degree,
                    order_key=(degree, sum(g.order_key[1] for g in combo), 2),
                )
            if _within_caps(candidate.operator, config):
                candidates.append(candidate)
        factors += 1
    return sorted(candidates, key=lambda c: c.order_key)


# ===== FLAGS AND ACCELERATION =====

def element_flags(op: OperatorExpr) -> ConservationFlags:
    """[k + p, op], [q, op] and [p, op] component by component."""
    return ConservationFlags(
        conserves_momentum=all(commutator(x, op).is_zero for x in total_momentum()),
        commutes_with_q=all(commutator(x, op).is_zero for x in Q()),
        commutes_with_p=all(commutator(x, op).is_zero for x in P()),
    )


def conservation_flags(basis: InvariantBasis) -> InvariantBasis:
    """Attach momentum-conservation and back-reaction flags to every element."""
    basis.elements = [replace(element, flags=element_flags(element.operator)) for element in basis.elements]
    return basis


def acceleration_operator(h_int: OperatorExpr, rep: Optional[Representation] = None) -> AccelerationResult:
    """â = (i/m)[p̂, Ĥ_int], the quantum force on the classical particle.

    Raises:
        NonHermitianOperatorError: Ĥ_int is not Hermitian
    """
    if not h_int.is_hermitian():
        raise NonHermitianOperatorError(
            "Acceleration is only defined for Hermitian interaction terms",
            operator=h_int.to_dsl(),
        )
    rep = rep or build_hybrid_rep()
    factor = I / rep.mass("classical")
    components = tuple(commutator(p, h_int).scale(factor) for p in P())
    lambdas = sorted(
        {g for c in components for g in c.generators() if g.kind.is_lambda},
        key=lambda g: g.sort_key,
    )
    return AccelerationResult(
        components=components,
        observable=not lambdas,
        lambda_generators=tuple(g.to_dsl() for g in lambdas),
    )


def scalar_reports(candidates: Sequence[CandidateScalar]) -> List[ScalarReport]:
    reports = []
    for candidate in candidates:
        observable = None
        if candidate.hermitian:
            observable = acceleration_operator(candidate.operator).observable
        reports.append(ScalarReport(
            label=candidate.label,
            unicode_label=candidate.unicode_label,
            operator=candidate.operator,
            flags=element_flags(candidate.operator),
            acceleration_observable=observable,
        ))
    return reports


# ===== SOLVER =====

def invariance_residuals(op: OperatorExpr, rep: Representation) -> List[Tuple[str, OperatorExpr]]:
    """[X, op] for every translation, boost and rotation component X."""
    return [(label, commutator(x, op)) for label, x in _constraint_components(rep, conserve_momentum=False)]


def _verify_element(op: OperatorExpr, symbolic_rep: Representation) -> bool:
    if any(not residual.is_zero for _, residual in invariance_residuals(op, symbolic_rep)):
        return False
    if op.is_hermitian():
        return verify_algebra(build_hybrid_rep(interaction=op)).all_passed
    return True


def _coordinates(op: OperatorExpr, index: Mapping[Monomial, int]) -> Optional[SparseRow]:
    vector: SparseRow = {}
    for monomial, coeff in op.raw_terms().items():
        column = index.get(monomial)
        if column is None:
            return None
        vector[column] = coeff.to_gaussian()
    return vector


def _operator_from_vector(vector: SparseRow, basis: Sequence[Monomial]) -> OperatorExpr:
    return OperatorExpr({basis[c]: ParamScalar.from_gaussian(v) for c, v in vector.items()})


def _weighted_label(weight: ParamScalar, label: str) -> str:
    if weight == 1:
        return label
    if weight == -1:
        return f"-{label}"
    return f"({weight.to_dsl()})*{label}"


def _combine_labels(pairs: List[Tuple[ParamScalar, str]]) -> str:
    text = ""
    for weight, label in pairs:
        piece = _weighted_label(weight, label)
        if not text:
            text = piece
        elif piece.startswith("-"):
            text += f" - {piece[1:]}"
        else:
            text += f" + {piece}"
    return text


def _lift(
    kernel: ReducedRowEchelon,
    candidates: Sequence[CandidateScalar],
    basis: Sequence[Monomial],
    bindings: Mapping[str, int],
) -> Tuple[List[CandidateScalar], List[SparseRow]]:
    """Pick named candidates spanning the numeric kernel; return them and any unmatched remainder."""
    index = {monomial: c for c, monomial in enumerate(basis)}
    span = ReducedRowEchelon(len(basis))
    chosen: List[CandidateScalar] = []
    for candidate in candidates:
        vector = _coordinates(candidate.operator.substitute_params(bindings), index)
        if vector is None:
            logger.debug(f"Candidate {candidate.label} leaves the monomial search space")
            continue
        if kernel.reduce(vector):
            logger.warning(f"Candidate {candidate.label} is not annihilated by the constraint system")
            continue
        if span.add_row(vector):
            chosen.append(candidate)
    remainder = [row for row in kernel.rows() if span.add_row(dict(row))]
    return chosen, remainder


def momentum_conserving_subspace(
    elements: Union[InvariantBasis, Sequence[InvariantElement]],
) -> List[InvariantElement]:
    """Kernel of H ↦ [kᵢ + pᵢ, H] restricted to the span of the given elements.

    Solved over the parameter field, so symbolic masses stay symbolic.
    On the default space this leaves three elements: 𝟙, w² and (r−q)·w + w·λp with w = k/M − p/m.
    """
    if isinstance(elements, InvariantBasis):
        elements = elements.elements
    elements = list(elements)
    rows: Dict[Tuple[int, Monomial], Dict[int, ParamScalar]] = {}
    for j, element in enumerate(elements):
        for axis, x in zip(AXES, total_momentum()):
            for monomial, coeff in commutator(x, element.operator).raw_terms().items():
                rows.setdefault((axis, monomial), {})[j] = coeff
    ordered = [rows[key] for key in sorted(rows, key=lambda key: (key[0], monomial_key(key[1])))]

    conserved = []
    for vector in null_space(ordered, len(elements), ONE):
        pairs = [(vector[j], elements[j]) for j in sorted(vector)]
        operator = linear_combination((weight, element.operator) for weight, element in pairs)
        conserved.append(InvariantElement(
            label=_combine_labels([(w, e.label) for w, e in pairs]),
            unicode_label=_combine_labels([(w, e.unicode_label) for w, e in pairs]),
            operator=operator,
            hermitian=operator.is_hermitian(),
            symbolic=all(e.symbolic for _, e in pairs),
            verified=all(e.verified for _, e in pairs),
        ))
    return conserved


def solve_invariant_space(config: Optional[ClassificationConfig] = None) -> InvariantBasis:
    """Enumerate every admissible interaction term within the config's degree caps.

    Returns:
        InvariantBasis with named (symbolic) elements where the numeric null
        space is matched by candidate scalars, numeric remainder elements
        otherwise, the reduced echelon basis at the numeric masses, and
        conservation and back-reaction flags.
    """
    config = config or ClassificationConfig()
    started = time.perf_counter()
    logger.info("=" * 60)
    logger.info(
        f"Classifying hybrid interactions: degree <= {config.max_degree}, "
        f"lp degree <= {config.max_lambda_p_degree}, blocks {','.join(config.building_blocks)}"
    )
    logger.info("=" * 60)

    bindings = {"M": config.quantum_mass, "m": config.classical_mass}
    symbolic_rep = build_hybrid_rep()
    numeric_rep = symbolic_rep.substitute_params({**bindings, "t": 0})
    basis = monomial_basis(config)
    system = constraint_matrix(
        basis,
        numeric_rep,
        conserve_momentum=config.require_total_momentum_conservation,
    )

    invariance = row_echelon(system.invariance_rows(), len(basis))
    kernel = row_echelon(invariance.null_space(QQ_I.one), len(basis))
    logger.info(f"Numeric invariant space: dimension {kernel.rank} of {len(basis)} monomials")

    candidates = candidate_scalars(config)
    chosen, remainder = _lift(kernel, candidates, basis, bindings)
    if remainder:
        logger.warning(
            f"{len(remainder)} kernel directions are not spanned by named scalars; "
            f"reporting them at M={config.quantum_mass}, m={config.classical_mass}"
        )

    elements: List[InvariantElement] = []
    for candidate in chosen:
        elements.append(InvariantElement(
            label=candidate.label,
            unicode_label=candidate.unicode_label,
            operator=candidate.operator,
            hermitian=candidate.hermitian,
            symbolic=True,
            verified=_verify_element(candidate.operator, symbolic_rep),
        ))
    for n, vector in enumerate(remainder, start=1):
        op = _operator_from_vector(vector, basis)
        elements.append(InvariantElement(
            label=f"numeric-{n}",
            unicode_label=f"numeric-{n}",
            operator=op,
            hermitian=op.is_hermitian(),
            symbolic=False,
            verified=all(residual.is_zero for _, residual in invariance_residuals(op, numeric_rep)),
        ))

    echelon_rows = kernel.rows()
    momentum_check = None
    if config.require_total_momentum_conservation:
        conserved_rows = copy.deepcopy(invariance)
        for row in system.momentum_rows():
            conserved_rows.add_row(row)
        echelon_rows = row_echelon(conserved_rows.null_space(QQ_I.one), len(basis)).rows()
        elements = momentum_conserving_subspace(elements)
        momentum_check = MomentumFilterCheck(
            constraint_rows_dimension=len(echelon_rows),
            restricted_kernel_dimension=len(elements),
        )
        logger.info(
            f"Momentum filter: {momentum_check.constraint_rows_dimension} (constraint rows) vs "
            f"{momentum_check.restricted_kernel_dimension} (restricted kernel)"
        )

    result = InvariantBasis(
        config=config,
        elements=elements,
        echelon=[_operator_from_vector(row, basis) for row in echelon_rows],
        numeric_dimension=len(echelon_rows),
        monomial_count=len(basis),
        scalars=scalar_reports(candidates),
        momentum_check=momentum_check,
    )
    conservation_flags(result)
    result.elapsed_seconds = time.perf_counter() - started
    logger.info(
        f"Invariant space: dimension {result.dimension}, "
        f"{'matched' if result.matched else 'partially matched'}, "
        f"{'verified' if result.verified else 'NOT verified'} in {result.elapsed_seconds:.2f}s"
    )
    return result

