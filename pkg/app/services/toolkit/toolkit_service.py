"""
Galilei Toolkit Service
Orchestrates parse → compute → report for every command of the CLI and the HTTP API.
"""

import logging
from pathlib import Path
from typing import Optional, Tuple, Union

from app.core.exceptions import InvalidParameterError
from app.models.galilei_schemas import REPRESENTATION_NAMES, ClassificationConfig, SimulationConfig
from app.models.report_schemas import Report
from app.services.classify.invariant_classifier import solve_invariant_space
from app.services.dynamics.simulation import TimeSeries, run_simulation
from app.services.expressions.evaluator import parse_expression
from app.services.galilei.algebra_verifier import (
    AlgebraReport,
    two_particle_classical_check,
    two_particle_quantum_check,
    verify_algebra,
)
from app.services.galilei.phase_space import PhaseSpacePoly, liouvillian_from_hamiltonian
from app.services.galilei.representations import build_classical_rep, build_hybrid_rep, build_quantum_rep
from app.services.opalgebra.operator_expr import OperatorExpr, commutator
from app.services.reporting.report_builder import GalileiReportBuilder

logger = logging.getLogger(__name__)


class GalileiToolkitService:
    """Command workflows shared by the CLI and the HTTP surface."""

    def __init__(self, report_builder: Optional[GalileiReportBuilder] = None):
        self.report_builder = report_builder or GalileiReportBuilder()

    # ----- algebra -----

    def commute(self, left: str, right: str) -> Tuple[OperatorExpr, Report]:
        result = commutator(parse_expression(left), parse_expression(right))
        logger.info(f"[{left}, {right}] = {result.to_dsl()}")
        return result, self.report_builder.commute_report(left, right, result)

    def normal_form(self, text: str) -> Tuple[OperatorExpr, Report]:
        result = parse_expression(text)
        return result, self.report_builder.normal_form_report(text, result)

    def liouvillian(self, hamiltonian: str) -> Tuple[OperatorExpr, Report]:
        """
        Map a classical Hamiltonian to its Liouvillian.

        Raises:
            ExpressionSyntaxError: hamiltonian does not parse
            PhaseSpaceConversionError: hamiltonian has quantum or λ content
        """
        poly = PhaseSpacePoly.from_operator(parse_expression(hamiltonian))
        result = liouvillian_from_hamiltonian(poly)
        return result, self.report_builder.liouvillian_report(hamiltonian, result)

    def verify(self, rep: str = "hybrid", interaction: Optional[str] = None) -> Report:
        """
        Verify the Galilei brackets of a named representation.

        Args:
            rep: one of quantum, classical, hybrid, two-quantum, two-classical
            interaction: interaction term (hybrid) or pair potential (two-particle reps)

        Raises:
            InvalidParameterError: unknown representation, or an interaction where none is accepted
            NonHermitianOperatorError: interaction is not Hermitian
        """
        if rep not in REPRESENTATION_NAMES:
            raise InvalidParameterError(
                f"Unknown representation '{rep}'; expected one of {', '.join(REPRESENTATION_NAMES)}",
                field="rep",
                value=rep,
            )
        term = parse_expression(interaction) if interaction else None
        if term is not None and rep in ("quantum", "classical"):
            raise InvalidParameterError(
                f"Representation '{rep}' takes no interaction term",
                field="interaction",
                value=interaction,
            )

        report: AlgebraReport
        if rep == "quantum":
            report = verify_algebra(build_quantum_rep())
        elif rep == "classical":
            report = verify_algebra(build_classical_rep())
        elif rep == "hybrid":
            report = verify_algebra(build_hybrid_rep(interaction=term))
        elif rep == "two-quantum":
            report = two_particle_quantum_check(term)
        else:
            potential = PhaseSpacePoly.from_operator(term) if term is not None else None
            report = two_particle_classical_check(potential)
        return self.report_builder.verify_report(report, rep, interaction)

    # ----- classification -----

    def classify(self, config: Optional[ClassificationConfig] = None) -> Report:
        basis = solve_invariant_space(config or ClassificationConfig())
        return self.report_builder.classify_report(basis)

    # ----- dynamics -----

    def simulate(
        self,
        config: SimulationConfig,
        output: Optional[Union[str, Path]] = None,
    ) -> Tuple[TimeSeries, Report]:
        """
        Run a simulation and optionally write its CSV.

        Raises:
            GridResolutionError: initial packet under-resolved
            SimulationDivergenceError: non-finite amplitudes during a step
        """
        series = run_simulation(config)
        if output is not None:
            series.to_csv(output)
            logger.info(f"Wrote {len(series)} rows to {output}")
        report = self.report_builder.simulation_report(
            config.model_dump(mode="json"),
            series,
            str(output) if output is not None else None,
        )
        return series, report
