"""
Report Builder Service
Builds the report documents printed by the CLI and returned by the HTTP API.
"""

import logging
from typing import Any, Dict, Optional

from app.models.report_schemas import (
    ClassifyResults,
    ExpressionOut,
    FamilyRow,
    FlagsOut,
    InvariantRow,
    MomentumCheckOut,
    RelationRow,
    Report,
    ScalarRow,
    SimulationResults,
    VerifyResults,
)
from app.services.classify.invariant_classifier import ConservationFlags, InvariantBasis
from app.services.dynamics.simulation import CSV_COLUMNS, TimeSeries
from app.services.galilei.algebra_verifier import AlgebraReport
from app.services.opalgebra.operator_expr import OperatorExpr

logger = logging.getLogger(__name__)


class GalileiReportBuilder:
    """Turns engine results into deterministic Report documents."""

    @staticmethod
    def expression(op: OperatorExpr) -> ExpressionOut:
        return ExpressionOut(
            dsl=op.to_dsl(),
            unicode=op.to_unicode(),
            hermitian=op.is_hermitian(),
            degree=op.degree(),
        )

    @staticmethod
    def commute_report(left: str, right: str, result: OperatorExpr) -> Report:
        return Report(
            command="commute",
            inputs={"left": left, "right": right},
            results=GalileiReportBuilder.expression(result),
        )

    @staticmethod
    def normal_form_report(text: str, result: OperatorExpr) -> Report:
        return Report(
            command="normal-form",
            inputs={"expression": text},
            results=GalileiReportBuilder.expression(result),
        )

    @staticmethod
    def liouvillian_report(hamiltonian: str, result: OperatorExpr) -> Report:
        return Report(
            command="liouvillian",
            inputs={"hamiltonian": hamiltonian},
            results=GalileiReportBuilder.expression(result),
        )

    @staticmethod
    def verify_report(report: AlgebraReport, rep: str, interaction: Optional[str] = None) -> Report:
        """
        Build the pass/fail table of a verification run.

        Args:
            report: verifier output
            rep: representation name as requested
            interaction: interaction or potential text, echoed when given

        Returns:
            Report whose `passed` mirrors report.all_passed
        """
        relations = [
            RelationRow(
                family=entry.family,
                label=entry.label,
                expected=entry.expected.to_dsl(),
                residual=entry.residual.to_dsl(),
                passed=entry.passed,
                note=entry.note,
            )
            for entry in report.entries + report.conservation
        ]
        families = [
            FamilyRow(family=family, passed=passed, total=total, ok=passed == total)
            for family, (passed, total) in report.family_summary().items()
        ]
        inputs: Dict[str, Any] = {"rep": rep}
        if interaction:
            inputs["interaction"] = interaction

        failures = len(report.failures())
        logger.info(f"Verify report for '{rep}': {len(relations)} relations, {failures} failing")

        return Report(
            command="verify",
            inputs=inputs,
            passed=report.all_passed,
            results=VerifyResults(
                representation=report.representation,
                central_charge=report.central_charge.to_dsl(),
                all_passed=report.all_passed,
                families=families,
                relations=relations,
            ),
        )

    @staticmethod
    def _flags(flags: Optional[ConservationFlags]) -> Optional[FlagsOut]:
        if flags is None:
            return None
        return FlagsOut(
            conserves_momentum=flags.conserves_momentum,
            commutes_with_q=flags.commutes_with_q,
            commutes_with_p=flags.commutes_with_p,
            back_reaction=flags.back_reaction,
        )

    @staticmethod
    def classify_report(basis: InvariantBasis) -> Report:
        """Reduced basis, per-scalar flags and the momentum cross-check; timing stays in the logs."""
        elements = [
            InvariantRow(
                label=element.label,
                unicode_label=element.unicode_label,
                operator=GalileiReportBuilder.expression(element.operator),
                symbolic=element.symbolic,
                verified=element.verified,
                flags=GalileiReportBuilder._flags(element.flags),
            )
            for element in basis.elements
        ]
        scalars = [
            ScalarRow(
                label=scalar.label,
                unicode_label=scalar.unicode_label,
                operator=GalileiReportBuilder.expression(scalar.operator),
                flags=GalileiReportBuilder._flags(scalar.flags),
                acceleration_observable=scalar.acceleration_observable,
            )
            for scalar in basis.scalars
        ]
        momentum_check = None
        if basis.momentum_check is not None:
            momentum_check = MomentumCheckOut(
                constraint_rows_dimension=basis.momentum_check.constraint_rows_dimension,
                restricted_kernel_dimension=basis.momentum_check.restricted_kernel_dimension,
                consistent=basis.momentum_check.consistent,
            )

        passed = basis.verified and (momentum_check is None or momentum_check.consistent)
        return Report(
            command="classify",
            inputs=basis.config.model_dump(mode="json"),
            passed=passed,
            results=ClassifyResults(
                dimension=basis.dimension,
                numeric_dimension=basis.numeric_dimension,
                monomial_count=basis.monomial_count,
                matched=basis.matched,
                verified=basis.verified,
                elements=elements,
                scalars=scalars,
                momentum_check=momentum_check,
            ),
        )

    @staticmethod
    def simulation_report(inputs: Dict[str, Any], series: TimeSeries, output: Optional[str] = None) -> Report:
        final_time = float(series.column("t")[-1]) if len(series) else 0.0
        return Report(
            command="simulate",
            inputs=inputs,
            results=SimulationResults(
                records=len(series),
                columns=list(CSV_COLUMNS),
                final_time=final_time,
                norm_drift=series.drift("norm"),
                ktot_drift=series.drift("ktot"),
                p_drift=series.drift("p"),
                energy_drift=series.drift("energy"),
                max_tail_mass=series.max_tail_mass,
                output=output,
            ),
        )
