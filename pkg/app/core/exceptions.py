import logging
from datetime import datetime, timezone
from typing import Any, Dict, Optional


class GalileiToolkitError(Exception):
    """Base exception for toolkit failures."""

    def __init__(
        self,
        message: str,
        status_code: int = 500,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        log_level: str = "ERROR"
    ):
        self.message = message
        self.status_code = status_code
        self.error_code = error_code or self._generate_error_code()
        self.details = self._sanitize_details(details or {})
        self.log_level = log_level
        self.timestamp = datetime.now(timezone.utc).isoformat()

        logger = logging.getLogger(self.__class__.__module__)
        getattr(logger, log_level.lower(), logger.error)(
            f"{self.error_code}: {self.message}",
            extra={
                "error_code": self.error_code,
                "status_code": self.status_code,
                "details": self.details,
            }
        )

        super().__init__(self.message)

    def _generate_error_code(self) -> str:
        """Generate error code from class name."""
        class_name = self.__class__.__name__
        if class_name.endswith("Error"):
            class_name = class_name[:-5]
        return class_name.upper()

    def _sanitize_details(self, details: Dict[str, Any]) -> Dict[str, Any]:
        """Truncate oversized detail values (expressions can get long)."""
        sanitized = {}
        for key, value in details.items():
            if isinstance(value, str) and len(value) > 1000:
                sanitized[key] = value[:1000] + "...[TRUNCATED]"
            else:
                sanitized[key] = value
        return sanitized

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for reports and API responses."""
        return {
            "error": self.error_code,
            "message": self.message,
            "details": self.details,
            "timestamp": self.timestamp,
            "status_code": self.status_code
        }


class ExpressionSyntaxError(GalileiToolkitError):
    """Operator expression could not be parsed or lowered."""

    def __init__(self, message: str, position: int, kind: str = "syntax", text: Optional[str] = None):
        self.position = position
        self.kind = kind
        details: Dict[str, Any] = {"position": position, "kind": kind}
        if text is not None:
            details["text"] = text
        super().__init__(
            f"{message} (at byte {position})",
            status_code=400,
            details=details,
            log_level="WARNING"
        )


class ParameterPoleError(GalileiToolkitError):
    """A parameter substitution or division hit a vanishing denominator."""

    def __init__(self, message: str, bindings: Optional[Dict[str, str]] = None):
        details = {"bindings": bindings} if bindings else {}
        super().__init__(message, status_code=422, details=details, log_level="WARNING")


class InvalidParameterError(GalileiToolkitError):
    """Physical parameter outside its admissible range."""

    def __init__(self, message: str, field: Optional[str] = None, value: Any = None):
        details = {}
        if field:
            details["field"] = field
        if value is not None:
            details["provided_value"] = str(value)
        super().__init__(message, status_code=422, details=details, log_level="WARNING")


class NonHermitianOperatorError(GalileiToolkitError):
    """Operator required to be Hermitian is not adjoint-fixed."""

    def __init__(self, message: str, operator: Optional[str] = None):
        details = {"operator": operator} if operator else {}
        super().__init__(message, status_code=422, details=details, log_level="WARNING")


class PhaseSpaceConversionError(GalileiToolkitError):
    """Operator cannot be read as a commutative phase-space polynomial."""

    def __init__(self, message: str, generator: Optional[str] = None):
        details = {"generator": generator} if generator else {}
        super().__init__(message, status_code=422, details=details, log_level="WARNING")


class GridResolutionError(GalileiToolkitError):
    """Initial packet is not resolved by the simulation grid."""

    def __init__(self, message: str, axis: Optional[str] = None, points_per_sigma: Optional[float] = None):
        details: Dict[str, Any] = {}
        if axis:
            details["axis"] = axis
        if points_per_sigma is not None:
            details["points_per_sigma"] = points_per_sigma
        super().__init__(message, status_code=422, details=details, log_level="WARNING")


class SimulationDivergenceError(GalileiToolkitError):
    """Non-finite amplitudes appeared during time stepping."""

    def __init__(self, message: str, step: Optional[int] = None, time: Optional[float] = None):
        details: Dict[str, Any] = {}
        if step is not None:
            details["step"] = step
        if time is not None:
            details["time"] = time
        super().__init__(message, status_code=500, details=details)
