from app.services.reporting.report_builder import GalileiReportBuilder

__all__ = ["GalileiReportBuilder"]
