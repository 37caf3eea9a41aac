from app.services.toolkit.toolkit_service import GalileiToolkitService

__all__ = ["GalileiToolkitService"]
