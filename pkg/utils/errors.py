"""
Error types raised by the toolkit.

Every error records the module it originates from so the CLI can report
``[module] message`` and pick the right exit code.
"""
from typing import Optional


class QGLError(Exception):
    """Base class for all toolkit errors"""

    module = "qgl"

    def __init__(self, message: str, module: Optional[str] = None):
        super().__init__(message)
        if module:
            self.module = module

    def describe(self) -> str:
        return f"[{self.module}] {self}"


class InvalidConstantsError(QGLError):
    module = "units"


class UnknownDimensionError(QGLError):
    module = "units"


class SingularChartError(QGLError):
    module = "spacetime"


class EnergyPositivityError(QGLError):
    module = "bounds"


class StiffnessError(QGLError):
    module = "geodesics"


class PartialPathError(QGLError):
    """Integration stopped at a chart singularity; ``path`` holds the valid part"""

    module = "geodesics"

    def __init__(self, message: str, path=None):
        super().__init__(message)
        self.path = path


class OutOfSegmentError(QGLError):
    module = "regions"


class HorizonError(QGLError):
    module = "regions"


class DegenerateRegionError(QGLError):
    module = "regions"


class UnsupportedGeometryError(QGLError):
    module = "regions"


class NumericError(QGLError):
    module = "clock"


class InvalidClockError(QGLError, ValueError):
    module = "clock"


class NonUnitaryError(QGLError, ValueError):
    module = "clock"


class GeometryError(QGLError, ValueError):
    module = "regge"


class BoundaryHingeError(QGLError):
    module = "regge"


class OpenSurfaceError(QGLError, ValueError):
    module = "regge"


class ScenarioValidationError(QGLError):
    """Scenario file could not be parsed or failed schema validation"""

    module = "cli"

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path:
            location = f"{path}:{line}: " if line else f"{path}: "
        super().__init__(location + message)
