import sys
import math
import logging
from typing import Any, List, Optional
from datetime import datetime

import numpy as np

from utils.errors import QGLError


def setup_logging(log_level: str = "INFO", log_file: Optional[str] = None) -> logging.Logger:
    """Configure root logging on stderr, plus an optional file"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True
    )
    return logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays and nested containers into plain JSON types"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value) or math.isinf(value):
            # JSON has no inf/nan literals
            return str(value)
        return value
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if hasattr(value, "model_dump"):
        return to_jsonable(value.model_dump(mode="python"))
    if hasattr(value, "value") and hasattr(value, "name"):
        # Enum members
        return value.value
    return value


def order_of_magnitude(value: float) -> int:
    """Decimal exponent of a positive number (floor of log10)"""
    if value <= 0:
        raise ValueError("order of magnitude needs a positive value")
    return int(math.floor(math.log10(value)))


def is_monotone(values: List[float], increasing: bool = True, rtol: float = 0.0) -> bool:
    """Check nondecreasing (or nonincreasing) order with a relative slack"""
    for previous, current in zip(values, values[1:]):
        slack = rtol * max(abs(previous), abs(current))
        if increasing and current < previous - slack:
            return False
        if not increasing and current > previous + slack:
            return False
    return True


def validate_output_format(output_format: str) -> bool:
    """Validate output format"""
    valid_formats = ['text', 'markdown', 'json']
    return output_format.lower() in valid_formats


def get_file_extension_from_format(output_format: str) -> str:
    """Get appropriate file extension for output format"""
    format_extensions = {
        'text': '.txt',
        'markdown': '.md',
        'json': '.json'
    }
    return format_extensions.get(output_format.lower(), '.txt')


class ProgressTracker:
    """Sweep progress line on stderr"""

    def __init__(self, total_steps: int, description: str = "Processing", enabled: bool = True):
        self.total_steps = total_steps
        self.current_step = 0
        self.description = description
        self.enabled = enabled
        self.start_time = datetime.now()

    def update(self, step_description: Optional[str] = None):
        """Advance one sweep step"""
        self.current_step += 1
        if not self.enabled:
            return
        progress = (self.current_step / self.total_steps) * 100

        elapsed = datetime.now() - self.start_time

        status = f"{self.description}: {progress:.1f}% ({self.current_step}/{self.total_steps})"
        if step_description:
            status += f" - {step_description}"

        print(f"\r{status}", end="", flush=True, file=sys.stderr)

        if self.current_step >= self.total_steps:
            print(f"\nCompleted in {elapsed.total_seconds():.1f} seconds", file=sys.stderr)


__all__ = [
    "QGLError",
    "setup_logging",
    "to_jsonable",
    "order_of_magnitude",
    "is_monotone",
    "validate_output_format",
    "get_file_extension_from_format",
    "ProgressTracker",
]
