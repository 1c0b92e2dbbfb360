import os
from typing import Optional
from dotenv import load_dotenv
from pydantic import BaseModel

load_dotenv()

class Config(BaseModel):
    constants_file: Optional[str] = None
    log_level: str = "INFO"
    log_file: Optional[str] = None
    schema_version: str = "1.0"

    # Monte Carlo
    n_samples: int = 200_000
    block_size: int = 65_536
    workers: int = 1
    mc_sigma: float = 3.0

    # Numerical tolerances
    identity_rtol: float = 1e-12
    fd_step_factor: float = 1e-4
    radar_tolerance: float = 1e-10
    geodesic_tolerance: float = 1e-10
    positivity_rtol: float = 1e-8
    saturation_tolerance: float = 0.02

    # Quantum clocks
    orthogonality_threshold: float = 1e-9
    scan_grid: int = 10_000
    max_clock_dimension: int = 64

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        if not self.constants_file:
            self.constants_file = os.getenv('QGL_CONSTANTS') or None
        if not self.log_file:
            self.log_file = os.getenv('QGL_LOG_FILE') or None
        env_level = os.getenv('QGL_LOG_LEVEL')
        if env_level:
            self.log_level = env_level
        if os.getenv('QGL_N_SAMPLES'):
            self.n_samples = int(os.getenv('QGL_N_SAMPLES'))
        if os.getenv('QGL_WORKERS'):
            self.workers = int(os.getenv('QGL_WORKERS'))

    def has_constants_override(self) -> bool:
        return self.constants_file is not None and len(self.constants_file) > 0

config = Config()
