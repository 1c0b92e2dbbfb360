import math
from pathlib import Path
from typing import Optional

from scenarios import SWEEPABLES, Scenario, SweepSpec
from scenarios.config import SCENARIO_SUFFIXES, scenario_config

MONTE_CARLO_COMMANDS = ("bounds", "region")


class ScenarioValidator:
    def __init__(self):
        self.supported_extensions = list(SCENARIO_SUFFIXES)

    def validate_input(self, input_str: str) -> dict:
        """Classify input as a scenario file or a bundled scenario name"""
        result = {
            'is_valid': False,
            'input_type': None,
            'path': None,
            'error': None,
        }

        path = Path(input_str)
        if path.exists():
            result['input_type'] = 'file'
            result['path'] = str(path)
            result['is_valid'] = self._validate_file_path(path)
            if not result['is_valid']:
                result['error'] = f"unsupported scenario file type '{path.suffix}' (use .json or .yaml)"
        elif input_str in scenario_config.list_scenarios() or \
                Path(input_str).stem in scenario_config.list_scenarios():
            result['input_type'] = 'bundled'
            result['path'] = str(scenario_config.resolve(input_str))
            result['is_valid'] = True
        else:
            result['error'] = f"scenario file does not exist: {input_str}"

        return result

    def _validate_file_path(self, path: Path) -> bool:
        return path.is_file() and path.suffix.lower() in self.supported_extensions

    def validate_sweep(self, sweep: str, subcommand: str) -> dict:
        """Parse 'param:lo:hi:steps' and check the parameter is sweepable for the subcommand"""
        result = {'is_valid': False, 'sweep': None, 'error': None}
        try:
            spec = SweepSpec.parse(sweep)
        except ValueError as e:
            result['error'] = f"invalid sweep '{sweep}': {e}"
            return result
        return self._check_sweep(spec, subcommand, result)

    def validate_sweep_spec(self, spec: SweepSpec, subcommand: str) -> dict:
        return self._check_sweep(spec, subcommand, {'is_valid': False, 'sweep': None, 'error': None})

    def _check_sweep(self, spec: SweepSpec, subcommand: str, result: dict) -> dict:
        allowed = SWEEPABLES.get(subcommand, ())
        if spec.parameter not in allowed:
            result['error'] = (f"unknown sweep parameter '{spec.parameter}' for {subcommand} "
                               f"(sweepable: {', '.join(allowed) or 'none'})")
        elif not (math.isfinite(spec.lo) and math.isfinite(spec.hi)) or spec.steps < 1:
            result['error'] = "sweep range must be finite with at least one step"
        else:
            result['is_valid'] = True
            result['sweep'] = spec
        return result

    def validate_scenario(self, scenario: Scenario, subcommand: str, seed: Optional[int]) -> dict:
        """Check that the scenario holds what the subcommand needs"""
        result = {'is_valid': False, 'error': None, 'path': None}
        needs = {
            'bounds': ('solid', "bounds needs a 'metric' and a 'solid'"),
            'region': ('solid', "region needs a 'metric' and a 'solid'"),
            'clock': ('clocks', "clock needs at least one entry in 'clocks'"),
            'regge': ('complexes', "regge needs at least one entry in 'complexes'"),
        }
        if subcommand in needs:
            field, message = needs[subcommand]
            if not getattr(scenario, field):
                result['error'] = message
                result['path'] = field
                return result
        if subcommand in MONTE_CARLO_COMMANDS and seed is None:
            result['error'] = "a seed is required for Monte Carlo runs (scenario 'seed' or --seed)"
            result['path'] = 'seed'
            return result
        if seed is not None and not 0 <= seed < 2 ** 64:
            result['error'] = "seed must be an unsigned 64-bit integer"
            result['path'] = 'seed'
            return result
        result['is_valid'] = True
        return result
