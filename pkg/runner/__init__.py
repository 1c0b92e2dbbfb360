"""
Scenario runner: builds metrics, solids, clocks and complexes from a
validated scenario and evaluates the requested family of results.
"""
import math
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from bounds import (
    background_radiation_resolution,
    compactness_saturation_fit,
    covariant_entropy_bound,
    evaluate_solid,
    holographic_report,
    ml_event_bound,
    ops_exceed_bits,
    ops_since_big_bang,
    qgl_bound,
    resolution_tradeoff,
    uniform_distribution_stats,
)
from clock import (
    QuantumClock,
    clock_summary,
    parse_preset,
    qubit_clock,
    tick_count,
)
from config import config
from parsers.complex_parser import ComplexParser
from regge import SimplicialComplex, analyse
from regge import meshes
from regions import (
    CovariantSolid,
    RadiusProfile,
    build_solid,
    critical_energy,
    four_volume,
    horizon_check,
    worldsheet_area,
)
from scenarios import ClockSpec, ComplexSpec, CosmologySpec, Scenario, SweepSpec
from spacetime import ChartPoint, MetricField, MetricKind, make_metric
from units import PhysicalConstants, default_constants, planck_scale
from utils import ProgressTracker, is_monotone, order_of_magnitude
from utils.errors import ScenarioValidationError

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("bounds", "region", "clock", "regge", "cosmo")


def _as_complex(value) -> complex:
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    if isinstance(value, list):
        if len(value) != 2:
            raise ValueError("complex entries are [re, im] pairs")
        return complex(value[0], value[1])
    return complex(value)


class ScenarioRunner:
    def __init__(self, scenario: Scenario, seed: Optional[int] = None,
                 base_dir: Optional[Path] = None, show_progress: bool = False):
        self.scenario = scenario
        self.seed = seed if seed is not None else scenario.seed
        self.base_dir = Path(base_dir) if base_dir else Path.cwd()
        self.show_progress = show_progress
        self.constants = PhysicalConstants.with_overrides(scenario.constants, base=default_constants())

    # -- builders ------------------------------------------------------

    def build_metric(self, scenario: Optional[Scenario] = None) -> MetricField:
        spec = (scenario or self.scenario).metric
        try:
            return make_metric(spec.kind, self.constants, **spec.parameters)
        except (TypeError, ValueError) as e:
            raise ScenarioValidationError(f"metric: {e}")

    def build_solid(self, metric: MetricField, scenario: Optional[Scenario] = None) -> CovariantSolid:
        spec = (scenario or self.scenario).solid
        profile_spec = spec.profile
        try:
            if profile_spec.kind.value == "table":
                profile = RadiusProfile.table(profile_spec.taus, profile_spec.radii)
            else:
                profile = RadiusProfile(profile_spec.kind, profile_spec.duration, profile_spec.radius)
        except ValueError as e:
            raise ScenarioValidationError(f"solid.profile: {e}")
        start = ChartPoint(*spec.start)
        return build_solid(metric, start, profile, velocity=spec.velocity,
                           paper_literal_cones=spec.paper_literal_cones, label=spec.label)

    def build_clock(self, spec: ClockSpec) -> QuantumClock:
        if spec.preset:
            clock = parse_preset(spec.preset, hbar=self.constants.hbar)
        else:
            try:
                H = np.array([[_as_complex(v) for v in row] for row in spec.hamiltonian])
                psi = np.array([_as_complex(v) for v in spec.initial_state])
            except ValueError as e:
                raise ScenarioValidationError(f"clocks: {e}")
            clock = QuantumClock(H, psi, hbar=self.constants.hbar, name=spec.name)
        return clock

    def build_complex(self, spec: ComplexSpec) -> SimplicialComplex:
        if spec.mesh:
            try:
                return meshes.build(spec.mesh, **spec.params)
            except (TypeError, ValueError) as e:
                raise ScenarioValidationError(f"complexes: mesh '{spec.mesh}': {e}")
        parser = ComplexParser()
        if spec.file:
            path = Path(spec.file)
            return parser.load(path if path.is_absolute() else self.base_dir / path)
        return parser.from_mapping(spec.model_dump(exclude_none=True), name=spec.name)

    # -- subcommands ---------------------------------------------------

    def run(self, subcommand: str, scenario: Optional[Scenario] = None) -> Dict[str, Any]:
        """Payload of one subcommand for the scenario (or a swept variant of it)"""
        handlers: Dict[str, Callable[[Scenario], Dict[str, Any]]] = {
            "bounds": self.run_bounds,
            "region": self.run_region,
            "clock": self.run_clock,
            "regge": self.run_regge,
            "cosmo": self.run_cosmo,
        }
        if subcommand not in handlers:
            raise ScenarioValidationError(f"unknown subcommand '{subcommand}'")
        scenario = scenario or self.scenario
        payload = {
            "scenario": scenario.echo(),
            "subcommand": subcommand,
            "seed": self.seed,
            "constants": self.constants.echo(),
        }
        payload.update(handlers[subcommand](scenario))
        return payload

    def _mc_options(self, scenario: Scenario) -> Dict[str, Any]:
        mc = scenario.monte_carlo
        return {"n_samples": mc.n_samples or config.n_samples, "block_size": mc.block_size,
                "workers": mc.workers}

    def run_bounds(self, scenario: Scenario) -> Dict[str, Any]:
        metric = self.build_metric(scenario)
        solid = self.build_solid(metric, scenario)
        r, t = solid.covariant_radius, solid.duration
        results = evaluate_solid(metric, solid, seed=self.seed, vacuum_energy=scenario.vacuum_energy,
                                 **self._mc_options(scenario))

        identity = {}
        if r > 0:
            eq1 = qgl_bound(r, t, constants=self.constants)
            eq2_critical = ml_event_bound(critical_energy(r, self.constants), t, self.constants)
            identity = {
                "eq1": eq1,
                "eq2_at_critical_energy": eq2_critical,
                "holds": math.isclose(eq1, eq2_critical, rel_tol=config.identity_rtol),
            }

        payload = {
            "metric": metric.describe(),
            "solid": solid.describe(),
            "bounds": results.model_dump(mode="json"),
            "eq1_eq2_identity": identity,
        }
        if metric.kind == MetricKind.DUST_BALL and r > 0:
            payload["expected_ratio"] = metric.schwarzschild_radius / r
        if r > 0:
            bits = covariant_entropy_bound(4.0 * math.pi * r * r, self.constants)
            ops = results.stress_energy.n_max_events
            payload["ops_vs_bits"] = {"ops_bound": ops, "sphere_bits_bound": bits,
                                      "ops_bound_exceeds_bits_bound": ops_exceed_bits(ops, bits)}
        if scenario.holographic_radius:
            payload["holographic"] = holographic_report(scenario.holographic_radius, self.constants)
        return payload

    def run_region(self, scenario: Scenario) -> Dict[str, Any]:
        metric = self.build_metric(scenario)
        solid = self.build_solid(metric, scenario)
        volume = four_volume(metric, solid, seed=self.seed, **self._mc_options(scenario))
        payload = {
            "metric": metric.describe(),
            "solid": solid.describe(),
            "four_volume": volume.to_dict(),
            "worldsheet": worldsheet_area(solid).to_dict(),
            "horizon": horizon_check(metric, solid).to_dict(),
        }
        if metric.kind == MetricKind.MINKOWSKI and solid.profile.kind.value == "constant":
            r_eff = solid.radius_factor * solid.covariant_radius
            payload["flat_reference_volume"] = 4.0 / 3.0 * math.pi * r_eff ** 3 * solid.duration
        return payload

    def run_clock(self, scenario: Scenario) -> Dict[str, Any]:
        summaries = []
        for spec in scenario.clocks:
            clock = self.build_clock(spec)
            summary = clock_summary(clock, t_max=spec.t_max)
            if spec.duration:
                summary["tick_count"] = tick_count(clock, spec.duration)
            summaries.append(summary)
        return {"clocks": summaries}

    def run_regge(self, scenario: Scenario) -> Dict[str, Any]:
        return {"complexes": [analyse(self.build_complex(spec)) for spec in scenario.complexes]}

    def run_cosmo(self, scenario: Scenario) -> Dict[str, Any]:
        spec = scenario.cosmology or CosmologySpec()
        T = spec.age
        R = spec.radius or self.constants.c * T
        events = ops_since_big_bang(T, self.constants)
        uniform = uniform_distribution_stats(R, T, self.constants)
        scale = planck_scale(self.constants)
        payload = {
            "age": T,
            "radius": R,
            "ops_since_big_bang": events,
            "ops_exponent": order_of_magnitude(events),
            "uniform": uniform,
            "cells_times_ticks": uniform["cells"] * uniform["ticks_per_clock"],
            "holographic_extreme": resolution_tradeoff(R, T, 1.0, self.constants),
            "background_radiation_resolution": background_radiation_resolution(spec.temperature),
            "planck": {"length": scale.length, "time": scale.time},
        }
        if spec.ticks_per_clock:
            payload["tradeoff"] = resolution_tradeoff(R, T, spec.ticks_per_clock, self.constants)
        return payload

    # -- sweeps --------------------------------------------------------

    def _variant(self, parameter: str, value: float) -> Scenario:
        scenario = self.scenario.model_copy(deep=True)
        if parameter in ("radius", "duration", "compactness") and scenario.solid is None:
            raise ScenarioValidationError(f"sweep over {parameter} needs a solid")
        if parameter in ("radius", "duration", "compactness") and scenario.solid.profile.radius is None:
            raise ScenarioValidationError(
                f"sweep over {parameter} needs a constant or cone profile, not a table")
        if parameter == "radius":
            scenario.solid.profile.radius = value
        elif parameter == "duration":
            scenario.solid.profile.duration = value
        elif parameter == "compactness":
            if scenario.metric.kind != MetricKind.DUST_BALL:
                raise ScenarioValidationError("compactness sweeps need a dust_ball metric")
            if not 0 < value < 1:
                raise ScenarioValidationError("compactness must lie in (0, 1)")
            r = scenario.solid.profile.radius
            mass = value * r * self.constants.c ** 2 / (2.0 * self.constants.G)
            scenario.metric.parameters = {"mass": mass, "radius": r}
        elif parameter == "age":
            base = scenario.cosmology.model_dump() if scenario.cosmology else {}
            base["age"] = value
            try:
                scenario.cosmology = CosmologySpec.model_validate(base)
            except ValueError as e:
                raise ScenarioValidationError(f"age: {e}")
        return scenario

    def _sweep_row(self, subcommand: str, parameter: str, value: float) -> Dict[str, Any]:
        if subcommand == "clock":
            clock = qubit_clock(value, hbar=self.constants.hbar)
            summary = clock_summary(clock)
            return {"omega": value, "first_orthogonal_time": summary["first_orthogonal_time"],
                    "pi_over_omega": math.pi / value, "ml_lower_bound": summary["ml_lower_bound"],
                    "heisenberg_lower_bound": summary["heisenberg_lower_bound"]}
        if subcommand == "regge":
            level = int(round(value))
            report = analyse(meshes.icosphere(level))
            return {"refinement": level, "vertices": report["complex"]["vertices"],
                    "sum_deficits": report["gauss_bonnet"]["sum_deficits"],
                    "max_deficit": report["bound"]["max_deficit"],
                    "residual": report["gauss_bonnet"]["residual"]}

        scenario = self._variant(parameter, value)
        payload = self.run(subcommand, scenario)
        row: Dict[str, Any] = {parameter: value}
        if subcommand == "bounds":
            results = payload["bounds"]
            limit = results["curvature_limit"]
            row.update({
                "ratio": limit["ratio"],
                "ratio_error": limit["ratio_error"],
                "eq1": results["geometric"]["n_max_events"],
                "eq2": results["stress_energy"]["n_max_events"],
                "eq2_error": results["stress_energy"]["standard_error"],
                "eq3": results["curvature"]["n_max_events"],
                "eq3_error": results["curvature"]["standard_error"],
                "four_volume": results["four_volume"]["estimate"],
            })
        elif subcommand == "region":
            row.update({
                "four_volume": payload["four_volume"]["estimate"],
                "four_volume_error": payload["four_volume"]["standard_error"],
                "worldsheet_area": payload["worldsheet"]["area"],
            })
        elif subcommand == "cosmo":
            row.update({
                "ops_since_big_bang": payload["ops_since_big_bang"],
                "tick_spacing": payload["uniform"]["tick_spacing"],
                "spatial_resolution": payload["uniform"]["spatial_resolution"],
            })
        return row

    def sweep(self, subcommand: str, spec: SweepSpec) -> Tuple[List[Dict[str, Any]], Dict[str, Any]]:
        """One row per step, plus monotonicity diagnostics for each numeric column"""
        values = spec.values()
        progress = ProgressTracker(len(values), f"Sweep {spec.parameter}", enabled=self.show_progress)
        rows = []
        for value in values:
            rows.append(self._sweep_row(subcommand, spec.parameter, value))
            progress.update(f"{spec.parameter} = {value:.6g}")

        diagnostics: Dict[str, Any] = {"parameter": spec.parameter, "steps": spec.steps, "monotone": {}}
        for column in rows[0]:
            series = [row[column] for row in rows]
            if not all(isinstance(v, (int, float)) and v is not None for v in series):
                continue
            diagnostics["monotone"][column] = {
                "nondecreasing": is_monotone(series, increasing=True),
                "nonincreasing": is_monotone(series, increasing=False),
            }
        if subcommand == "bounds" and spec.parameter == "compactness" and len(rows) >= 2:
            diagnostics["saturation_fit"] = compactness_saturation_fit(
                [row["compactness"] for row in rows], [row["ratio"] for row in rows],
                [row["ratio_error"] for row in rows])
        return rows, diagnostics


__all__ = ["ScenarioRunner", "SUBCOMMANDS"]
