from input_handlers.input_validator import ScenarioValidator

__all__ = ["ScenarioValidator"]
