"""
Scenario loader: bundled scenario files and files given on the command line
"""
import json
import logging
import re
from pathlib import Path
from typing import Any, List, Optional, Sequence, Union

import yaml
from pydantic import ValidationError

from scenarios import Scenario
from utils.errors import ScenarioValidationError

logger = logging.getLogger(__name__)

SCENARIO_SUFFIXES = (".json", ".yaml", ".yml")


def _line_of(text: str, loc: Sequence[Any]) -> Optional[int]:
    """Line of the innermost named key of a validation location, searched in order"""
    position = 0
    line = None
    for key in loc:
        if not isinstance(key, str):
            continue
        match = re.compile(rf'"{re.escape(key)}"\s*:|^\s*-?\s*{re.escape(key)}\s*:', re.M).search(text, position)
        if match:
            position = match.end()
            line = text.count("\n", 0, match.start()) + 1
    return line


class ScenarioConfig:
    """Load scenario files from the bundled directory or from arbitrary paths"""

    def __init__(self, scenario_dir: Optional[str] = None):
        self.scenario_dir = Path(scenario_dir) if scenario_dir else Path(__file__).parent

    def list_scenarios(self) -> List[str]:
        """Names of the bundled scenarios"""
        return sorted(p.stem for p in self.scenario_dir.iterdir() if p.suffix in SCENARIO_SUFFIXES)

    def resolve(self, name_or_path: Union[str, Path]) -> Path:
        """An existing path, or the bundled scenario of that name"""
        path = Path(name_or_path)
        if path.exists():
            return path
        candidates = [self.scenario_dir / path.name]
        candidates += [self.scenario_dir / f"{path.name}{suffix}" for suffix in SCENARIO_SUFFIXES]
        for candidate in candidates:
            if candidate.exists():
                return candidate
        raise ScenarioValidationError(f"scenario not found: {name_or_path}", path=str(name_or_path))

    def read(self, path: Union[str, Path]) -> Any:
        """Parse JSON or YAML, reporting the failing line"""
        path = Path(path)
        try:
            text = path.read_text(encoding='utf-8')
        except OSError as e:
            raise ScenarioValidationError(f"cannot read scenario: {e}", path=str(path))
        if path.suffix.lower() in ('.yaml', '.yml'):
            try:
                return yaml.safe_load(text), text
            except yaml.YAMLError as e:
                mark = getattr(e, "problem_mark", None)
                raise ScenarioValidationError(f"invalid YAML: {getattr(e, 'problem', e)}", path=str(path),
                                              line=mark.line + 1 if mark else None)
        try:
            return json.loads(text), text
        except json.JSONDecodeError as e:
            raise ScenarioValidationError(f"invalid JSON: {e.msg}", path=str(path), line=e.lineno)

    def load(self, name_or_path: Union[str, Path]) -> Scenario:
        path = self.resolve(name_or_path)
        data, text = self.read(path)
        if not isinstance(data, dict):
            raise ScenarioValidationError("scenario must be a mapping", path=str(path), line=1)
        try:
            scenario = Scenario.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(part) for part in first["loc"]) or "scenario"
            raise ScenarioValidationError(f"{where}: {first['msg']}", path=str(path),
                                          line=_line_of(text, first["loc"]))
        logger.debug(f"Loaded scenario '{scenario.name}' from {path}")
        return scenario


# Global instance
scenario_config = ScenarioConfig()
