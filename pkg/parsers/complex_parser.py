import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from regge import SimplicialComplex
from utils.errors import GeometryError, ScenarioValidationError

logger = logging.getLogger(__name__)


class ComplexParser:
    """Reads simplicial complexes from JSON or OFF files"""

    def load(self, path: Union[str, Path]) -> SimplicialComplex:
        path = Path(path)
        if path.suffix.lower() == ".off":
            return self.parse_off(path)
        return self.parse_json(path)

    def parse_json(self, path: Union[str, Path]) -> SimplicialComplex:
        """{vertices: [[...]], simplices: [[...]]} or {edge_lengths: [[i, j, l]], simplices}"""
        path = Path(path)
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ScenarioValidationError(e.msg, path=str(path), line=e.lineno)
        except OSError as e:
            raise ScenarioValidationError(f"cannot read complex file: {e}", path=str(path))
        return self.from_mapping(data, name=path.stem, source=str(path))

    def from_mapping(self, data: Dict[str, Any], name: str = "", source: str = "") -> SimplicialComplex:
        if not isinstance(data, dict) or "simplices" not in data:
            raise ScenarioValidationError("complex needs a 'simplices' list", path=source or None)
        edge_lengths = None
        if data.get("edge_lengths") is not None:
            try:
                edge_lengths = {(int(i), int(j)): float(l) for i, j, l in data["edge_lengths"]}
            except (TypeError, ValueError):
                raise ScenarioValidationError("edge_lengths must be [i, j, length] triples",
                                              path=source or None)
        return SimplicialComplex(data["simplices"], data.get("vertices"), edge_lengths,
                                 name=data.get("name", name))

    def parse_off(self, path: Union[str, Path]) -> SimplicialComplex:
        """OFF text with triangular faces only"""
        path = Path(path)
        try:
            raw_lines = path.read_text(encoding='utf-8').splitlines()
        except OSError as e:
            raise ScenarioValidationError(f"cannot read OFF file: {e}", path=str(path))

        lines = []
        for number, text in enumerate(raw_lines, start=1):
            text = text.split('#', 1)[0].strip()
            if text:
                lines.append((number, text.split()))
        if not lines or lines[0][1][0].upper() != "OFF":
            raise ScenarioValidationError("missing OFF header", path=str(path), line=1)

        header = lines[0][1][1:] or (lines.pop(1)[1] if len(lines) > 1 else [])
        try:
            n_vertices, n_faces = int(header[0]), int(header[1])
        except (IndexError, ValueError):
            raise ScenarioValidationError("OFF header needs vertex and face counts", path=str(path),
                                          line=lines[0][0])
        body = lines[1:]
        if len(body) < n_vertices + n_faces:
            raise ScenarioValidationError(
                f"OFF file declares {n_vertices} vertices and {n_faces} faces but has {len(body)} data lines",
                path=str(path), line=len(raw_lines) or None)

        vertices, faces = [], []
        for number, fields in body[:n_vertices]:
            try:
                vertices.append([float(v) for v in fields[:3]])
            except ValueError:
                raise ScenarioValidationError("bad vertex coordinates", path=str(path), line=number)
        for number, fields in body[n_vertices:n_vertices + n_faces]:
            try:
                count = int(fields[0])
                indices = [int(v) for v in fields[1:1 + count]]
            except (ValueError, IndexError):
                raise ScenarioValidationError("bad face record", path=str(path), line=number)
            if count != 3 or len(indices) != 3:
                raise GeometryError(f"{path}:{number}: only triangular faces are supported")
            faces.append(indices)

        logger.debug(f"Read {len(vertices)} vertices and {len(faces)} faces from {path}")
        return SimplicialComplex(faces, vertices, name=path.stem)
