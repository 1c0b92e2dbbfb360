import csv
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from config import config
from utils import to_jsonable


class ReportFormatter:
    """Format and write run reports and sweep tables"""

    def __init__(self, schema_version: Optional[str] = None):
        self.schema_version = schema_version or config.schema_version

    def envelope(self, payload: Dict[str, Any], generated: Optional[str] = None) -> Dict[str, Any]:
        """Wrap a payload; only ``generated`` varies between identical runs"""
        return {
            "schema_version": self.schema_version,
            "generated": generated or datetime.now(timezone.utc).isoformat(),
            "payload": to_jsonable(payload),
        }

    def payload_json(self, payload: Dict[str, Any]) -> str:
        """Canonical JSON of a payload (sorted keys)"""
        return json.dumps(to_jsonable(payload), indent=2, sort_keys=True, ensure_ascii=False)

    def format_report(self, report: Dict[str, Any], output_format: str = "json") -> str:
        if output_format.lower() == "markdown":
            return self._format_markdown(report)
        elif output_format.lower() == "text":
            return self._format_text(report)
        return json.dumps(to_jsonable(report), indent=2, sort_keys=True, ensure_ascii=False)

    def _format_text(self, report: Dict) -> str:
        payload = report.get("payload", {})
        output = []
        output.append("=" * 60)
        output.append(f"QGL {payload.get('subcommand', 'report').upper()} REPORT")
        output.append("=" * 60)
        output.append(f"Scenario: {payload.get('scenario', {}).get('name', 'unknown')}")
        output.append(f"Schema: {report.get('schema_version')}")
        output.append(f"Generated: {report.get('generated')}")
        output.append("")
        for key in sorted(payload):
            if key in ("scenario", "subcommand"):
                continue
            output.append(f"{key.upper()}:")
            output.append("-" * 20)
            output.extend(self._flatten(payload[key], indent="  "))
            output.append("")
        return "\n".join(output)

    def _format_markdown(self, report: Dict) -> str:
        payload = report.get("payload", {})
        output = []
        output.append(f"# QGL {payload.get('subcommand', 'report')} report")
        output.append(f"*Scenario: {payload.get('scenario', {}).get('name', 'unknown')}, "
                      f"schema {report.get('schema_version')}, generated {report.get('generated')}*")
        output.append("")
        for key in sorted(payload):
            if key in ("scenario", "subcommand"):
                continue
            output.append(f"## {key.replace('_', ' ').title()}")
            output.extend(f"- {line.strip()}" if line.strip() else line
                          for line in self._flatten(payload[key]))
            output.append("")
        return "\n".join(output)

    def _flatten(self, value: Any, prefix: str = "", indent: str = "") -> List[str]:
        value = to_jsonable(value)
        if isinstance(value, dict):
            lines = []
            for key in sorted(value):
                lines.extend(self._flatten(value[key], f"{prefix}{key}.", indent))
            return lines
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines = []
            for i, item in enumerate(value):
                lines.extend(self._flatten(item, f"{prefix}{i}.", indent))
            return lines
        label = prefix.rstrip(".") or "value"
        if isinstance(value, float):
            return [f"{indent}{label}: {value:.6g}"]
        return [f"{indent}{label}: {value}"]

    def save_report(self, report: Dict[str, Any], filepath: Union[str, Path], output_format: str = "json"):
        """Save report to file"""
        with open(filepath, 'w', encoding='utf-8') as f:
            f.write(self.format_report(report, output_format))
            f.write("\n")

    def print_report(self, report: Dict[str, Any], output_format: str = "json"):
        print(self.format_report(report, output_format))

    def write_csv(self, rows: List[Dict[str, Any]], filepath: Union[str, Path]):
        """One row per sweep step; columns in first-row order"""
        if not rows:
            raise ValueError("no sweep rows to write")
        columns = list(rows[0])
        with open(filepath, 'w', encoding='utf-8', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=columns, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: ("" if row.get(k) is None else to_jsonable(row.get(k))) for k in columns})


__all__ = ["ReportFormatter"]
