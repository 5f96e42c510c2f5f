"""
Report files and console summaries for harness runs.

A report is JSON lines: one object per trial in trial order, then a single
``{"summary": {...}}`` line. Nothing time-dependent is written, so the same
root seed always produces the same file.
"""

import json
import logging
from pathlib import Path
from typing import Iterable, List, Union

from .errors import ConfigError
from .harness import summarize
from .models import ExperimentResult, ExperimentSummary, TrialReport

logger = logging.getLogger(__name__)

RECORD_MODES = ("avg", "cond", "worst", "robust", "roundtrip")


def emit_report(
    records: Iterable[TrialReport], summary: ExperimentSummary, path: Union[str, Path]
) -> Path:
    """Write the per-trial records followed by the summary block."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")
            count += 1
        f.write(json.dumps({"summary": summary.to_dict()}, ensure_ascii=False) + "\n")
    logger.info(f"Report written: {path} ({count} trials)")
    return path


def load_report(path: Union[str, Path]) -> ExperimentResult:
    """Parse a report written by emit_report."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"report does not exist: {path}")

    records: List[TrialReport] = []
    summary = None
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path}:{number}: invalid JSON: {e}")
            if summary is not None:
                raise ConfigError(f"{path}:{number}: data after the summary line")
            if "summary" in data:
                block = data["summary"]
                summary = ExperimentSummary(
                    mode=block["mode"],
                    trials=block["trials"],
                    metrics=block.get("metrics", {}),
                    checks=block.get("checks", {}),
                    context=block.get("context", {}),
                )
            else:
                try:
                    records.append(TrialReport(**data))
                except TypeError as e:
                    raise ConfigError(f"{path}:{number}: bad trial record: {e}")

    if summary is None:
        raise ConfigError(f"{path}: missing summary line")
    return ExperimentResult(records, summary)


def reaggregate(result: ExperimentResult) -> ExperimentSummary:
    """Recompute the summary from the records alone."""
    summary = result.summary
    if summary.mode not in RECORD_MODES:
        return summary
    return summarize(summary.mode, result.records, summary.context)


class ExperimentReporter:
    """Console output for harness verdicts."""

    def print_console_report(self, summary: ExperimentSummary) -> None:
        print("\n" + "=" * 60)
        print(f"📋 {summary.mode.upper()} REPORT")
        print("=" * 60)
        context = summary.context
        if context:
            described = ", ".join(f"{key}={value}" for key, value in context.items())
            print(f"⚙️  {described}")
        print(f"🔁 Trials: {summary.trials}")

        for key, value in summary.metrics.items():
            if isinstance(value, float):
                value = f"{value:.4f}"
            print(f"  • {key}: {value}")

        if summary.checks:
            print("\n🎯 CHECKS:")
            for name, ok in summary.checks.items():
                print(f"  {'✅' if ok else '❌'} {name}")

        print("\n🎯 OVERALL: ", end="")
        print("✅ all bounds hold" if summary.passed else "❌ bound violated")
