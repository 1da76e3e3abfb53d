#!/usr/bin/env python3
"""
Reports
JSON report documents and plain-text metric tables
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .evaluation import ConfusionMatrix, MetricsReport


def metrics_row(name: str, report: MetricsReport, confusion: Optional[ConfusionMatrix] = None) -> Dict[str, Any]:
    row = {"name": name}
    row.update(report.to_dict())
    if confusion is not None:
        row["confusion"] = confusion.to_dict()["counts"]
    return row


def build_report(rows: List[Dict[str, Any]], config: Dict[str, Any], seed: int,
                 **extra) -> Dict[str, Any]:
    """Report document; every artifact echoes the resolved config and seed"""
    document = {"config": config, "seed": seed, "rows": rows}
    document.update(extra)
    return document


def write_json(data: Dict[str, Any], path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def format_metrics_table(rows: Sequence[Tuple[str, MetricsReport]], class_names: Sequence[str]) -> str:
    """One line per row: Prec./Recall for each class, then accuracy, 3 decimals"""
    label_width = max([len("Run")] + [len(name) for name, _ in rows]) + 2
    header = f"{'Run':<{label_width}}" + "".join(f"{name[:13]:>16}" for name in class_names) + f"{'Acc.':>8}"
    sub = " " * label_width + "".join(f"{'Prec.':>8}{'Recall':>8}" for _ in class_names) + " " * 8
    lines = [header, sub, "-" * len(header)]
    for name, report in rows:
        cells = "".join(f"{p:>8.3f}{r:>8.3f}" for p, r in zip(report.precision, report.recall))
        lines.append(f"{name:<{label_width}}{cells}{report.accuracy:>8.3f}")
    return "\n".join(lines)
