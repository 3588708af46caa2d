"""Run reports: JSON documents and per-transform CSV tables.

JSON schema (version 1)::

    {"schema_version": 1, "tool": "fw-lab", "tool_version": str,
     "config": {...echo of the run configuration, tolerances resolved...},
     "transforms": [record, ...], "scaling": [fit, ...],
     "conformance": {"conformant": bool, "mismatches": [label, ...], "errors": [label, ...]}}

Each transform record carries ``method``, ``status`` (``ok``/``error``),
``expected``/``observed`` reduction verdicts, the residuals
``unitarity_residual``, ``unitarity_residual_fro``, ``blockdiag_residual``,
``off_block_norm``, ``spectrum_residual``, a ``reduction`` summary,
``reduction_groups`` (per degeneracy group) and ``wall_time`` seconds.

CSV tables: ``<stem>_summary.csv`` (one row per transform) and
``<stem>_<method>.csv`` (one row per degeneracy group).
"""

import csv
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA_VERSION = 1
REPORT_FORMATS = ("json", "csv-tables", "both")
SUMMARY_COLUMNS = (
    "method", "status", "expected", "observed", "conformant", "unitarity_residual",
    "unitarity_residual_fro", "blockdiag_residual", "off_block_norm", "spectrum_residual",
    "max_lower_residual", "max_upper_residual", "max_oracle_mismatch", "max_subspace_distance",
    "tol_reduction", "wall_time", "error_type", "message",
)
GROUP_COLUMNS = ("group", "energy", "size", "oracle_mismatch", "subspace_distance")


def _version():
    from . import __version__

    return __version__


@dataclass
class TransformReport:
    config: dict
    transforms: list = field(default_factory=list)
    scaling: list = field(default_factory=list)
    tool_version: str = field(default_factory=_version)
    schema_version: int = SCHEMA_VERSION

    @property
    def conformance(self):
        mismatches = [r["method"] for r in self.transforms if r.get("conformant") is False]
        errors = [r["method"] for r in self.transforms if r["status"] == "error"]
        return {"conformant": not mismatches and not errors, "mismatches": mismatches, "errors": errors}

    def to_dict(self):
        return {
            "schema_version": self.schema_version,
            "tool": "fw-lab",
            "tool_version": self.tool_version,
            "config": self.config,
            "transforms": self.transforms,
            "scaling": self.scaling,
            "conformance": self.conformance,
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema version {d.get('schema_version')!r}")
        return cls(config=d["config"], transforms=d["transforms"], scaling=d.get("scaling", []),
                   tool_version=d["tool_version"], schema_version=d["schema_version"])

    def __eq__(self, other):
        return isinstance(other, TransformReport) and self.to_dict() == other.to_dict()


def _slug(label):
    return re.sub(r"[^a-z0-9]+", "-", label.lower()).strip("-")


def _summary_row(rec):
    row = {k: rec.get(k) for k in SUMMARY_COLUMNS}
    row.update({k: v for k, v in rec.get("reduction", {}).items() if k in SUMMARY_COLUMNS})
    return row


def _write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: "" if row.get(k) is None else row.get(k) for k in columns})


def emit_report(report, path, fmt="json"):
    """Write the report; returns the list of files written.

    ``path`` is the JSON file for ``json``, and the stem (suffix dropped) for
    the CSV tables.
    """
    if fmt not in REPORT_FORMATS:
        raise ValueError(f"format must be one of {REPORT_FORMATS}, got {fmt!r}")
    path = Path(path)
    written = []
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt in ("json", "both"):
            target = path if path.suffix == ".json" else path.with_suffix(".json")
            target.write_text(json.dumps(report.to_dict(), indent=2, allow_nan=True) + "\n")
            written.append(target)
        if fmt in ("csv-tables", "both"):
            stem = path.with_suffix("") if path.suffix else path
            summary = stem.parent / f"{stem.name}_summary.csv"
            _write_csv(summary, SUMMARY_COLUMNS, [_summary_row(r) for r in report.transforms])
            written.append(summary)
            for rec in report.transforms:
                table = stem.parent / f"{stem.name}_{_slug(rec['method'])}.csv"
                _write_csv(table, GROUP_COLUMNS, rec.get("reduction_groups", []))
                written.append(table)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return written


def load_report(path):
    path = Path(path)
    try:
        return TransformReport.from_dict(json.loads(path.read_text()))
    except OSError as exc:
        raise OSError(f"cannot read report {path}: {exc}") from exc


def read_csv_table(path):
    """Read a CSV table back, converting numeric cells to float."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            parsed = {}
            for k, v in row.items():
                try:
                    parsed[k] = float(v)
                except ValueError:
                    parsed[k] = v
            out.append(parsed)
    return out
