"""Tabular scan results shared by the library scans and the CLI.

A :class:`ScanResult` is a header, float rows, and a flat metadata mapping
(the run configuration echo).  CSV output carries the metadata as
``# key=value`` comment lines above the header so a result file is
self-describing and reproducible; values print with 12 significant digits,
which round-trips the underlying doubles for plotting purposes and keeps
byte-identical output across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from gwqed.errors import DomainError

FLOAT_FORMAT = "%.12g"


def format_value(value: float) -> str:
    return FLOAT_FORMAT % value


@dataclass
class ScanResult:
    """Column header, numeric rows, and a metadata echo of the run."""

    header: tuple[str, ...]
    rows: list[tuple[float, ...]] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)

    def append(self, row: Iterable[float]) -> None:
        row = tuple(float(v) for v in row)
        if len(row) != len(self.header):
            raise DomainError(
                f"row arity {len(row)} does not match header arity {len(self.header)}"
            )
        self.rows.append(row)

    def column(self, name: str) -> list[float]:
        idx = self.header.index(name)
        return [row[idx] for row in self.rows]

    def write_csv(self, stream: TextIO) -> None:
        for key in sorted(self.metadata):
            stream.write(f"# {key}={self.metadata[key]}\n")
        stream.write(",".join(self.header) + "\n")
        for row in self.rows:
            stream.write(",".join(format_value(v) for v in row) + "\n")

    def to_json(self) -> str:
        payload = {
            "metadata": dict(sorted(self.metadata.items())),
            "header": list(self.header),
            "rows": [[float(format_value(v)) for v in row] for row in self.rows],
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def parse_metadata(text: str) -> dict[str, str]:
    """Recover the ``# key=value`` metadata lines from CSV text."""
    meta: dict[str, str] = {}
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        body = line[1:].strip()
        if "=" in body:
            key, value = body.split("=", 1)
            meta[key.strip()] = value.strip()
    return meta
