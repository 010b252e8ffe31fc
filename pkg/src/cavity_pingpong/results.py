"""Tabular scan results and their CSV form.

The CSV layout is fixed so that identical inputs give identical bytes:

    # preset=<name> n_max=<max cutoff or -> version=<v> config_hash=<sha1>
    col1,col2,...
    <values>

Floats are written with 17 significant digits (round-trip exact). Cells
that could not be evaluated hold a sentinel token instead of a number.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Dict, List, Union

import numpy as np

from .errors import MissingColumnError

SINGULAR = "SINGULAR"
FAILED = "FAILED"
SENTINELS = (SINGULAR, FAILED)

Cell = Union[float, str]


def format_cell(v: Cell) -> str:
    if isinstance(v, str):
        return v
    v = float(v)
    if math.isnan(v):
        return "nan"
    return format(v, ".16e")


def parse_cell(text: str) -> Cell:
    text = text.strip()
    if text in SENTINELS or not text:
        return text
    try:
        return float(text)
    except ValueError:
        return text


@dataclass
class ScanResult:
    columns: List[str]
    rows: List[List[Cell]] = field(default_factory=list)
    meta: Dict[str, str] = field(default_factory=dict)

    def __len__(self):
        return len(self.rows)

    def column(self, name, sentinel=np.nan) -> np.ndarray:
        """Column as floats, sentinel cells replaced by ``sentinel``."""
        if name not in self.columns:
            raise MissingColumnError(f"no column {name!r}; have {self.columns}")
        j = self.columns.index(name)
        return np.array([r[j] if not isinstance(r[j], str) else sentinel for r in self.rows],
                        dtype=float)

    def raw_column(self, name) -> List[Cell]:
        if name not in self.columns:
            raise MissingColumnError(f"no column {name!r}; have {self.columns}")
        j = self.columns.index(name)
        return [r[j] for r in self.rows]

    def header_line(self) -> str:
        parts = ["preset=" + self.meta.get("preset", "custom"),
                 "n_max=" + str(self.meta.get("n_max", "-")),
                 "version=" + str(self.meta.get("version", ""))]
        for k in sorted(self.meta):
            if k not in ("preset", "n_max", "version"):
                parts.append(f"{k}={self.meta[k]}")
        return "# " + " ".join(parts)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(self.header_line() + "\n")
        buf.write(",".join(self.columns) + "\n")
        for r in self.rows:
            buf.write(",".join(format_cell(v) for v in r) + "\n")
        return buf.getvalue()

    def write_csv(self, path_or_file):
        text = self.to_csv()
        if hasattr(path_or_file, "write"):
            path_or_file.write(text)
        else:
            with open(path_or_file, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)

    @classmethod
    def from_csv(cls, text: str) -> "ScanResult":
        lines = text.splitlines()
        meta = {}
        if lines and lines[0].startswith("#"):
            for tok in lines[0][1:].split():
                if "=" in tok:
                    k, v = tok.split("=", 1)
                    meta[k] = v
            lines = lines[1:]
        if not lines:
            return cls([], [], meta)
        columns = lines[0].split(",")
        rows = [[parse_cell(c) for c in ln.split(",")] for ln in lines[1:] if ln.strip()]
        return cls(columns, rows, meta)

    @classmethod
    def read_csv(cls, path) -> "ScanResult":
        with open(path, encoding="utf-8") as fh:
            return cls.from_csv(fh.read())
