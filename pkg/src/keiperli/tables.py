"""CSV and JSON IO for sequence runs."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable

import mpmath
from mpmath import mpf

from .errors import SchemaError
from .liseq import RunManifest, SequencePoint

BASE_COLUMNS = ["n", "lambda", "delta", "bits", "elapsed_ms"]


def format_sci(x, digits: int) -> str:
    """Decimal scientific notation with ``digits`` significant digits."""
    text = mpmath.nstr(mpf(x), digits, strip_zeros=False, min_fixed=1, max_fixed=0)
    if "e" not in text:
        text += "e+0"
    return text


class CsvSink:
    """Streams SequencePoints as CSV rows, flushing each one."""

    def __init__(self, handle: IO[str], digits: int, variant: str | None = None,
                 timing: bool = True) -> None:
        self.handle = handle
        self.digits = digits
        self.variant = variant
        self.timing = timing
        self.writer = csv.writer(handle, lineterminator="\n")
        header = list(BASE_COLUMNS)
        if variant is not None:
            header.append("variant")
        self.writer.writerow(header)
        handle.flush()

    def __call__(self, point: SequencePoint) -> None:
        row = [str(point.n), format_sci(point.lam, self.digits),
               format_sci(point.delta, self.digits), str(point.bits),
               f"{point.elapsed:.3f}" if self.timing else "0"]
        if self.variant is not None:
            row.append(self.variant)
        self.writer.writerow(row)
        self.handle.flush()


@dataclass
class Table:
    n: list[int]
    lam: list[mpf]
    delta: list[mpf]
    bits: list[int]
    elapsed_ms: list[float]
    variant: list[str] | None = None


def read_csv(path: str | Path) -> Table:
    """Parse a run CSV; raise :class:`SchemaError` on any mismatch."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path} is empty") from None
        has_variant = header == BASE_COLUMNS + ["variant"]
        if header != BASE_COLUMNS and not has_variant:
            raise SchemaError(f"{path}: unexpected header {','.join(header)}")
        table = Table([], [], [], [], [], [] if has_variant else None)
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != len(header):
                raise SchemaError(f"{path}:{lineno}: expected {len(header)} fields")
            try:
                table.n.append(int(row[0]))
                table.lam.append(mpf(row[1]))
                table.delta.append(mpf(row[2]))
                table.bits.append(int(row[3]))
                table.elapsed_ms.append(float(row[4]))
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from exc
            if has_variant:
                table.variant.append(row[5])
    if not table.n:
        raise SchemaError(f"{path} holds no data rows")
    return table


def write_manifest(path: str | Path, manifest: RunManifest) -> None:
    Path(path).write_text(json.dumps(manifest.to_dict(), indent=2) + "\n", encoding="utf-8")


def write_points(path: str | Path, points: Iterable[SequencePoint], digits: int,
                 variant: str | None = None, timing: bool = True) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        sink = CsvSink(fh, digits, variant, timing)
        for point in points:
            sink(point)
