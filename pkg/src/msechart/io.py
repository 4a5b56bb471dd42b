"""CSV/JSON serialization for curves and run reports.

CSV files carry a header row (``gamma,mmse,stderr`` or
``mmse_ap,mmse_ext,stderr``); JSON documents embed metadata and a
``format_version`` field.  Output files are written atomically
(temp + rename).
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path
from typing import Any

import numpy as np

from .charts import MmseSnrCurve, TransferCurve

FORMAT_VERSION = "1"

MMSE_SNR_HEADER = ["gamma", "mmse", "stderr"]
TRANSFER_HEADER = ["mmse_ap", "mmse_ext", "stderr"]


class SchemaError(ValueError):
    """A file does not match the expected column schema."""


def _atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: list[str], rows) -> str:
    import io as _io

    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def write_mmse_snr_csv(path: str | Path, curve: MmseSnrCurve) -> None:
    _atomic_write(path, _csv_text(MMSE_SNR_HEADER,
                                  zip(curve.gamma, curve.mmse, curve.stderr)))


def write_transfer_csv(path: str | Path, curve: TransferCurve) -> None:
    _atomic_write(path, _csv_text(TRANSFER_HEADER,
                                  zip(curve.mmse_ap, curve.mmse_ext, curve.stderr)))


def _read_csv(path: str | Path, header: list[str]) -> np.ndarray:
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise SchemaError(f"{path}: empty file, expected header {','.join(header)}")
    if rows[0] != header:
        missing = [c for c in header if c not in rows[0]]
        raise SchemaError(f"{path}: header {rows[0]} does not match {header}"
                          + (f" (missing column {missing[0]!r})" if missing else ""))
    if len(rows) < 2:
        raise SchemaError(f"{path}: no data rows")
    return np.array([[float(v) for v in r] for r in rows[1:]])


def read_mmse_snr_csv(path: str | Path, tail_rule: str = "analytic_tail",
                      label: str = "") -> MmseSnrCurve:
    data = _read_csv(path, MMSE_SNR_HEADER)
    return MmseSnrCurve(gamma=data[:, 0], mmse=data[:, 1], stderr=data[:, 2],
                        tail_rule=tail_rule, label=label or Path(path).stem)


def read_transfer_csv(path: str | Path, role: str = "outer",
                      label: str = "") -> TransferCurve:
    data = _read_csv(path, TRANSFER_HEADER)
    return TransferCurve(mmse_ap=data[:, 0], mmse_ext=data[:, 1], stderr=data[:, 2],
                         role=role, label=label or Path(path).stem)


def curve_to_json_dict(curve: MmseSnrCurve | TransferCurve, **metadata) -> dict[str, Any]:
    doc: dict[str, Any] = {"format_version": FORMAT_VERSION, "label": curve.label}
    if isinstance(curve, MmseSnrCurve):
        doc.update(kind="mmse_snr", tail_rule=curve.tail_rule,
                   gamma=curve.gamma.tolist(), mmse=curve.mmse.tolist())
    else:
        doc.update(kind="transfer", role=curve.role,
                   mmse_ap=curve.mmse_ap.tolist(), mmse_ext=curve.mmse_ext.tolist())
    doc["stderr"] = curve.stderr.tolist()
    doc.update(metadata)
    return doc


def write_json(path: str | Path, doc: dict[str, Any]) -> None:
    _atomic_write(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def read_json(path: str | Path) -> dict[str, Any]:
    with open(path) as f:
        return json.load(f)
