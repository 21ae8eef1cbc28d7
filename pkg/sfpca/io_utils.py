# -*- coding: utf-8 -*-

# Plain CSV matrices (no header, '.' decimals, 17 significant digits) and
# UTF-8 JSON reports.

import csv
import json
import math
import os
from typing import Any

import numpy as np

from .errors import MatrixFormatError

FLOAT_FORMAT = "%.17g"


def read_matrix(path: str) -> np.ndarray:
    rows = []
    with open(path, newline="") as f:
        for lineno, record in enumerate(csv.reader(f), start=1):
            if not record or all(not cell.strip() for cell in record):
                continue
            try:
                rows.append([float(cell) for cell in record])
            except ValueError:
                raise MatrixFormatError(
                    "{0}:{1}: non-numeric entry in {2}".format(path, lineno, record)
                )
            if len(rows[-1]) != len(rows[0]):
                raise MatrixFormatError(
                    "{0}:{1}: ragged row ({2} fields, expected {3})".format(
                        path, lineno, len(rows[-1]), len(rows[0])
                    )
                )
    if not rows:
        raise MatrixFormatError("{0}: no data".format(path))
    m = np.array(rows, dtype=float)
    if not np.all(np.isfinite(m)):
        raise MatrixFormatError("{0}: NaN or infinite entries".format(path))
    return m


def write_matrix(path: str, m) -> None:
    """Vectors are written as a single column."""
    m = np.asarray(m, dtype=float)
    if m.ndim == 1:
        m = m[:, None]
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        for row in m:
            writer.writerow([FLOAT_FORMAT % w for w in row])


def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return obj if math.isfinite(obj) else None
    return obj


def _float_repr(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError("cannot write {0!r} to JSON".format(value))
    text = FLOAT_FORMAT % value
    # keep floats floats on reload
    if not any(c in text for c in ".e"):
        text += ".0"
    return text


class FixedDigitsEncoder(json.JSONEncoder):
    """JSON encoder writing every float with 17 significant digits."""

    def iterencode(self, o, _one_shot=False):
        markers = {} if self.check_circular else None
        if self.ensure_ascii:
            encode = json.encoder.encode_basestring_ascii
        else:
            encode = json.encoder.encode_basestring
        iterencode = json.encoder._make_iterencode(  # type: ignore
            markers,
            self.default,
            encode,
            self.indent,
            _float_repr,
            self.key_separator,
            self.item_separator,
            self.sort_keys,
            self.skipkeys,
            _one_shot,
        )
        return iterencode(o, 0)


def write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(
            _plain(obj),
            f,
            cls=FixedDigitsEncoder,
            indent=2,
            sort_keys=True,
            ensure_ascii=False,
        )
        f.write("\n")


def ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path
