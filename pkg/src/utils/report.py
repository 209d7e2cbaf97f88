import io
import json
import math
import os
import tempfile
from typing import Any, Sequence

import numpy as np
import pandas as pd

FLOAT_FORMAT = "%.12g"


class EmptyReportError(ValueError):
    pass


class ReportWriteError(OSError):
    pass


def convert_to_serializable(obj: Any) -> Any:
    """Convert report values to JSON-ready data with floats rounded to 12 significant digits."""
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return bool(obj) if isinstance(obj, np.bool_) else obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if not math.isfinite(value) else float(FLOAT_FORMAT % value)
    if isinstance(obj, (complex, np.complexfloating)):
        return [convert_to_serializable(obj.real), convert_to_serializable(obj.imag)]
    if hasattr(obj, "model_dump"):
        return convert_to_serializable(obj.model_dump())
    if isinstance(obj, np.ndarray):
        return convert_to_serializable(obj.tolist())
    if isinstance(obj, dict):
        return {str(key): convert_to_serializable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [convert_to_serializable(item) for item in items]
    return str(obj)


def render_report(records: Sequence[dict], format: str, columns: Sequence[str] | None = None) -> str:
    if not records:
        raise EmptyReportError("refusing to write an empty report")
    if format == "json":
        return "".join(json.dumps(convert_to_serializable(record)) + "\n" for record in records)
    if format == "csv":
        frame = pd.DataFrame([convert_to_serializable(record) for record in records])
        if columns is not None:
            frame = frame.reindex(columns=list(columns))
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return buffer.getvalue()
    raise ValueError(f"unknown report format {format!r}; expected json or csv")


def emit_report(records: Sequence[dict], format: str, path: str, columns: Sequence[str] | None = None) -> None:
    """Write records to path through a temporary file in the same directory, renamed into place."""
    content = render_report(records, format, columns)
    directory = os.path.dirname(os.path.abspath(path))
    temp_path = None
    try:
        with tempfile.NamedTemporaryFile("w", dir=directory, prefix=".ergolab-", suffix=".tmp", delete=False, encoding="utf-8", newline="") as handle:
            temp_path = handle.name
            handle.write(content)
        os.replace(temp_path, path)
    except OSError as e:
        if temp_path and os.path.exists(temp_path):
            os.remove(temp_path)
        raise ReportWriteError(f"cannot write report to {path}: {e}") from e
