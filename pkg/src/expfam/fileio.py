"""Family and reward-problem documents, plus report serialization.

Documents are JSON.  A family document carries ``format_version`` (currently
1), ``labels``, ``base``, and ``statistic`` (list of rows).  A reward
problem replaces ``statistic`` with a flat ``reward`` list and may carry a
default ``beta``.

Reports are JSON too, written by a small serializer of our own so that
floats always carry 17 significant digits (lossless for 64-bit floats) and
identical inputs yield byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import math
from enum import Enum
from pathlib import Path

import numpy as np

from .control import RewardProblem
from .errors import DocumentFormatError, ValidationError
from .family import ExponentialFamily

FORMAT_VERSION = 1


def sha256_digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _load_json(path) -> tuple[dict, str]:
    raw = Path(path).read_bytes()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise DocumentFormatError(f"{path}: not valid UTF-8 text ({exc})") from exc
    except json.JSONDecodeError as exc:
        raise DocumentFormatError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise DocumentFormatError(f"{path}: top level must be an object")
    return doc, sha256_digest(raw)


def _require(doc: dict, field: str, kinds, path) -> object:
    if field not in doc:
        raise DocumentFormatError(f"{path}: missing required field {field!r}")
    value = doc[field]
    if not isinstance(value, kinds):
        raise DocumentFormatError(f"{path}: field {field!r} has the wrong type")
    return value


def _check_version(doc: dict, path) -> None:
    version = _require(doc, "format_version", int, path)
    if isinstance(version, bool) or version != FORMAT_VERSION:
        raise DocumentFormatError(
            f"{path}: unsupported format_version {version!r}, expected {FORMAT_VERSION}"
        )


def _number_list(doc: dict, field: str, path) -> list[float]:
    value = _require(doc, field, list, path)
    out = []
    for i, x in enumerate(value):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise DocumentFormatError(
                f"{path}: field {field!r} entry {i} is not a number"
            )
        out.append(float(x))
    return out


def load_family(path) -> tuple[ExponentialFamily, str]:
    """Parse a family document.  Returns the family and the file digest.

    Structural problems (bad JSON, missing fields, ragged rows) raise
    :class:`DocumentFormatError`; value problems (negative base entries and
    the like) surface as :class:`ValidationError` from the constructor.
    """
    doc, digest = _load_json(path)
    _check_version(doc, path)
    labels = _require(doc, "labels", list, path)
    if not all(isinstance(x, str) for x in labels):
        raise DocumentFormatError(f"{path}: field 'labels' must be a list of strings")
    base = _number_list(doc, "base", path)
    rows = _require(doc, "statistic", list, path)
    statistic = []
    width = None
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise DocumentFormatError(f"{path}: field 'statistic' row {i} is not a list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DocumentFormatError(
                f"{path}: field 'statistic' row {i} has {len(row)} entries, expected {width}"
            )
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise DocumentFormatError(
                    f"{path}: field 'statistic' entry ({i}, {j}) is not a number"
                )
        statistic.append([float(x) for x in row])
    family = ExponentialFamily(
        labels=tuple(labels), base=np.array(base), statistic=np.array(statistic)
    )
    return family, digest


def load_reward_problem(path, beta=None) -> tuple[RewardProblem, str, float | None]:
    """Parse a reward-problem document.

    ``beta`` overrides the document's own value when given.  Returns the
    problem, the digest, and the document's default beta (or None).
    """
    doc, digest = _load_json(path)
    _check_version(doc, path)
    labels = _require(doc, "labels", list, path)
    if not all(isinstance(x, str) for x in labels):
        raise DocumentFormatError(f"{path}: field 'labels' must be a list of strings")
    base = _number_list(doc, "base", path)
    reward = _number_list(doc, "reward", path)
    doc_beta = None
    if "beta" in doc:
        value = doc["beta"]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DocumentFormatError(f"{path}: field 'beta' is not a number")
        doc_beta = float(value)
    chosen = beta if beta is not None else doc_beta
    if chosen is None:
        raise ValidationError(
            f"{path}: no temperature given (document has no 'beta' and none was passed)"
        )
    problem = RewardProblem(
        labels=tuple(labels), base=np.array(base), reward=np.array(reward), beta=chosen
    )
    return problem, digest, doc_beta


def family_to_document(family: ExponentialFamily) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "labels": list(family.labels),
        "base": family.base.tolist(),
        "statistic": family.statistic.tolist(),
    }


def save_family(family: ExponentialFamily, path) -> None:
    Path(path).write_text(dump_report(family_to_document(family)) + "\n")


# ---------------------------------------------------------------------------
# Report serialization: JSON with floats at 17 significant digits.
# ---------------------------------------------------------------------------


def _format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17e")


def _serialize(value) -> str:
    if isinstance(value, Enum):
        return _serialize(value.value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if value is None:
        return "null"
    if isinstance(value, np.ndarray):
        return _serialize(value.tolist())
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_serialize(v) for v in value) + "]"
    if isinstance(value, dict):
        parts = (f"{json.dumps(str(k))}: {_serialize(v)}" for k, v in value.items())
        return "{" + ", ".join(parts) + "}"
    raise TypeError(f"cannot serialize {type(value).__name__} into a report")


def dump_report(report: dict) -> str:
    """Serialize a report with each top-level field on its own line.

    Line-per-field layout keeps the file diffable and lets consumers drop
    the wall-time line when comparing runs byte for byte.
    """
    lines = [f"  {json.dumps(str(k))}: {_serialize(v)}" for k, v in report.items()]
    return "{\n" + ",\n".join(lines) + "\n}"


def write_report(report: dict, path) -> None:
    Path(path).write_text(dump_report(report) + "\n")
