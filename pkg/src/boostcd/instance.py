"""Boosting instances.

An instance is an m-by-n real matrix with entries in [-1, 1]: entry
(i, j) is the negated signed prediction -y_i * h_j(x_i) of weak learner
j on example i, so negative margins A @ lam are good.  Serialization
uses decimal strings with 17 significant digits, which round-trip
binary doubles bit-exactly.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass

import numpy as np


class InstanceValidationError(ValueError):
    """Entries outside [-1, 1] or non-finite; ``offenders`` lists (i, j)."""

    def __init__(self, message, offenders=None):
        super().__init__(message)
        self.offenders = list(offenders) if offenders else []


def _validated_matrix(entries) -> np.ndarray:
    a = np.array(entries, dtype=float, order="C")
    if a.ndim != 2:
        raise ValueError(f"instance matrix must be 2-dimensional, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"instance matrix must be at least 1x1, got shape {a.shape}")
    bad = ~(np.isfinite(a) & (np.abs(a) <= 1.0))
    if np.any(bad):
        offenders = [(int(i), int(j)) for i, j in zip(*np.nonzero(bad))]
        shown = ", ".join(f"({i},{j})={a[i, j]!r}" for i, j in offenders[:8])
        more = "" if len(offenders) <= 8 else f" and {len(offenders) - 8} more"
        raise InstanceValidationError(
            f"entries must be finite and in [-1, 1]; offending (row, col), "
            f"0-based: {shown}{more}",
            offenders,
        )
    return a


@dataclass(frozen=True, eq=False)
class BoostInstance:
    a: np.ndarray

    def __post_init__(self):
        a = _validated_matrix(self.a)
        a.flags.writeable = False
        object.__setattr__(self, "a", a)

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]

    def row_subset(self, rows0) -> "BoostInstance":
        """Sub-instance keeping the given 0-based rows, in order."""
        rows0 = list(rows0)
        if not rows0:
            raise ValueError("row subset must be nonempty")
        return BoostInstance(self.a[rows0, :])


def make_instance(entries) -> BoostInstance:
    return BoostInstance(np.asarray(entries, dtype=float))


@dataclass(frozen=True)
class LabeledSample:
    """Labels y in {-1, +1}^m and confidence-rated predictions in [-1, 1]^(m x n)."""

    labels: np.ndarray
    predictions: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.labels, dtype=float)
        h = np.asarray(self.predictions, dtype=float)
        if y.ndim != 1 or h.ndim != 2 or h.shape[0] != y.shape[0]:
            raise ValueError(
                f"need labels (m,) and predictions (m, n); got {y.shape} and {h.shape}"
            )
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")
        if not np.all(np.isfinite(h) & (np.abs(h) <= 1.0)):
            raise ValueError("predictions must be finite and in [-1, 1]")
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "predictions", h)


def build_instance(sample: LabeledSample) -> BoostInstance:
    """Fold labels into predictions: a_ij = -y_i * h_j(x_i)."""
    return BoostInstance(-sample.labels[:, None] * sample.predictions)


def margins(inst: BoostInstance, lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (inst.n,):
        raise ValueError(f"lam must have shape ({inst.n},), got {lam.shape}")
    if not np.all(np.isfinite(lam)):
        raise ValueError("lam must be finite")
    return inst.a @ lam


def training_error(inst: BoostInstance, lam) -> float:
    """Fraction of examples not strictly beaten: margin >= 0 counts as an error."""
    return float(np.count_nonzero(margins(inst, lam) >= 0.0)) / inst.m


# ---------------------------------------------------------------------------
# serialization

def _fmt(v: float) -> str:
    # 17 significant decimal digits: lossless for binary64
    return "%.17g" % v


def to_json(inst: BoostInstance) -> str:
    rows = ",\n    ".join(
        "[" + ", ".join(_fmt(v) for v in row) + "]" for row in inst.a
    )
    return (
        '{\n  "m": %d,\n  "n": %d,\n  "entries": [\n    %s\n  ]\n}\n'
        % (inst.m, inst.n, rows)
    )


def from_json(text: str) -> BoostInstance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed instance JSON: {exc}") from exc
    if not isinstance(obj, dict) or not {"m", "n", "entries"} <= set(obj):
        raise ValueError('instance JSON needs keys "m", "n", "entries"')
    inst = make_instance(obj["entries"])
    if inst.m != obj["m"] or inst.n != obj["n"]:
        raise ValueError(
            f"declared shape ({obj['m']}, {obj['n']}) does not match "
            f"entries shape ({inst.m}, {inst.n})"
        )
    return inst


def to_csv(inst: BoostInstance) -> str:
    return "\n".join(",".join(_fmt(v) for v in row) for row in inst.a) + "\n"


def from_csv(text: str) -> BoostInstance:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError as exc:
            raise ValueError(f"malformed instance CSV at line {lineno}: {exc}") from exc
    if not rows:
        raise ValueError("instance CSV is empty")
    if len({len(r) for r in rows}) != 1:
        raise ValueError("instance CSV rows have unequal lengths")
    return make_instance(rows)


def atomic_write_text(path, text: str) -> None:
    """Write text to path via a temp file + rename, so readers never see
    a partial file."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def read_instance(path) -> BoostInstance:
    with open(path, "r") as fh:
        text = fh.read()
    name = str(path).lower()
    if name.endswith(".json") or text.lstrip().startswith("{"):
        return from_json(text)
    return from_csv(text)


def write_instance(inst: BoostInstance, path) -> None:
    text = to_csv(inst) if str(path).lower().endswith(".csv") else to_json(inst)
    atomic_write_text(path, text)
