"""Reading follicular-study tables and shaping them into competing-risks data.

The expected input is a whitespace-separated table with a header line naming
at least the columns ``resp`` (treatment response), ``relsite`` (relapse
site, empty or NA when none), ``stat`` (1 = dead at last follow-up) and
``dftime`` (disease-free time, positive).  Column order is free and extra
columns are carried along untouched.

Each row is classified into a cause:

* cause 1 (disease): no response (``resp`` != "CR") or any relapse site;
* cause 2 (death without relapse): complete response, no relapse site and
  ``stat`` == 1;
* censored otherwise.

Two shapes of analysis data are produced.  Case 1 keeps the failures only and
treats them as a complete sample.  Case 2 keeps every subject: censored
subjects between consecutive failures are counted as progressively withdrawn
at the earlier failure, and subjects censored before the first failure are
folded into the first failure's withdrawal count.
"""

from __future__ import annotations

import shlex
import warnings
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path

import numpy as np

from .likelihood import ProgressiveSample, Record

__all__ = [
    "CauseLabel",
    "FollicularRow",
    "TiedTimesWarning",
    "compute_cause",
    "parse_dataset",
    "prepare_case1",
    "prepare_case2",
    "write_dataset",
    "read_dataset",
]

REQUIRED_COLUMNS = ("resp", "relsite", "stat", "dftime")
MISSING_TOKENS = frozenset({"", "NA"})


class CauseLabel(IntEnum):
    CENSORED = 0
    DISEASE = 1
    DEATH = 2


class TiedTimesWarning(UserWarning):
    """Tied failure times were separated by minimal float perturbation."""


@dataclass(frozen=True)
class FollicularRow:
    """One subject: the four analysis columns plus everything else verbatim."""

    resp: str
    relsite: str
    stat: int
    dftime: float
    extra: dict = field(default_factory=dict)


def compute_cause(row):
    """Classify a subject; relapse evidence wins over survival status."""
    if row.resp != "CR" or row.relsite != "":
        return CauseLabel.DISEASE
    if row.stat == 1:
        return CauseLabel.DEATH
    return CauseLabel.CENSORED


def _read_lines(source):
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    return text.splitlines()


def parse_dataset(source):
    """Parse a follicular table from a path or file-like object.

    Raises ValueError naming the offending line number for missing columns,
    ragged rows and malformed numerics.  Empty lines are skipped.  ``relsite``
    tokens "" and "NA" mean no relapse site.
    """
    lines = _read_lines(source)
    rows = []
    header = None
    for lineno, raw in enumerate(lines, start=1):
        tokens = shlex.split(raw, comments=True)
        if not tokens:
            continue
        if header is None:
            header = tokens
            missing = [c for c in REQUIRED_COLUMNS if c not in header]
            if missing:
                raise ValueError(
                    f"line {lineno}: header lacks required columns {missing}"
                )
            continue
        if len(tokens) != len(header):
            raise ValueError(
                f"line {lineno}: expected {len(header)} fields, got {len(tokens)}"
            )
        record = dict(zip(header, tokens))
        try:
            stat = int(record["stat"])
        except ValueError:
            raise ValueError(
                f"line {lineno}: stat must be an integer, got {record['stat']!r}"
            ) from None
        if stat not in (0, 1):
            raise ValueError(f"line {lineno}: stat must be 0 or 1, got {stat}")
        try:
            dftime = float(record["dftime"])
        except ValueError:
            raise ValueError(
                f"line {lineno}: dftime must be a number, got {record['dftime']!r}"
            ) from None
        if not dftime > 0.0:
            raise ValueError(f"line {lineno}: dftime must be positive, got {dftime}")
        relsite = record["relsite"]
        if relsite in MISSING_TOKENS:
            relsite = ""
        extra = {
            k: v for k, v in record.items() if k not in REQUIRED_COLUMNS
        }
        rows.append(
            FollicularRow(
                resp=record["resp"],
                relsite=relsite,
                stat=stat,
                dftime=dftime,
                extra=extra,
            )
        )
    if header is None:
        raise ValueError("empty input: missing header line")
    return rows


def _ordered_events(rows):
    """Rows sorted by time with failures before censorings at equal times."""
    return sorted(
        rows, key=lambda r: (r.dftime, compute_cause(r) is CauseLabel.CENSORED)
    )


def _assemble(rows, progressive):
    failures = []
    leading_censored = 0
    for row in _ordered_events(rows):
        label = compute_cause(row)
        if label is CauseLabel.CENSORED:
            if not progressive:
                continue
            if failures:
                failures[-1][2] += 1
            else:
                leading_censored += 1
            continue
        time = row.dftime
        if failures and time <= failures[-1][0]:
            time = float(np.nextafter(failures[-1][0], np.inf))
            warnings.warn(
                f"tied failure time {row.dftime!r} perturbed upward to keep "
                "the order strict",
                TiedTimesWarning,
                stacklevel=3,
            )
        failures.append([time, int(label), 0])
    if not failures:
        raise ValueError("no failures: every subject is censored")
    if progressive:
        failures[0][2] += leading_censored
    records = [Record(t, c, r) for t, c, r in failures]
    n = len(rows) if progressive else len(records)
    return ProgressiveSample(records, n)


def prepare_case1(rows):
    """Failures only, treated as a complete sample of their own size."""
    return _assemble(rows, progressive=False)


def prepare_case2(rows):
    """All subjects; censored ones become progressive withdrawals at the
    preceding failure (before the first failure: at the first)."""
    return _assemble(rows, progressive=True)


def write_dataset(sample, path):
    """Write a sample in the canonical exchange format.

    A ``# n=<n>`` comment line, a ``time,cause,removed`` header, then one CSV
    row per failure with shortest round-trip float formatting.
    """
    lines = [f"# n={sample.n}", "time,cause,removed"]
    for r in sample.records:
        lines.append(f"{r.time!r},{int(r.cause)},{int(r.removed)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_dataset(source):
    """Read the canonical exchange format back into a ProgressiveSample."""
    lines = _read_lines(source)
    n = None
    header_seen = False
    records = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("n="):
                try:
                    n = int(body[2:])
                except ValueError:
                    raise ValueError(
                        f"line {lineno}: malformed cohort size comment {line!r}"
                    ) from None
            continue
        if not header_seen:
            if [c.strip() for c in line.split(",")] != ["time", "cause", "removed"]:
                raise ValueError(
                    f"line {lineno}: expected header 'time,cause,removed', got {line!r}"
                )
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 3 fields, got {len(parts)}")
        try:
            record = Record(float(parts[0]), int(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        records.append(record)
    if not header_seen:
        raise ValueError("missing 'time,cause,removed' header")
    if n is None:
        raise ValueError("missing '# n=<cohort size>' comment")
    return ProgressiveSample(records, n)
