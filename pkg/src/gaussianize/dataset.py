"""Longitudinal (subject x session x measure) data and its long CSV format.

The CSV header is exactly ``subject,session,measure,value``; one observation
per row. Values are written with 17 significant digits so a read after a
write reproduces every float exactly.
"""
import csv
import io
import math

import numpy as np

from .errors import DataFormatError, DomainError

__all__ = ["LongitudinalDataset", "read_long_csv", "write_long_csv", "CSV_HEADER", "format_value"]

CSV_HEADER = ("subject", "session", "measure", "value")


def format_value(v):
    return format(float(v), ".17g")


class LongitudinalDataset:
    """Immutable collection of ``(subject, session, measure) -> value``.

    Records keep their insertion order, which is also the order they are
    written back out.
    """

    def __init__(self, records=(), session_times=None):
        subjects, sessions, measures, values = [], [], [], []
        index = {}
        for i, (subject, session, measure, value) in enumerate(records):
            subject, measure = str(subject), str(measure)
            session = int(session)
            value = float(value)
            if session < 0:
                raise DomainError(f"session index must be non-negative, got {session}")
            if not math.isfinite(value):
                raise DomainError(f"value for {(subject, session, measure)} is not finite")
            key = (subject, session, measure)
            if key in index:
                raise DomainError(f"duplicate observation for subject={subject!r} session={session} measure={measure!r}")
            index[key] = i
            subjects.append(subject)
            sessions.append(session)
            measures.append(measure)
            values.append(value)
        self._subjects = tuple(subjects)
        self._sessions = np.array(sessions, dtype=np.int64)
        self._measures = tuple(measures)
        self._values = np.array(values, dtype=np.float64)
        self._values.setflags(write=False)
        self._sessions.setflags(write=False)
        self._index = index
        self.session_times = dict(session_times) if session_times else None

    def __len__(self):
        return len(self._values)

    def __iter__(self):
        return iter(zip(self._subjects, self._sessions.tolist(), self._measures, self._values.tolist()))

    def __eq__(self, other):
        if not isinstance(other, LongitudinalDataset):
            return NotImplemented
        return list(self) == list(other)

    __hash__ = None

    def measures(self):
        return sorted(set(self._measures))

    def subjects(self):
        return sorted(set(self._subjects))

    def sessions(self, measure=None):
        if measure is None:
            return sorted(set(self._sessions.tolist()))
        return sorted({s for s, m in zip(self._sessions.tolist(), self._measures) if m == measure})

    def _rows(self, measure):
        rows = [i for i, m in enumerate(self._measures) if m == measure]
        if not rows:
            raise KeyError(measure)
        return np.array(rows, dtype=np.int64)

    def pooled(self, measure):
        """All values of one measure across sessions, in record order."""
        return self._values[self._rows(measure)].copy()

    def session_values(self, measure, session):
        """``{subject: value}`` for one measure at one session."""
        return {
            self._subjects[i]: float(self._values[i])
            for i in self._rows(measure)
            if self._sessions[i] == session
        }

    def replace_values(self, measure, func, per_session=False):
        """New dataset with ``func`` applied to one measure's values.

        ``func`` maps a 1-d array to an array of the same length. It sees the
        pooled values of the measure, or each session's values separately
        when ``per_session`` is true.
        """
        rows = self._rows(measure)
        new = self._values.copy()
        groups = [rows]
        if per_session:
            sess = self._sessions[rows]
            groups = [rows[sess == s] for s in np.unique(sess)]
        for g in groups:
            out = np.asarray(func(self._values[g]), dtype=np.float64)
            if out.shape != g.shape:
                raise DomainError("transform must return one value per observation")
            new[g] = out
        return LongitudinalDataset(
            zip(self._subjects, self._sessions.tolist(), self._measures, new.tolist()),
            self.session_times,
        )

    def subset(self, measures):
        keep = set(measures)
        return LongitudinalDataset((r for r in self if r[2] in keep), self.session_times)


def read_long_csv(source):
    """Read the long CSV format from a path or an open text file.

    Raises
    ------
    DataFormatError
        On a wrong header, short rows, non-integer sessions, non-finite
        values or duplicate keys; the message carries the 1-based line.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, newline="") as fh:
            text = fh.read()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError("empty input; expected header subject,session,measure,value", 1) from None
    if tuple(h.strip() for h in header) != CSV_HEADER:
        raise DataFormatError(f"header must be {','.join(CSV_HEADER)}, got {','.join(header)}", 1)
    records, seen = [], set()
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise DataFormatError(f"expected 4 fields, got {len(row)}", line)
        subject, session, measure, value = (c.strip() for c in row)
        try:
            session_i = int(session)
            if session_i < 0:
                raise ValueError
        except ValueError:
            raise DataFormatError(f"session must be a non-negative integer, got {session!r}", line) from None
        try:
            v = float(value)
        except ValueError:
            raise DataFormatError(f"value {value!r} is not a number", line) from None
        if not math.isfinite(v):
            raise DataFormatError(f"value {value!r} is not finite", line)
        key = (subject, session_i, measure)
        if key in seen:
            raise DataFormatError(f"duplicate row for subject={subject!r} session={session_i} measure={measure!r}", line)
        seen.add(key)
        records.append((subject, session_i, measure, v))
    return LongitudinalDataset(records)


def write_long_csv(data, dest=None):
    """Write ``data`` as long CSV to a path or file; returns the text when ``dest`` is None."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for subject, session, measure, value in data:
        writer.writerow((subject, session, measure, format_value(value)))
    text = buf.getvalue()
    if dest is None:
        return text
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", newline="") as fh:
            fh.write(text)
    return None
