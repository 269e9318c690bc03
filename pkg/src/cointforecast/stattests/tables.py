"""Johansen trace critical values, loaded from the bundled data file.

File schema (tab separated, ``#`` comment lines first)::

    deterministic  dimension  significance  critical_value

``dimension`` is the number of common stochastic trends under the null
(``p - r``). A ``# sha256: <hex>`` header line carries the digest of the
data lines and is verified on load.
"""
from __future__ import annotations

import functools
import hashlib
import math
from importlib import resources

import numpy as np

from ..errors import TableChecksumError

TABLE_FILE = "johansen_trace.tsv"
P_FLOOR, P_CEIL = 0.001, 0.999


class TraceTable:
    def __init__(self, rows):
        grouped = {}
        for kind, dim, level, cv in rows:
            grouped.setdefault((kind, dim), []).append((cv, level))
        self._data = {}
        for key, pairs in grouped.items():
            pairs.sort()
            cvs = np.array([p[0] for p in pairs])
            levels = np.array([p[1] for p in pairs])
            if np.any(np.diff(cvs) <= 0) or np.any(np.diff(levels) >= 0):
                raise ValueError(f"table for {key} is not monotone")
            self._data[key] = (cvs, levels)

    def _lookup(self, deterministic, dimension):
        try:
            return self._data[(deterministic, dimension)]
        except KeyError:
            raise KeyError(
                f"no trace critical values for deterministic={deterministic!r}, "
                f"dimension={dimension}"
            ) from None

    def critical_value(self, deterministic: str, dimension: int, significance: float) -> float:
        cvs, levels = self._lookup(deterministic, dimension)
        hit = np.flatnonzero(np.isclose(levels, significance))
        if hit.size == 0:
            raise KeyError(f"significance {significance} is not tabulated")
        return float(cvs[hit[0]])

    def p_value(self, deterministic: str, dimension: int, statistic: float) -> float:
        """Upper-tail probability, log-linear in the level between table rows."""
        cvs, levels = self._lookup(deterministic, dimension)
        if statistic <= cvs[0]:
            return P_CEIL
        if statistic >= cvs[-1]:
            return P_FLOOR
        logp = np.interp(statistic, cvs, np.log(levels))
        return float(min(P_CEIL, max(P_FLOOR, math.exp(logp))))


def parse_table(text: str, verify: bool = True) -> TraceTable:
    digest = None
    body = []
    for line in text.splitlines(keepends=True):
        if line.startswith("#"):
            if line.startswith("# sha256:"):
                digest = line.split(":", 1)[1].strip()
            continue
        if line.strip():
            body.append(line)
    if verify:
        actual = hashlib.sha256("".join(body).encode()).hexdigest()
        if digest is None or actual != digest:
            raise TableChecksumError("critical-value table failed checksum verification")
    rows = []
    for line in body:
        kind, dim, level, cv = line.split("\t")
        rows.append((kind, int(dim), float(level), float(cv)))
    return TraceTable(rows)


@functools.lru_cache(maxsize=None)
def trace_table() -> TraceTable:
    text = resources.files("cointforecast.data").joinpath(TABLE_FILE).read_text()
    return parse_table(text)
