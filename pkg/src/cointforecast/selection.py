"""Choose which exogenous series feed the forecaster.

Three strategies: keep everything, keep the ``k`` candidates most positively
correlated with the target (price levels), or keep the ``k`` candidates with
the smallest pairwise Johansen rank-zero p-value against the target.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

from .errors import (
    InsufficientCandidatesError,
    SingularMatrixError,
    UndefinedCorrelationError,
)
from .stattests import johansen_pairwise, pearson_correlation
from .timeseries import AlignedPanel

METHODS = ("all", "correlation", "cointegration")
SCORE_MEANING = {
    "all": "none",
    "correlation": "correlation-coefficient",
    "cointegration": "cointegration-p-value",
}
DEFAULT_K = 5


@dataclass(frozen=True)
class SelectionReport:
    method: str
    ranked: tuple
    chosen: tuple
    k: int
    target: str = ""
    excluded: tuple = ()
    undefined: tuple = ()

    @property
    def scores_meaning(self) -> str:
        return SCORE_MEANING[self.method]

    def feature_columns(self) -> list:
        """Model inputs: the chosen companions followed by the target itself."""
        return [*self.chosen, self.target]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ranked"] = [[t, _json_score(s)] for t, s in self.ranked]
        d["scores_meaning"] = self.scores_meaning
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "SelectionReport":
        return cls(
            method=d["method"],
            ranked=tuple((t, None if s is None else float(s)) for t, s in d["ranked"]),
            chosen=tuple(d["chosen"]),
            k=int(d["k"]),
            target=d.get("target", ""),
            excluded=tuple(d.get("excluded", ())),
            undefined=tuple(d.get("undefined", ())),
        )


def _json_score(score):
    if score is None or (isinstance(score, float) and math.isnan(score)):
        return None
    return score


def _check_k(k, n_candidates):
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > n_candidates:
        raise InsufficientCandidatesError(f"k={k} exceeds the {n_candidates} candidates")


def select_all(panel: AlignedPanel) -> SelectionReport:
    cands = panel.candidates
    return SelectionReport(
        method="all",
        ranked=tuple((t, None) for t in cands),
        chosen=tuple(cands),
        k=len(cands),
        target=panel.target,
    )


def select_by_correlation(panel: AlignedPanel, k: int = DEFAULT_K) -> SelectionReport:
    cands = panel.candidates
    _check_k(k, len(cands))
    target = panel.column(panel.target_index)
    scored, undefined = [], []
    for name in cands:
        try:
            scored.append((name, pearson_correlation(target, panel.column(name))))
        except UndefinedCorrelationError:
            undefined.append(name)
    # sorted() is stable, so equal coefficients keep input order
    scored.sort(key=lambda item: -item[1])
    ranked = scored + [(name, None) for name in undefined]
    return SelectionReport(
        method="correlation",
        ranked=tuple(ranked),
        chosen=tuple(name for name, _ in ranked[:k]),
        k=k,
        target=panel.target,
        undefined=tuple(undefined),
    )


def select_by_cointegration(panel: AlignedPanel, k: int = DEFAULT_K, lag_order: int = 1,
                            deterministic: str = "restricted") -> SelectionReport:
    cands = panel.candidates
    _check_k(k, len(cands))
    target = panel.column(panel.target_index)
    scored, excluded = [], []
    for name in cands:
        try:
            res = johansen_pairwise(target, panel.column(name), lag_order, deterministic)
        except SingularMatrixError:
            excluded.append(name)
            continue
        scored.append((name, res.p_values[0], -res.trace_stats[0]))
    if len(scored) < k:
        raise InsufficientCandidatesError(
            f"only {len(scored)} rankable candidates for k={k} (excluded: {excluded})"
        )
    # p-values are clamped at the table edges; the trace statistic breaks those ties
    scored.sort(key=lambda item: (item[1], item[2]))
    ranked = [(name, p) for name, p, _ in scored]
    return SelectionReport(
        method="cointegration",
        ranked=tuple(ranked),
        chosen=tuple(name for name, _ in ranked[:k]),
        k=k,
        target=panel.target,
        excluded=tuple(excluded),
    )


def select(panel: AlignedPanel, method: str, k: int = DEFAULT_K, lag_order: int = 1) -> SelectionReport:
    if method == "all":
        return select_all(panel)
    if method == "correlation":
        return select_by_correlation(panel, k)
    if method == "cointegration":
        return select_by_cointegration(panel, k, lag_order)
    raise ValueError(f"unknown selection method {method!r}; expected one of {METHODS}")
