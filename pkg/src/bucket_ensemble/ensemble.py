"""Decision fusion across the classifier-by-view grid.

For one test image every (classifier, view) cell contributes a decision in
{-1, +1} and a score in [0, 1]. Fusion works column-wise: each view keeps
its most frequent decision and the mean score of the cells that voted for
it, then the view with the highest agreeing score wins. All loops here are
plain Python on purpose: the grids are tiny (five rows, a handful of
columns) and the exhaustive regression suite calls this hundreds of
thousands of times.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError

TIE_BREAKS = ("prefer_positive", "lowest_index")


def _check_tie_break(tie_break: str) -> None:
    if tie_break not in TIE_BREAKS:
        raise ConfigError(
            f"tie_break must be one of {TIE_BREAKS}, got {tie_break!r}"
        )


@dataclass(frozen=True)
class DecisionRecord:
    """Per-image decision and score grids, classifiers by views."""

    decisions: tuple
    scores: tuple

    def __post_init__(self):
        d = tuple(tuple(row) for row in self.decisions)
        s = tuple(tuple(row) for row in self.scores)
        if not d or not d[0]:
            raise ValueError("decision grid must be non-empty")
        width = len(d[0])
        if any(len(row) != width for row in d):
            raise ValueError("decision grid must be rectangular")
        if len(s) != len(d) or any(len(row) != width for row in s):
            raise ValueError("score grid must match the decision grid shape")
        for row in d:
            for v in row:
                if v != 1 and v != -1:
                    raise ValueError(f"decisions must be -1 or +1, got {v!r}")
        for row in s:
            for v in row:
                if not 0.0 <= v <= 1.0:
                    raise ValueError(f"scores must lie in [0, 1], got {v!r}")
        object.__setattr__(self, "decisions", d)
        object.__setattr__(self, "scores", s)

    @property
    def n_classifiers(self) -> int:
        return len(self.decisions)

    @property
    def n_views(self) -> int:
        return len(self.decisions[0])


@dataclass(frozen=True)
class FusionOutcome:
    """Column summary plus the final fused call for one image."""

    modal_decisions: tuple
    modal_scores: tuple
    chosen_view: int
    decision: int
    score: float


def column_mode(decisions, scores, tie_break: str = "prefer_positive"):
    """Most frequent decision in one column and the mean agreeing score.

    Returns (modal_label, agreeing_indices, mean_score). A frequency tie
    resolves to +1 under "prefer_positive" or to the label of the first
    cell under "lowest_index".
    """
    _check_tie_break(tie_break)
    decisions = list(decisions)
    scores = list(scores)
    if not decisions:
        raise ValueError("column must be non-empty")
    if len(decisions) != len(scores):
        raise ValueError("decisions and scores must have equal length")
    n_pos = 0
    for d in decisions:
        if d == 1:
            n_pos += 1
        elif d != -1:
            raise ValueError(f"decisions must be -1 or +1, got {d!r}")
    n_neg = len(decisions) - n_pos
    if n_pos > n_neg:
        modal = 1
    elif n_neg > n_pos:
        modal = -1
    else:
        modal = 1 if tie_break == "prefer_positive" else decisions[0]
    agreeing = tuple(i for i, d in enumerate(decisions) if d == modal)
    mean_score = sum(scores[i] for i in agreeing) / len(agreeing)
    return modal, agreeing, mean_score


def fuse(record: DecisionRecord, tie_break: str = "prefer_positive") -> FusionOutcome:
    """Fuse one image's grid into a single decision and score.

    The winning view is the one whose modal decision carries the highest
    mean agreeing score; equal scores go to the lowest view index.
    """
    _check_tie_break(tie_break)
    n = record.n_classifiers
    m = record.n_views
    dm = []
    ds = []
    for j in range(m):
        col_d = [record.decisions[i][j] for i in range(n)]
        col_s = [record.scores[i][j] for i in range(n)]
        modal, _, mean_score = column_mode(col_d, col_s, tie_break)
        dm.append(modal)
        ds.append(mean_score)
    chosen = max(range(m), key=ds.__getitem__)  # first maximum: lowest index
    return FusionOutcome(
        modal_decisions=tuple(dm),
        modal_scores=tuple(ds),
        chosen_view=chosen,
        decision=dm[chosen],
        score=ds[chosen],
    )
