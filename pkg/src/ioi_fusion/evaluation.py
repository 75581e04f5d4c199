"""Precision / recall / F-measure scoring of IoI event logs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

from .core import IoIEvent
from .scenario import TruthEntry


def f_measure(precision: float, recall: float) -> float:
    """Harmonic mean of two percentages; 0 when both are 0."""
    if precision == 0 and recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def match_events(events: Sequence[IoIEvent], ground_truth: Sequence[TruthEntry],
                 window: float = 1.0) -> Tuple[int, int, int]:
    """Greedy one-to-one matching in event time order.

    Each event takes the earliest unmatched truth entry of the same person
    within ``window`` seconds. Returns (TP, FP, FN).
    """
    unmatched = sorted(ground_truth, key=lambda g: (g.t_onset, g.person))
    tp = 0
    for ev in sorted(events, key=lambda e: (e.timestamp, e.track_id)):
        for i, g in enumerate(unmatched):
            if g.person == ev.track_id and abs(g.t_onset - ev.timestamp) <= window + 1e-9:
                del unmatched[i]
                tp += 1
                break
    return tp, len(events) - tp, len(unmatched)


@dataclass(frozen=True)
class EvalReport:
    true_positives: int
    false_positives: int
    false_negatives: int

    @property
    def precision(self) -> float:
        d = self.true_positives + self.false_positives
        return 100.0 * self.true_positives / d if d else 0.0

    @property
    def recall(self) -> float:
        d = self.true_positives + self.false_negatives
        return 100.0 * self.true_positives / d if d else 0.0

    @property
    def f_measure(self) -> float:
        return f_measure(self.precision, self.recall)

    def __add__(self, other: "EvalReport") -> "EvalReport":
        return EvalReport(self.true_positives + other.true_positives,
                          self.false_positives + other.false_positives,
                          self.false_negatives + other.false_negatives)


def evaluate(events: Sequence[IoIEvent], ground_truth: Sequence[TruthEntry],
             window: float = 1.0) -> EvalReport:
    return EvalReport(*match_events(events, ground_truth, window))


def format_table(rows: Iterable[Tuple[str, EvalReport]], csv: bool = False) -> str:
    rows = list(rows)
    if csv:
        lines = ["name,tp,fp,fn,precision,recall,f_measure"]
        lines += [f"{n},{r.true_positives},{r.false_positives},{r.false_negatives},"
                  f"{r.precision:.2f},{r.recall:.2f},{r.f_measure:.2f}" for n, r in rows]
        return "\n".join(lines) + "\n"
    width = max([len(n) for n, _ in rows] + [8])
    head = f"{'':<{width}}  {'TP':>4} {'FP':>4} {'FN':>4}  {'Precision':>10} {'Recall':>10} {'F-measure':>10}"
    lines = [head, "-" * len(head)]
    for n, r in rows:
        lines.append(f"{n:<{width}}  {r.true_positives:>4} {r.false_positives:>4} {r.false_negatives:>4}  "
                     f"{r.precision:>8.2f} % {r.recall:>8.2f} % {r.f_measure:>8.2f} %")
    return "\n".join(lines) + "\n"
