"""Event counts on a scenario as the gaze thresholds vary.

    python scripts/threshold_sweep.py [scenario.scn]
"""

import itertools
import sys
from pathlib import Path

from ioi_fusion.core import EventKind, FusionConfig
from ioi_fusion.evaluation import evaluate
from ioi_fusion.scenario import load_scenario_file, run_scenario

DEFAULT = Path(__file__).resolve().parent.parent / "scenarios" / "mixed_60s.scn"


def main(path):
    sc = load_scenario_file(path)
    print(f"{'dt1':>4} {'dt2':>4} {'AV':>3} {'VO':>3} {'recall':>7}")
    for d1, d2 in itertools.product([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]):
        events = run_scenario(sc, FusionConfig(delta_t1=d1, delta_t2=d2)).events
        n_av = sum(e.kind is EventKind.AUDIO_VISION for e in events)
        rep = evaluate(events, sc.ground_truth_ioi)
        print(f"{d1:>4} {d2:>4} {n_av:>3} {len(events) - n_av:>3} {rep.recall:>6.1f}%")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else DEFAULT)
