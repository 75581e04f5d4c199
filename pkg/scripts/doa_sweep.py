"""DOA error versus SNR for a single band-limited source swept around the array.

    python scripts/doa_sweep.py [--step 10] [--trials 3]
"""

import argparse
import math

import numpy as np

from ioi_fusion.core import FusionConfig, wrap_degrees
from ioi_fusion.doa import compute_covariance, music_pseudospectrum
from ioi_fusion.scenario import SPEECH_BAND, synthesize_plane_waves


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--step", type=float, default=10.0)
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--snr", type=float, nargs="*", default=[math.inf, 20, 10, 5, 0, -5])
    args = ap.parse_args()

    cfg = FusionConfig()
    doa = cfg.doa
    print(f"{'snr_db':>7} {'mean_err':>9} {'p95_err':>8} {'max_err':>8} {'<=2deg':>7}")
    for snr in args.snr:
        errs = []
        for trial in range(args.trials):
            for i, az in enumerate(np.arange(-180, 180, args.step)):
                rng = np.random.default_rng([trial, i])
                x = synthesize_plane_waves([(az, SPEECH_BAND, 1.0)], cfg.array, 1600, doa.sample_rate, rng, snr)
                sp = music_pseudospectrum(compute_covariance(x, doa), cfg.array, doa)
                errs.append(abs(wrap_degrees(sp.argmax_azimuth() - az)))
        errs = np.array(errs)
        print(f"{snr:>7} {errs.mean():>9.2f} {np.percentile(errs, 95):>8.2f} {errs.max():>8.1f} "
              f"{np.mean(errs <= 2):>7.1%}")


if __name__ == "__main__":
    main()
