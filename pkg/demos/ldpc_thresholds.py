#!/usr/bin/env python3
"""LDPC decoding thresholds via the MSE chart recursion.

Runs Gaussian-surrogate density evolution on the bit-to-check SNR for the
regular (3,6) ensemble and for an irregular rate-1/2 profile designed by
curve matching, locating the convergence threshold in Eb/N0 by bisection.
"""

from msechart import threshold, trajectory, ebn0_db_to_gamma
from msechart.config import resolve_preset

for name in ("regular-3-6", "designed-ldpc-05db"):
    prof = resolve_preset(name)
    th = threshold(prof, lo_db=-0.5, hi_db=3.0, tol_db=0.01)
    print(f"{name}: rate {prof.design_rate:.3f}, threshold {th:.3f} dB")
    for db in (th - 0.1, th + 0.1):
        tr = trajectory(prof, ebn0_db_to_gamma(db, prof.design_rate), max_iter=500)
        state = "converges" if tr.converged else f"stalls at mmse {tr.stalled_at:.4f}"
        print(f"  at {db:+.3f} dB: {state} ({tr.iterations_used} iterations)")
    print()
