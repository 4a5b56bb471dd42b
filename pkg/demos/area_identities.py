#!/usr/bin/env python3
"""Area identities under MMSE-vs-SNR curves.

The area under phi(gamma) over all SNRs is exactly ln4 nats, and coded
curves partition it: a rate-R outer code holds R*ln4 on the a-priori axis
and (1-R)*ln4 on the extrinsic axis.  This script checks the identities
numerically for the uncoded channel, repetition codes, and an erasure
inner channel.
"""

import numpy as np

from msechart import (
    LN4,
    InnerChannelSpec,
    MmseSnrCurve,
    area,
    default_snr_grid,
    mutual_info_binary,
    phi,
    repetition_curve,
    uncoded_inner_curve,
)

grid = default_snr_grid()

print("total area under phi(gamma)")
total = area(MmseSnrCurve(gamma=grid, mmse=np.atleast_1d(phi(grid)))).nats
print(f"  integral = {total:.6f} nats, ln4 = {LN4:.6f}, "
      f"error = {abs(total - LN4):.2e}\n")

print("repetition-N outer codes (rate 1/N)")
for N in (2, 3, 4, 8):
    ap = area(repetition_curve(N, grid)).nats
    ext = area(repetition_curve(N, grid, extrinsic_axis=True)).nats
    print(f"  N={N}: a-priori axis {ap:.5f} vs R*ln4 = {LN4 / N:.5f}   "
          f"extrinsic axis {ext:.5f} vs (1-R)*ln4 = {(1 - 1 / N) * LN4:.5f}")

print("\nuncoded inner channels (area = ln4 * (1 - capacity used))")
for snr in (0.5, 1.0, 2.0):
    c = uncoded_inner_curve(InnerChannelSpec("awgn", snr=snr), grid)
    expect = LN4 * (1 - mutual_info_binary(snr))
    print(f"  awgn snr={snr}: {area(c).nats:.5f} vs {expect:.5f}")
for eps in (0.3, 0.5):
    c = uncoded_inner_curve(InnerChannelSpec("erasure", epsilon=eps), grid)
    print(f"  erasure eps={eps}: {area(c).nats:.5f} vs {eps * LN4:.5f}")
