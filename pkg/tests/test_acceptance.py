"""Acceptance gate: the headline numerical claims at their stated tolerances.

Each test prints one PASS/FAIL line (visible with ``pytest -s`` or in the
captured output of a failure) and asserts the same condition.
"""

import math

import numpy as np
import pytest

from msechart import (
    ConvCodeSpec,
    InnerChannelSpec,
    MmseSnrCurve,
    area,
    conv_mmse_curve,
    default_snr_grid,
    mutual_info_binary,
    phi,
    rate_from_area,
    repetition_curve,
    threshold,
    uncoded_inner_curve,
    verify_immse,
)
from msechart.awgn import (
    LN4,
    MeasureKind,
    extract_measure,
    rng_stream,
    sample_consistent_llr,
)
from msechart.config import resolve_preset
from msechart.decoders import (
    bcjr_extrinsic,
    brute_force_app,
    codebook,
    max_llr_deviation,
)

LN2 = math.log(2.0)


def _verdict(name: str, value: float, tol: float) -> bool:
    ok = value <= tol
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {value:.6g} (tolerance {tol:.6g})")
    return ok


def test_information_derivative_identity():
    dev = verify_immse(np.linspace(0.1, 10.0, 200), h=1e-3)
    assert _verdict("information-derivative identity", dev, 1e-4)


def test_total_area_is_ln4():
    grid = default_snr_grid()
    a = area(MmseSnrCurve(gamma=grid, mmse=np.atleast_1d(phi(grid)))).nats
    assert _verdict("total MMSE area vs ln4", abs(a - LN4), 1e-3)


@pytest.mark.parametrize("name,gens", [("conv-5-7", (0o5, 0o7)),
                                       ("conv-23-35", (0o23, 0o35))])
def test_conv_code_area_near_ln2(name, gens):
    grid = np.linspace(0.0, 6.0, 20)
    curve = conv_mmse_curve(ConvCodeSpec(gens), grid, bits_per_point=10**6,
                            seed=2024)
    rel = abs(area(curve).nats - LN2) / LN2
    assert _verdict(f"{name} a-priori area vs ln2 (relative)", rel, 0.03)


def test_repetition_extrinsic_areas():
    grid = default_snr_grid()
    worst = max(abs(area(repetition_curve(N, grid, extrinsic_axis=True)).nats
                    - (1 - 1 / N) * LN4)
                for N in (2, 3, 4, 8))
    assert _verdict("repetition extrinsic-axis areas", worst, 1e-3)


def test_inner_channel_areas():
    grid = default_snr_grid()
    worst = 0.0
    for snr in (0.5, 1.0, 2.0):
        c = uncoded_inner_curve(InnerChannelSpec("awgn", snr=snr), grid)
        worst = max(worst, abs(area(c).nats
                               - LN4 * (1 - float(mutual_info_binary(snr)))))
    for eps in (0.3, 0.5):
        c = uncoded_inner_curve(InnerChannelSpec("erasure", epsilon=eps), grid)
        worst = max(worst, abs(area(c).nats - eps * LN4))
    assert _verdict("uncoded inner-channel areas", worst, 1e-3)


@pytest.mark.parametrize("preset,target", [("regular-3-6", 1.05),
                                           ("designed-ldpc-05db", 0.51)])
def test_ldpc_thresholds(preset, target):
    prof = resolve_preset(preset)
    th = threshold(prof, lo_db=-0.5, hi_db=3.0, tol_db=0.01)
    assert _verdict(f"{preset} threshold vs {target} dB", abs(th - target), 0.15)


def test_trellis_app_matches_exhaustive():
    code = ConvCodeSpec((0o5, 0o7))
    rng = rng_stream(99, 0)
    worst = 0.0
    for _ in range(100):
        k = int(rng.integers(1, 13))
        cb = codebook(code, k)
        llr = rng.normal(0.0, 3.0, cb.shape[1])
        worst = max(worst, max_llr_deviation(brute_force_app(cb, llr),
                                             bcjr_extrinsic(code, llr)))
    assert _verdict("forward-backward vs exhaustive APP", worst, 1e-9)


def test_fidelity_equals_one_minus_mse():
    n = 10**6
    ok = True
    for m in (0.5, 2.0, 8.0):
        e = sample_consistent_llr(m, n, seed=int(1000 * m))
        m2 = extract_measure(e, MeasureKind.FIDELITY)
        m4 = extract_measure(e, MeasureKind.ONE_MINUS_MSE)
        t = np.tanh(e.llr / 2.0)
        se = float(np.std(e.x * t - t * t)) / math.sqrt(n)
        ok &= _verdict(f"|M2 - M4| at m={m}", abs(m2 - m4), 3 * se)
        blind = extract_measure(e.without_labels(), MeasureKind.ONE_MINUS_MSE)
        ok &= _verdict(f"label-free M4 at m={m} (bit-exact)", abs(m4 - blind), 0.0)
    assert ok


def test_dominated_curves_give_smaller_rates():
    # repetition family: for N < M, phi(N g) > phi(M g) pointwise, so the
    # rep-N curve dominates and must carry the strictly larger rate
    grid = default_snr_grid()
    rates = {}
    for N in (2, 3, 4):
        curve = repetition_curve(N, grid)
        rates[N] = rate_from_area(area(curve).nats, "outer")[0]
        same = rate_from_area(area(repetition_curve(N, grid)).nats, "outer")[0]
        assert same == rates[N]   # identical curves give identical rates
    mono = rates[2] > rates[3] > rates[4]
    live = grid[(grid > 0) & (grid <= 10.0)]   # below the saturation floor
    dom = bool(np.all(np.atleast_1d(phi(2 * live)) > np.atleast_1d(phi(4 * live))))
    print(f"[{'PASS' if mono and dom else 'FAIL'}] dominance ordering of rates: "
          f"{rates[2]:.4f} > {rates[3]:.4f} > {rates[4]:.4f}")
    assert mono and dom
