"""Transfer-curve assembly, area integrals, matching tests, and thresholds.

The central objects are MSE transfer curves (extrinsic vs a-priori MMSE of
one decoder) and MMSE-vs-SNR curves (what the area identities integrate).
Under the Gaussian message assumption the two are related by the coordinate
map gamma = phi_inverse(mmse), and the area under an outer code's
MMSE-vs-a-priori-SNR curve equals rate * ln4.

Areas are in nats throughout; mutual-information coordinates are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .awgn import DomainError, LN4, mutual_info_binary, phi, phi_inverse, tail_area
from .decoders import DegreeProfile, InnerChannelSpec, check_node_mmse_ext

#: MMSE below this is treated as saturated (gamma numerically infinite).
MMSE_FLOOR = 1e-12


@dataclass(frozen=True)
class TransferCurve:
    """Sampled MSE transfer curve of one decoder.

    ``mmse_ap`` must be strictly decreasing (a-priori channel improving along
    the list) and ``mmse_ext`` nonincreasing; both live in [0, 1].
    """

    mmse_ap: np.ndarray
    mmse_ext: np.ndarray
    stderr: np.ndarray = None
    role: str = "outer"            # "inner" | "outer"
    label: str = ""

    def __post_init__(self):
        ap = np.asarray(self.mmse_ap, dtype=float)
        ext = np.asarray(self.mmse_ext, dtype=float)
        se = np.zeros_like(ap) if self.stderr is None else np.asarray(self.stderr, dtype=float)
        if ap.shape != ext.shape or ap.ndim != 1:
            raise ValueError("mmse_ap and mmse_ext must be matching 1-D arrays")
        if self.role not in ("inner", "outer"):
            raise ValueError(f"role must be inner/outer, got {self.role!r}")
        for name, v in (("mmse_ap", ap), ("mmse_ext", ext)):
            if np.any((v < 0) | (v > 1)):
                raise ValueError(f"{name} values must lie in [0, 1]")
        if np.any(np.diff(ap) >= 0):
            raise ValueError("mmse_ap must be strictly decreasing")
        if np.any(np.diff(ext) > 1e-9):
            raise ValueError("mmse_ext must be nonincreasing")
        object.__setattr__(self, "mmse_ap", ap)
        object.__setattr__(self, "mmse_ext", ext)
        object.__setattr__(self, "stderr", se)

    def __len__(self) -> int:
        return self.mmse_ap.size


@dataclass(frozen=True)
class MmseSnrCurve:
    """Sampled MMSE as a function of (linear) SNR, gamma strictly increasing."""

    gamma: np.ndarray
    mmse: np.ndarray
    stderr: np.ndarray = None
    tail_rule: str = "analytic_tail"   # "analytic_tail" | "truncate"
    label: str = ""

    def __post_init__(self):
        g = np.asarray(self.gamma, dtype=float)
        m = np.asarray(self.mmse, dtype=float)
        se = np.zeros_like(g) if self.stderr is None else np.asarray(self.stderr, dtype=float)
        if g.shape != m.shape or g.ndim != 1 or g.size < 2:
            raise ValueError("need matching 1-D gamma/mmse arrays with >= 2 points")
        if np.any(np.diff(g) <= 0):
            raise ValueError("gamma grid must be strictly increasing")
        if np.any(np.diff(m) > 1e-9):
            raise ValueError("mmse must be nonincreasing in gamma")
        if np.any((m < -1e-12) | (m > 1.0 + 1e-12)):
            raise ValueError("mmse values must lie in [0, 1]")
        if self.tail_rule not in ("analytic_tail", "truncate"):
            raise ValueError(f"unknown tail rule {self.tail_rule!r}")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "mmse", np.clip(m, 0.0, 1.0))
        object.__setattr__(self, "stderr", se)


@dataclass(frozen=True)
class ExitCurve:
    """Mutual-information transfer curve, both coordinates in bits in [0, 1]."""

    i_ap: np.ndarray
    i_ext: np.ndarray
    label: str = ""

    def __post_init__(self):
        a = np.asarray(self.i_ap, dtype=float)
        e = np.asarray(self.i_ext, dtype=float)
        if a.shape != e.shape or a.ndim != 1:
            raise ValueError("i_ap and i_ext must be matching 1-D arrays")
        if np.any((a < 0) | (a > 1)) or np.any((e < 0) | (e > 1)):
            raise ValueError("EXIT coordinates must lie in [0, 1]")
        object.__setattr__(self, "i_ap", a)
        object.__setattr__(self, "i_ext", e)


@dataclass(frozen=True)
class ChartPair:
    """Inner and outer transfer curves sharing the bit-to-check SNR axis."""

    inner: TransferCurve
    outer: TransferCurve
    channel: Optional[InnerChannelSpec] = None

    def __post_init__(self):
        if self.inner.role != "inner" or self.outer.role != "outer":
            raise ValueError("chart pair needs one inner and one outer curve")


@dataclass(frozen=True)
class Trajectory:
    """Alternating decoding path of the chart recursion."""

    steps: list                    # (iteration, mmse_check_out, mmse_bit_out)
    converged: bool
    iterations_used: int
    stalled_at: Optional[float] = None


def default_snr_grid(n: int = 512, lo: float = 1e-4, hi: float = 100.0) -> np.ndarray:
    """Log-spaced gamma grid with an explicit 0 start for area integrals.

    512 points keep the trapezoid error of smooth phi-composed curves below
    1e-4, well under the 1e-3 area tolerances; phi is cheap enough that the
    density costs nothing.
    """
    return np.concatenate(([0.0], np.geomspace(lo, hi, n)))


# ---------------------------------------------------------------------------
# Coordinate transforms
# ---------------------------------------------------------------------------

def _gamma_of_mmse(m: float) -> float:
    return math.inf if m <= MMSE_FLOOR else phi_inverse(min(m, 1.0))


def to_mmse_vs_snr(curve: TransferCurve) -> MmseSnrCurve:
    """Map an MSE transfer curve to the MMSE-out vs a-priori-SNR plane.

    Under the Gaussian assumption the point (mmse_ap, mmse_ext) sits at
    gamma_ap = phi_inverse(mmse_ap) with output MMSE phi(gamma_ap +
    gamma_ext).  Saturated extrinsic points clamp to zero output MMSE.
    """
    if len(curve) < 2:
        raise ValueError("need at least 2 transfer points")
    gam, mmse = [], []
    for m_ap, m_ext in zip(curve.mmse_ap, curve.mmse_ext):
        g_ap = _gamma_of_mmse(m_ap)
        if not math.isfinite(g_ap):
            continue                     # gamma axis endpoint at infinity
        g_ext = _gamma_of_mmse(m_ext)
        mmse.append(0.0 if not math.isfinite(g_ext) else float(phi(g_ap + g_ext)))
        gam.append(g_ap)
    order = np.argsort(gam)
    return MmseSnrCurve(gamma=np.asarray(gam)[order], mmse=np.asarray(mmse)[order],
                        tail_rule="analytic_tail", label=curve.label)


def exit_curve_from_mse(curve: TransferCurve) -> ExitCurve:
    """Map MSE coordinates to mutual information via I2(phi_inverse(mmse))."""

    def to_bits(m: float) -> float:
        if m <= MMSE_FLOOR:
            return 1.0
        if m >= 1.0:
            return 0.0
        return float(mutual_info_binary(phi_inverse(m)))

    i_ap = np.array([to_bits(m) for m in curve.mmse_ap])
    i_ext = np.array([to_bits(m) for m in curve.mmse_ext])
    return ExitCurve(i_ap=i_ap, i_ext=i_ext, label=curve.label)


# ---------------------------------------------------------------------------
# Areas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AreaResult:
    nats: float
    tail: float
    error_estimate: float          # grid-halving difference of the trapezoid part

    def __float__(self) -> float:
        return self.nats


def area(curve: MmseSnrCurve) -> AreaResult:
    """Trapezoidal integral of the curve in nats, plus analytic tail closure.

    Beyond the last grid point g the tail is mmse(g)/phi(g) * tail_area(g),
    the proportional scaling of the uncoded tail; exact for phi-composed
    curves and negligible for grids reaching gamma ~ 100.
    """
    from scipy.integrate import trapezoid

    g, m = curve.gamma, curve.mmse
    body = float(trapezoid(m, g))
    half = float(trapezoid(m[::2], g[::2]))
    tail = 0.0
    if curve.tail_rule == "analytic_tail" and m[-1] > 0:
        pg = float(phi(g[-1]))
        if pg > 0:
            tail = float(m[-1]) / pg * float(tail_area(g[-1]))
    return AreaResult(nats=body + tail, tail=tail, error_estimate=abs(body - half))


def rate_from_area(a: float, role: str, axis: str = "apriori") -> tuple[float, bool]:
    """Convert an area in nats to a rate estimate in [0, 1].

    Outer code: a-priori axis gives R = a/ln4, extrinsic axis 1 - a/ln4.
    Inner code: the same expressions yield the max supported outer rate, with
    the roles of the two axes swapped.  Returns (rate, clamped_flag).
    """
    a = float(a)
    if role not in ("inner", "outer"):
        raise ValueError(f"role must be inner/outer, got {role!r}")
    if axis not in ("apriori", "extrinsic"):
        raise ValueError(f"axis must be apriori/extrinsic, got {axis!r}")
    if a < -1e-6 or a > LN4 * 1.001:
        raise DomainError(f"area {a} outside [0, ln4]")
    frac = a / LN4
    if role == "outer":
        r = frac if axis == "apriori" else 1.0 - frac
    else:
        r = 1.0 - frac if axis == "apriori" else frac
    clamped = not 0.0 <= r <= 1.0
    return min(max(r, 0.0), 1.0), clamped


# ---------------------------------------------------------------------------
# Matching and thresholds
# ---------------------------------------------------------------------------

def _common_axis_curve(curve: TransferCurve) -> tuple[np.ndarray, np.ndarray]:
    """(snr, output MMSE) on the bit-to-check axis for one transfer curve.

    Inner curves are parameterized by their extrinsic SNR, outer curves by
    their a-priori SNR; the value is phi(gamma_ap + gamma_ext) either way.
    """
    xs, ys = [], []
    for m_ap, m_ext in zip(curve.mmse_ap, curve.mmse_ext):
        g_ap, g_ext = _gamma_of_mmse(m_ap), _gamma_of_mmse(m_ext)
        x = g_ext if curve.role == "inner" else g_ap
        if not math.isfinite(x):
            continue
        total = g_ap + g_ext
        ys.append(0.0 if not math.isfinite(total) else float(phi(total)))
        xs.append(x)
    order = np.argsort(xs)
    return np.asarray(xs)[order], np.asarray(ys)[order]


@dataclass(frozen=True)
class MatchingReport:
    min_gap: float
    crossing: bool
    gap_curve: list                # (snr, inner_mmse - outer_mmse)


def matching_gap(pair: ChartPair) -> MatchingReport:
    """Pointwise inner-minus-outer MMSE gap on the common bit-to-check axis.

    Positive gap means the decoding tunnel is open at that SNR (the inner
    curve delivers its MMSE at a better extrinsic SNR than the outer needs);
    a sign change reports a crossing.
    """
    xi, yi = _common_axis_curve(pair.inner)
    xo, yo = _common_axis_curve(pair.outer)
    lo = max(xi.min(), xo.min())
    hi = min(xi.max(), xo.max())
    if hi <= lo:
        raise ValueError("curves do not overlap on the common snr axis")
    grid = np.unique(np.concatenate((xi, xo)))
    grid = grid[(grid >= lo) & (grid <= hi)]
    gi = np.interp(grid, xi, yi)
    go = np.interp(grid, xo, yo)
    gap = gi - go
    crossing = bool(np.any(gap > 1e-12) and np.any(gap < -1e-12))
    return MatchingReport(min_gap=float(gap.min()), crossing=crossing,
                          gap_curve=list(zip(grid.tolist(), gap.tolist())))


def _mixture_mmse_out(profile: DegreeProfile, v: float, g_ch: float) -> float:
    return sum(f * float(phi(d * v + g_ch)) for d, f in profile.lambdas.items())


def trajectory(profile: DegreeProfile, channel_snr: float, max_iter: int = 500,
               tol: float = 1e-6) -> Trajectory:
    """Gaussian-surrogate density evolution of an LDPC ensemble.

    Tracks the bit-to-check message SNR u.  Check stage: mixture of the
    closed-form check MMSEs mapped back through phi_inverse; bit stage:
    repetition mixture with the channel observation.  Converged once the
    tracked output MMSE drops below ``tol``.
    """
    if not 0.0 < tol < 1.0:
        raise DomainError("tolerance must lie in (0, 1)")
    g_ch = float(channel_snr)
    u = 0.0
    steps = []
    prev_out = math.inf
    for it in range(1, max_iter + 1):
        chk = sum(f * float(check_node_mmse_ext(d, u)) for d, f in profile.rhos.items())
        v = _gamma_of_mmse(chk)
        if not math.isfinite(v):
            steps.append((it, chk, 0.0))
            return Trajectory(steps, True, it)
        bit_ext = sum(f * float(phi((d - 1) * v + g_ch)) for d, f in profile.lambdas.items())
        out = _mixture_mmse_out(profile, v, g_ch)
        steps.append((it, chk, out))
        if out <= tol:
            return Trajectory(steps, True, it)
        u_next = _gamma_of_mmse(bit_ext)
        if not math.isfinite(u_next):
            return Trajectory(steps, True, it)
        if u_next <= u * (1.0 + 1e-12) + 1e-15:
            # fixed point above tolerance: the recursion has stalled
            return Trajectory(steps, False, it, stalled_at=out)
        u = u_next
        prev_out = out
    return Trajectory(steps, False, max_iter, stalled_at=prev_out)


def ebn0_db_to_gamma(ebn0_db: float, rate: float) -> float:
    """Channel snr gamma = 2 * R * Eb/N0 (linear); equal in dB for R = 1/2."""
    return 2.0 * rate * 10.0 ** (ebn0_db / 10.0)


def threshold(profile: DegreeProfile, lo_db: float = -2.0, hi_db: float = 4.0,
              tol_db: float = 0.01, max_iter: int = 500,
              conv_tol: float = 1e-6) -> float:
    """Decoding-threshold Eb/N0 (dB) by bisection on the trajectory recursion."""
    rate = profile.design_rate

    def converges(db: float) -> bool:
        return trajectory(profile, ebn0_db_to_gamma(db, rate), max_iter, conv_tol).converged

    if converges(lo_db) or not converges(hi_db):
        raise DomainError(
            f"invalid bracket: need divergence at {lo_db} dB and convergence at {hi_db} dB")
    while hi_db - lo_db > tol_db:
        mid = 0.5 * (lo_db + hi_db)
        if converges(mid):
            hi_db = mid
        else:
            lo_db = mid
    return 0.5 * (lo_db + hi_db)


# ---------------------------------------------------------------------------
# Curve builders for the built-in families
# ---------------------------------------------------------------------------

def repetition_curve(N: int, gamma_grid: Sequence[float], role: str = "outer",
                     extrinsic_axis: bool = False) -> MmseSnrCurve:
    """Analytic repetition-N MMSE curve on the chosen axis.

    A-priori axis: mmse(g) = phi(N * g).  Extrinsic axis: gamma_ext =
    (N-1) * gamma_ap, so mmse(g_ext) = phi(g_ext * N / (N-1)).
    """
    if N < 2 and extrinsic_axis:
        raise DomainError("rate-1 repetition has no extrinsic information")
    g = np.asarray(sorted(gamma_grid), dtype=float)
    scale = N / (N - 1.0) if extrinsic_axis else float(N)
    return MmseSnrCurve(gamma=g, mmse=np.asarray(phi(scale * g)),
                        tail_rule="analytic_tail",
                        label=f"rep-{N}-{'ext' if extrinsic_axis else 'ap'}")


def repetition_transfer_curve(N: int, gamma_grid: Sequence[float],
                              role: str = "outer") -> TransferCurve:
    """Analytic repetition-N MSE transfer curve sampled on an a-priori grid."""
    g = np.asarray(sorted(gamma_grid), dtype=float)
    ap = np.asarray(phi(g))
    ext = np.asarray(phi((N - 1) * g))
    keep = np.concatenate(([True], np.diff(ap) < 0))
    return TransferCurve(mmse_ap=ap[keep], mmse_ext=ext[keep], role=role,
                         label=f"rep-{N}")
