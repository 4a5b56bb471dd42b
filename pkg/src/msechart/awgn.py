"""Scalar information-theoretic functions of the binary-input AWGN channel.

Channel model: Y = sqrt(gamma) * X + N with X in {+1, -1}, P(X=1) = p and
N standard normal.  All SNRs are linear power ratios; dB conversion happens
only at external boundaries.  Mutual information is reported in bits, area
integrals in nats.

Also contains LLR-ensemble generation (consistent Gaussian N(m*x, 2m)
messages) and the four transfer-chart measures M1..M4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

LN2 = math.log(2.0)
LN4 = math.log(4.0)

# |llr| beyond this is treated as saturated (+-inf limits in tanh/exp forms).
LLR_SAT = 700.0

# 64-point Gauss-Hermite rule: E_Z[g(Z)] = pi^-1/2 * sum w_i g(sqrt(2) x_i).
# The integrands below are smooth Gaussian-weighted functions; 64 points is
# converged to ~1e-14 over gamma <= 100.
_GH_X, _GH_W = np.polynomial.hermite.hermgauss(64)
_GH_Z = math.sqrt(2.0) * _GH_X
_GH_WN = _GH_W / math.sqrt(math.pi)


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


def _check_gamma(gamma) -> np.ndarray:
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0) or np.any(~np.isfinite(g)):
        raise DomainError(f"snr must be finite and >= 0, got {gamma!r}")
    return g


def _check_prior(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"prior must lie in [0, 1], got {p!r}")
    return p


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(lin: float) -> float:
    if lin <= 0:
        raise DomainError(f"cannot express nonpositive ratio {lin!r} in dB")
    return 10.0 * math.log10(lin)


def binary_entropy(p: float) -> float:
    """H(p) in bits."""
    p = _check_prior(p)
    if p in (0.0, 1.0):
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def phi(gamma, p: float = 0.5):
    """MMSE of estimating a +-1 bit from the AWGN output at SNR ``gamma``.

    Equals 1 - E[tanh^2(l0/2 + gamma*x + sqrt(gamma)*Z)] averaged over the
    bit prior, with l0 the prior log-ratio.  Strictly decreasing in gamma
    with phi(0) = 1 for p = 0.5.  Accepts scalars or arrays.
    """
    g = _check_gamma(gamma)
    p = _check_prior(p)
    if p == 0.0 or p == 1.0:
        return np.zeros_like(g) if g.ndim else 0.0
    l0h = 0.5 * math.log(p / (1.0 - p))
    sg = np.sqrt(g)
    args_p = l0h + g[..., None] + sg[..., None] * _GH_Z  # conditioned X=+1
    args_m = l0h - g[..., None] + sg[..., None] * _GH_Z  # conditioned X=-1
    ex2 = p * np.tanh(args_p) ** 2 @ _GH_WN + (1.0 - p) * np.tanh(args_m) ** 2 @ _GH_WN
    out = 1.0 - ex2
    return out if g.ndim else float(out)


def _hb_of_llr(L: np.ndarray) -> np.ndarray:
    """Binary entropy (bits) of the posterior sigmoid(L), overflow-safe."""
    a = np.logaddexp(0.0, -L)  # -ln P(X=1|L)
    b = np.logaddexp(0.0, L)   # -ln P(X=-1|L)
    q = 0.5 * (1.0 + np.tanh(0.5 * L))
    return (q * a + (1.0 - q) * b) / LN2


def mutual_info_binary(gamma, p: float = 0.5):
    """I(X;Y) in bits for the binary-input AWGN channel; nondecreasing in gamma."""
    g = _check_gamma(gamma)
    p = _check_prior(p)
    hp = binary_entropy(p)
    if p == 0.0 or p == 1.0:
        return np.zeros_like(g) if g.ndim else 0.0
    l0 = math.log(p / (1.0 - p))
    sg = np.sqrt(g)
    L_p = l0 + 2.0 * g[..., None] + 2.0 * sg[..., None] * _GH_Z
    L_m = l0 - 2.0 * g[..., None] + 2.0 * sg[..., None] * _GH_Z
    cond = p * _hb_of_llr(L_p) @ _GH_WN + (1.0 - p) * _hb_of_llr(L_m) @ _GH_WN
    out = np.clip(hp - cond, 0.0, 1.0)
    return out if g.ndim else float(out)


#: Sentinel SNR returned when an MMSE of (numerically) zero is inverted.
SNR_SATURATED = math.inf


def phi_inverse(target: float, p: float = 0.5) -> float:
    """Inverse of phi in gamma by bisection (monotone, derivative-free).

    Domain is 0 < target <= phi(0, p); target 0 would be gamma = inf and is
    rejected so callers handle saturation explicitly.
    """
    target = float(target)
    p = _check_prior(p)
    if not 0.0 < target <= 1.0:
        raise DomainError(f"mmse target must lie in (0, 1], got {target!r}")
    top = phi(0.0, p)
    if target > top + 1e-12:
        raise DomainError(f"mmse target {target!r} exceeds phi(0, p) = {top!r}")
    if target >= top:
        return 0.0
    lo, hi = 0.0, 1e6
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if phi(mid, p) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15 * max(1.0, lo):
            break
    return 0.5 * (lo + hi)


def tail_area(gamma_low, p: float = 0.5):
    """Closed-form integral of phi from ``gamma_low`` to infinity, in nats.

    Because dI2/dgamma = phi/ln4, the tail equals ln4 * (H(p) - I2(gamma_low, p));
    used to close finite-grid area computations.
    """
    g = _check_gamma(gamma_low)
    p = _check_prior(p)
    out = LN4 * (binary_entropy(p) - mutual_info_binary(g, p))
    return np.maximum(out, 0.0) if np.ndim(out) else max(float(out), 0.0)


def verify_immse(grid, h: float = 1e-3, p: float = 0.5) -> float:
    """Max deviation of the central difference dI2/dgamma from phi/ln4 on ``grid``."""
    g = _check_gamma(grid)
    if h <= 0:
        raise DomainError("step h must be positive")
    if np.any(g < h):
        raise DomainError("grid points must be >= h for a central difference")
    deriv = (mutual_info_binary(g + h, p) - mutual_info_binary(g - h, p)) / (2.0 * h)
    return float(np.max(np.abs(deriv - phi(g, p) / LN4)))


# ---------------------------------------------------------------------------
# LLR ensembles and measures
# ---------------------------------------------------------------------------

class MeasureKind(Enum):
    """The four transfer-chart measures; M3/M4 need no bit labels."""

    MUTUAL_INFO = "M1"
    FIDELITY = "M2"
    SECOND_MOMENT = "M3"
    ONE_MINUS_MSE = "M4"


class MissingLabelsError(ValueError):
    """A label-dependent measure was requested on an unlabeled ensemble."""


@dataclass(frozen=True)
class LlrEnsemble:
    """Paired (bit, LLR) samples; ``consistent`` declares the true-APP property.

    ``x`` may be None for receiver-side ensembles where the transmitted bits
    are unknown; only M3/M4 can then be extracted.
    """

    x: np.ndarray | None   # +-1 labels, or None if unknown
    llr: np.ndarray        # natural-log ratios, finite or +-inf
    consistent: bool = False

    def __post_init__(self):
        llr = np.asarray(self.llr, dtype=float)
        if llr.size == 0:
            raise ValueError("ensemble must be nonempty")
        if np.any(np.isnan(llr)):
            raise ValueError("llr values must be finite or +-inf")
        object.__setattr__(self, "llr", llr)
        if self.x is not None:
            x = np.asarray(self.x, dtype=float)
            if x.shape != llr.shape:
                raise ValueError("x and llr shapes must match")
            if not np.all(np.abs(x) == 1.0):
                raise ValueError("bit labels must be +-1")
            object.__setattr__(self, "x", x)

    def without_labels(self) -> "LlrEnsemble":
        return LlrEnsemble(x=None, llr=self.llr, consistent=self.consistent)

    def __len__(self) -> int:
        return self.llr.size


def rng_stream(seed: int, *stream) -> np.random.Generator:
    """Counter-based Philox generator for stream (seed, *ids).

    Distinct stream ids give independent substreams, so parallel chunking can
    stay bit-identical to single-lane execution.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((int(seed),) + tuple(int(s) for s in stream))))


def sample_consistent_llr(m: float, n: int, seed: int) -> LlrEnsemble:
    """n i.i.d. pairs with x uniform +-1 and llr ~ Normal(m*x, 2m).

    A consistent Gaussian LLR at parameter m is the LLR of an AWGN channel
    with snr gamma = m/2.  Deterministic per seed.
    """
    m = float(m)
    if m < 0:
        raise DomainError("m must be >= 0")
    if n < 1:
        raise DomainError("need at least one sample")
    rng = rng_stream(seed, 0)
    x = rng.integers(0, 2, size=n) * 2.0 - 1.0
    llr = m * x + math.sqrt(2.0 * m) * rng.standard_normal(n)
    return LlrEnsemble(x=x, llr=llr, consistent=True)


def _sat_tanh_half(llr: np.ndarray) -> np.ndarray:
    return np.tanh(np.clip(llr, -LLR_SAT, LLR_SAT) / 2.0)


def extract_measure(e: LlrEnsemble, kind: MeasureKind) -> float:
    """Evaluate one of M1..M4 on the ensemble.

    M1 (bits) and M2 use the bit labels; M3 and M4 are computed from the LLR
    values alone, which is what makes M4 receiver-side computable.
    Saturated +-inf LLRs contribute their pointwise limits.
    """
    kind = MeasureKind(kind)
    llr = e.llr
    if kind in (MeasureKind.MUTUAL_INFO, MeasureKind.FIDELITY) and e.x is None:
        raise MissingLabelsError(f"{kind.value} needs bit labels")
    if kind is MeasureKind.MUTUAL_INFO:
        return 1.0 - float(np.mean(np.logaddexp(0.0, -e.x * llr))) / LN2
    if kind is MeasureKind.FIDELITY:
        return float(np.mean(e.x * _sat_tanh_half(llr)))
    if kind is MeasureKind.SECOND_MOMENT:
        return float(np.mean(llr**2))
    return float(np.mean(_sat_tanh_half(llr) ** 2))


@dataclass(frozen=True)
class ConsistencyReport:
    m2_m4_gap: float
    gaussian_mean_var_ratio: float
    pass_: bool


def consistency_check(e: LlrEnsemble, gaussian_tol: float = 0.05) -> ConsistencyReport:
    """Test the true-APP condition E[x tanh(L/2)] = E[tanh^2(L/2)] on samples.

    Passes iff |M2 - M4| <= 3 * stderr of the pointwise difference and, for
    ensembles declared consistent-Gaussian, the signed LLR x*llr has mean
    equal to half its variance within ``gaussian_tol`` relative tolerance.
    """
    if e.x is None:
        raise MissingLabelsError("consistency check needs bit labels")
    t = _sat_tanh_half(e.llr)
    diff = e.x * t - t * t
    gap = float(np.mean(diff))
    se = float(np.std(diff)) / math.sqrt(len(e))
    ok = abs(gap) <= 3.0 * se if se > 0 else gap == 0.0

    signed = e.x * e.llr
    mean_xl = float(np.mean(signed))
    half_var = 0.5 * float(np.var(signed))
    if half_var > 0:
        ratio = mean_xl / half_var
    else:
        ratio = 1.0 if mean_xl == 0.0 else math.inf
    if e.consistent and half_var > 1e-12:
        ok = ok and abs(ratio - 1.0) <= gaussian_tol
    return ConsistencyReport(m2_m4_gap=gap, gaussian_mean_var_ratio=ratio, pass_=ok)
