"""Transfer-point generation for component decoders.

Analytic where closed forms exist (repetition, LDPC variable side, uncoded
channels), Monte-Carlo APP elsewhere (check nodes, convolutional codes via
log-domain BCJR), plus an exhaustive-APP oracle for small codebooks.

LLR convention: natural log of P(X=+1|.)/P(X=-1|.).  Encoders work on 0/1
bits; bit b maps to channel symbol x = 1 - 2b, so the all-zero codeword is
the all-+1 sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .awgn import DomainError, LN4, phi, rng_stream


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InnerChannelSpec:
    """Tagged channel union: awgn(snr), erasure(epsilon), or none."""

    kind: str                      # "awgn" | "erasure" | "none"
    snr: float = 0.0               # linear, for kind == "awgn"
    epsilon: float = 0.0           # for kind == "erasure"

    def __post_init__(self):
        if self.kind not in ("awgn", "erasure", "none"):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if self.kind == "awgn" and self.snr < 0:
            raise DomainError("awgn snr must be >= 0")
        if self.kind == "erasure" and not 0.0 <= self.epsilon <= 1.0:
            raise DomainError("erasure probability must lie in [0, 1]")

    @property
    def gamma(self) -> float:
        return self.snr if self.kind == "awgn" else 0.0


@dataclass(frozen=True)
class TransferPoint:
    """One sampled point of a decoder transfer characteristic."""

    gamma_ap: float
    mmse_ext: float
    mmse_out: float
    stderr: float = 0.0            # 0 for analytic points


@dataclass(frozen=True)
class DegreeProfile:
    """Edge-perspective degree profile (lambda variable side, rho check side)."""

    lambdas: dict[int, float]
    rhos: dict[int, float]

    def __post_init__(self):
        for name, dist, min_deg in (("lambda", self.lambdas, 1), ("rho", self.rhos, 2)):
            if not dist:
                raise ValueError(f"{name} profile is empty")
            for d, frac in dist.items():
                if d < min_deg:
                    raise ValueError(f"{name} degree {d} below minimum {min_deg}")
                if not 0.0 <= frac <= 1.0:
                    raise ValueError(f"{name}_{d} = {frac} outside [0, 1]")
            if abs(sum(dist.values()) - 1.0) > 1e-9:
                raise ValueError(f"{name} fractions must sum to 1")
        r = self.design_rate
        if not 0.0 < r < 1.0:
            raise ValueError(f"design rate {r} outside (0, 1)")

    @property
    def design_rate(self) -> float:
        lam = sum(f / d for d, f in self.lambdas.items())
        rho = sum(f / d for d, f in self.rhos.items())
        return 1.0 - rho / lam


def regular_profile(dv: int, dc: int) -> DegreeProfile:
    return DegreeProfile(lambdas={dv: 1.0}, rhos={dc: 1.0})


# ---------------------------------------------------------------------------
# Convolutional codes and trellises
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvCodeSpec:
    """Rate-1/n_out binary convolutional code given by octal generators.

    ``feedforward`` entries are generator polynomials as integers (write them
    in octal, e.g. 0o5); bit ``memory`` taps the current input, bit 0 the
    oldest register cell.  An optional ``feedback`` polynomial (taps on the
    register only) makes the code recursive.
    """

    feedforward: tuple[int, ...]
    feedback: Optional[int] = None
    terminated: bool = True

    def __post_init__(self):
        if not self.feedforward or any(g <= 0 for g in self.feedforward):
            raise ValueError("need at least one nonzero feedforward generator")
        if self.memory > 8:
            raise ValueError("memory > 8 (trellis would exceed 256 states)")
        object.__setattr__(self, "feedforward", tuple(int(g) for g in self.feedforward))

    @property
    def memory(self) -> int:
        top = max(self.feedforward)
        if self.feedback:
            top = max(top, self.feedback)
        return top.bit_length() - 1

    @property
    def n_out(self) -> int:
        return len(self.feedforward)

    @property
    def rate(self) -> float:
        return 1.0 / self.n_out


def _parity(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    while np.any(v):
        out ^= v & 1
        v = v >> 1
    return out


@dataclass(frozen=True)
class Trellis:
    """Precomputed state machine of a ConvCodeSpec.

    next_state[s, u], outputs[s, u, j] in {0,1}, pred[s', k] / pred_in[s', k]
    enumerate the two incoming transitions of each state.
    """

    code: ConvCodeSpec
    n_states: int
    next_state: np.ndarray
    outputs: np.ndarray
    pred: np.ndarray
    pred_in: np.ndarray
    term_input: np.ndarray         # info bit driving each state toward zero

    @classmethod
    def build(cls, code: ConvCodeSpec) -> "Trellis":
        m = code.memory
        S = 1 << m
        s = np.arange(S)
        nxt = np.zeros((S, 2), dtype=np.int64)
        outs = np.zeros((S, 2, code.n_out), dtype=np.int8)
        fb_low = (code.feedback & (S - 1)) if code.feedback else 0
        term = np.zeros(S, dtype=np.int64)
        for u in (0, 1):
            a = u ^ _parity(s & fb_low) if fb_low else np.full(S, u)
            v = (a << m) | s
            nxt[:, u] = v >> 1
            for j, g in enumerate(code.feedforward):
                outs[:, u, j] = _parity(v & g)
        # register input a = 0 drives the state toward zero; for recursive
        # codes that needs info bit u = parity(fb & s)
        term[:] = _parity(s & fb_low) if fb_low else 0
        pred = np.zeros((S, 2), dtype=np.int64)
        pred_in = np.zeros((S, 2), dtype=np.int64)
        fill = np.zeros(S, dtype=np.int64)
        for sp in range(S):
            for u in (0, 1):
                ns = nxt[sp, u]
                pred[ns, fill[ns]] = sp
                pred_in[ns, fill[ns]] = u
                fill[ns] += 1
        assert np.all(fill == 2)
        return cls(code, S, nxt, outs, pred, pred_in, term)


_TRELLIS_CACHE: dict[ConvCodeSpec, Trellis] = {}


def trellis_for(code: ConvCodeSpec) -> Trellis:
    tr = _TRELLIS_CACHE.get(code)
    if tr is None:
        tr = _TRELLIS_CACHE[code] = Trellis.build(code)
    return tr


def encode_batch(code: ConvCodeSpec, info_bits: np.ndarray) -> np.ndarray:
    """Encode a (B, K) batch of 0/1 info bits to (B, T, n_out) coded bits.

    Termination appends ``memory`` driving bits per block.
    """
    tr = trellis_for(code)
    bits = np.atleast_2d(np.asarray(info_bits, dtype=np.int64))
    if not np.all((bits == 0) | (bits == 1)):
        raise ValueError("info bits must be 0/1")
    B, K = bits.shape
    T = K + (code.memory if code.terminated else 0)
    out = np.empty((B, T, code.n_out), dtype=np.int8)
    s = np.zeros(B, dtype=np.int64)
    for t in range(K):
        u = bits[:, t]
        out[:, t] = tr.outputs[s, u]
        s = tr.next_state[s, u]
    if code.terminated:
        for t in range(K, T):
            u = tr.term_input[s]
            out[:, t] = tr.outputs[s, u]
            s = tr.next_state[s, u]
    return out


def encode(code: ConvCodeSpec, info_bits: np.ndarray) -> np.ndarray:
    """Encode one 0/1 info-bit vector into the flat coded-bit sequence."""
    bits = np.asarray(info_bits, dtype=np.int64)
    if bits.ndim != 1:
        raise ValueError("info bits must be a 1-D 0/1 array")
    return encode_batch(code, bits[None, :])[0].reshape(-1)


def codebook(code: ConvCodeSpec, n_info: int) -> np.ndarray:
    """All 2^n_info codewords as +-1 symbols, rows aligned with info words."""
    if n_info > 16:
        raise ValueError("exhaustive codebook limited to 16 info bits")
    words = ((np.arange(1 << n_info)[:, None] >> np.arange(n_info)[::-1]) & 1).astype(np.int64)
    rows = [1.0 - 2.0 * encode(code, w) for w in words]
    return np.asarray(rows)


# ---------------------------------------------------------------------------
# APP decoders
# ---------------------------------------------------------------------------

def brute_force_app(codebook: np.ndarray, llr_in: np.ndarray) -> np.ndarray:
    """Exact extrinsic LLRs by max-star summation over an explicit codebook.

    ``codebook`` is (M, n) of +-1 symbols, n <= 64; ``llr_in`` the per-bit
    input LLRs.  The codeword log-weight is sum_j c_j * llr_j / 2 and the
    extrinsic on bit k excludes that bit's own input.
    """
    from scipy.special import logsumexp

    C = np.asarray(codebook, dtype=float)
    llr = np.asarray(llr_in, dtype=float)
    if C.ndim != 2 or C.shape[0] == 0:
        raise ValueError("codebook must be a nonempty (M, n) array")
    if C.shape[1] != llr.shape[0]:
        raise ValueError("codeword length does not match llr_in length")
    if C.shape[1] > 64:
        raise ValueError("codebook bit length limited to 64")
    llr = np.clip(llr, -1400.0, 1400.0)
    W = 0.5 * C @ llr
    out = np.empty(C.shape[1])
    for k in range(C.shape[1]):
        Wk = W - 0.5 * C[:, k] * llr[k]
        pos = C[:, k] > 0
        a = logsumexp(Wk[pos]) if pos.any() else -np.inf
        b = logsumexp(Wk[~pos]) if (~pos).any() else -np.inf
        out[k] = a - b
    return out


def bcjr_extrinsic(code: ConvCodeSpec, llr_in: np.ndarray) -> np.ndarray:
    """Log-domain BCJR extrinsic LLRs for every coded bit of one block.

    ``llr_in`` is the flat per-coded-bit input (channel plus any a priori),
    length n_out * n_steps including termination.  Exact max-star (logaddexp)
    recursions; agrees with brute_force_app to ~1e-9 on short blocks.
    """
    llr = np.asarray(llr_in, dtype=float)
    tr = trellis_for(code)
    n = code.n_out
    if llr.ndim != 1 or llr.size % n:
        raise ValueError(f"llr_in length must be a multiple of n_out = {n}")
    ext = _bcjr_batch(tr, llr.reshape(1, -1, n))
    return ext.reshape(-1)


def _bcjr_batch(tr: Trellis, llr: np.ndarray) -> np.ndarray:
    """Vectorized forward-backward pass over a batch; llr is (B, T, n_out)."""
    code = tr.code
    B, T, n = llr.shape
    S = tr.n_states
    sym = 1.0 - 2.0 * tr.outputs.astype(float)          # (S, 2, n) +-1 symbols
    llr = np.clip(llr, -1e6, 1e6)

    # branch metrics gamma[t] : (B, S, 2)
    gam = 0.5 * np.einsum("btn,sun->btsu", llr, sym)

    alpha = np.full((T + 1, B, S), -np.inf)
    alpha[0, :, 0] = 0.0
    p0, p1 = tr.pred[:, 0], tr.pred[:, 1]
    i0, i1 = tr.pred_in[:, 0], tr.pred_in[:, 1]
    for t in range(T):
        g = gam[:, t]                                   # (B, S, 2)
        a = alpha[t]
        alpha[t + 1] = np.logaddexp(a[:, p0] + g[:, p0, i0], a[:, p1] + g[:, p1, i1])
        alpha[t + 1] -= alpha[t + 1].max(axis=1, keepdims=True)

    beta = np.full((T + 1, B, S), -np.inf)
    if code.terminated:
        beta[T, :, 0] = 0.0
    else:
        beta[T, :, :] = 0.0
    ns0, ns1 = tr.next_state[:, 0], tr.next_state[:, 1]
    for t in range(T - 1, -1, -1):
        g = gam[:, t]
        b = beta[t + 1]
        beta[t] = np.logaddexp(b[:, ns0] + g[:, :, 0], b[:, ns1] + g[:, :, 1])
        beta[t] -= beta[t].max(axis=1, keepdims=True)

    # coded-bit APP: group transition metrics by output-bit value
    ext = np.empty((B, T, n))
    out_pos = tr.outputs.astype(bool)                   # (S, 2, n): bit == 1 -> symbol -1
    neg_inf = -np.inf
    for t in range(T):
        M = alpha[t][:, :, None] + gam[:, t] + np.stack(
            (beta[t + 1][:, ns0], beta[t + 1][:, ns1]), axis=2
        )                                               # (B, S, 2)
        for j in range(n):
            mask_m = out_pos[:, :, j]                   # transitions emitting symbol -1
            a = _lse_masked(M, ~mask_m)
            b = _lse_masked(M, mask_m)
            app = a - b
            ext[:, t, j] = app - llr[:, t, j]
    return ext


def _lse_masked(M: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """logsumexp of (B, S, 2) over the (S, 2) entries selected by mask."""
    sel = np.where(mask[None, :, :], M, -np.inf).reshape(M.shape[0], -1)
    mx = sel.max(axis=1)
    safe = np.where(np.isfinite(mx), mx, 0.0)
    with np.errstate(divide="ignore"):
        out = safe + np.log(np.exp(sel - safe[:, None]).sum(axis=1))
    return np.where(np.isfinite(mx), out, -np.inf)


def max_llr_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """Largest absolute LLR disagreement, treating matching +-inf as equal.

    Saturated bits (both decoders certain, same sign) count as zero; a
    saturation on one side only counts as infinite deviation.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    agree_inf = np.isinf(a) & np.isinf(b) & (np.sign(a) == np.sign(b))
    with np.errstate(invalid="ignore"):
        d = np.where(agree_inf, 0.0, np.abs(a - b))
    d = np.where(np.isnan(d), np.inf, d)
    return float(np.max(d))


# ---------------------------------------------------------------------------
# Transfer points
# ---------------------------------------------------------------------------

def repetition_transfer(N: int, gamma_ap: float) -> TransferPoint:
    """Analytic rate-1/N repetition transfer: gamma_ext = (N-1) * gamma_ap."""
    if N < 1:
        raise DomainError("repetition factor must be >= 1")
    g = float(gamma_ap)
    return TransferPoint(g, float(phi((N - 1) * g)), float(phi(N * g)), 0.0)


def check_node_transfer(degree: int, gamma_ap: float, n_samples: int = 10**6,
                        seed: int = 0) -> TransferPoint:
    """Monte-Carlo SPC/check-node transfer via the tanh product rule.

    Draws degree-1 consistent Gaussian edge LLRs at snr gamma_ap (m = 2*snr),
    conditioned on the all-+1 word, which satisfies any parity check.
    """
    if degree < 2:
        raise DomainError("check degree must be >= 2")
    if n_samples < 10**4:
        raise DomainError("need at least 1e4 samples")
    g = float(gamma_ap)
    if g == 0.0:
        return TransferPoint(0.0, 1.0, 1.0, 0.0)
    m = 2.0 * g
    rng = rng_stream(seed, 1, degree)
    L = m + math.sqrt(2.0 * m) * rng.standard_normal((n_samples, degree - 1))
    t_ext = np.prod(np.tanh(L / 2.0), axis=1)
    sq = t_ext**2
    mmse_ext = 1.0 - float(np.mean(sq))
    stderr = float(np.std(sq)) / math.sqrt(n_samples)
    t_ap = np.tanh((m + math.sqrt(2.0 * m) * rng.standard_normal(n_samples)) / 2.0)
    t_out = (t_ap + t_ext) / (1.0 + t_ap * t_ext)       # tanh addition rule
    mmse_out = 1.0 - float(np.mean(t_out**2))
    return TransferPoint(g, mmse_ext, mmse_out, stderr)


def check_node_mmse_ext(degree: int, gamma_ap) -> np.ndarray:
    """Closed-form check extrinsic MMSE 1 - (1 - phi(g))^(degree-1).

    Exact under independent consistent inputs because E[tanh^2] of the
    extrinsic factorizes over the product rule; used as the quadrature
    acceleration for density evolution.
    """
    if degree < 2:
        raise DomainError("check degree must be >= 2")
    return 1.0 - (1.0 - phi(gamma_ap)) ** (degree - 1)


def vnd_transfer(profile: DegreeProfile, channel: InnerChannelSpec,
                 gamma_ap: float) -> TransferPoint:
    """Analytic LDPC variable-node mixture transfer (repetition per degree)."""
    if channel.kind == "erasure":
        raise DomainError("variable-node transfer is AWGN/none only")
    g = float(gamma_ap)
    g_ch = channel.gamma
    ext = sum(f * float(phi((d - 1) * g + g_ch)) for d, f in profile.lambdas.items())
    out = sum(f * float(phi(d * g + g_ch)) for d, f in profile.lambdas.items())
    return TransferPoint(g, ext, out, 0.0)


def uncoded_inner_curve(channel: InnerChannelSpec, grid: Sequence[float]):
    """Analytic MMSE-vs-SNR curve of an uncoded inner channel.

    awgn(SNR): mmse(g) = phi(g + SNR); erasure(eps): mmse(g) = eps * phi(g).
    Returns the charts.MmseSnrCurve (imported lazily to avoid a cycle).
    """
    from .charts import MmseSnrCurve

    g = np.asarray(sorted(grid), dtype=float)
    if channel.kind == "awgn":
        mmse = phi(g + channel.snr)
        label = f"uncoded-awgn-snr{channel.snr:g}"
    elif channel.kind == "erasure":
        mmse = channel.epsilon * phi(g)
        label = f"uncoded-erasure-{channel.epsilon:g}"
    else:
        mmse = phi(g)
        label = "uncoded"
    return MmseSnrCurve(gamma=g, mmse=np.asarray(mmse), tail_rule="analytic_tail",
                        label=label)


def conv_transfer_point(code: ConvCodeSpec, channel: InnerChannelSpec,
                        gamma_ap: float, block_len: int = 10_000,
                        n_blocks: int = 50, seed: int = 0) -> TransferPoint:
    """Monte-Carlo BCJR transfer point over the coded bits.

    Simulates random info blocks, builds per-coded-bit input LLRs from the
    channel (awgn at channel.snr) plus a consistent a-priori at gamma_ap,
    runs batched BCJR, and reports output/extrinsic MMSE with a per-block
    standard error.  Deterministic per seed.
    """
    if channel.kind == "erasure":
        raise DomainError("conv transfer supports awgn/none channels only")
    if block_len < 10**3:
        raise DomainError("block_len must be >= 1000")
    tr = trellis_for(code)
    g_ch = channel.gamma
    g_ap = float(gamma_ap)
    rng = rng_stream(seed, 2)
    n = code.n_out
    T = block_len + (code.memory if code.terminated else 0)

    info = rng.integers(0, 2, size=(n_blocks, block_len))
    coded = encode_batch(code, info)
    x = 1.0 - 2.0 * coded.astype(float)

    llr = np.zeros((n_blocks, T, n))
    if g_ch > 0:
        llr += 2.0 * g_ch * x + 2.0 * math.sqrt(g_ch) * rng.standard_normal(x.shape)
    if g_ap > 0:
        m = 2.0 * g_ap
        llr += m * x + math.sqrt(2.0 * m) * rng.standard_normal(x.shape)

    ext = _bcjr_batch(tr, llr)
    t_ext = np.tanh(ext / 2.0)
    t_out = np.tanh((llr + ext) / 2.0)
    per_block_out = 1.0 - (t_out**2).reshape(n_blocks, -1).mean(axis=1)
    per_block_ext = 1.0 - (t_ext**2).reshape(n_blocks, -1).mean(axis=1)
    stderr = float(np.std(per_block_out)) / math.sqrt(n_blocks)
    return TransferPoint(g_ap, float(per_block_ext.mean()),
                         float(per_block_out.mean()), stderr)


def conv_mmse_curve(code: ConvCodeSpec, grid: Sequence[float],
                    bits_per_point: int = 10**6, block_len: int = 2000,
                    seed: int = 0, label: str = "conv"):
    """MMSE-vs-SNR curve of a convolutional code transmitted over AWGN.

    At each grid snr the codeword rides the channel with no separate a
    priori; the area under this curve tracks rate * ln4 (a-priori axis).
    """
    from .charts import MmseSnrCurve

    g = np.asarray(sorted(grid), dtype=float)
    n_blocks = max(1, math.ceil(bits_per_point / (code.n_out * block_len)))
    pts = [conv_transfer_point(code, InnerChannelSpec("awgn", snr=gi),
                               0.0, block_len, n_blocks, seed=seed + 1000 * i)
           for i, gi in enumerate(g)]
    mmse = np.array([p.mmse_out for p in pts])
    err = np.array([p.stderr for p in pts])
    # Monte-Carlo noise can break monotonicity by ~stderr; enforce it for
    # downstream invariants
    mmse = np.minimum.accumulate(mmse)
    return MmseSnrCurve(gamma=g, mmse=mmse, stderr=err,
                        tail_rule="analytic_tail", label=label)
