"""Success probabilities, threshold statistics, and information bounds.

Everything here reduces to statistics of the solution counts eta_r^x:

* the N-outcome success probability is
  p = (1 / (2^k N^(k+1))) sum_x (sum_r sqrt(eta_r^x))^2, computed either
  by exact enumeration of Z_N^k or as a seeded Monte Carlo average over
  uniform draws of x;
* the trivial-subgroup identification probability is
  1 - rank(G) / (2N)^k where rank(G) counts occupied (x, p) pairs;
* the parity success probability pairs counts half a period apart,
  p_lsb = 1/2 + (1 / (2 (2N)^k)) sum_x sum_r sqrt(eta_r^x eta_(r+N/2)^x);
* the single-copy accessible-information bound 1 - 1/N comes from dense
  2N-dimensional spectra, and the resulting copy lower bound from the
  displayed entropy inequality.

Monte Carlo estimators are sharded with split seeds and merged in shard
order, so results are byte-identical for a given seed regardless of the
worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dihedral import (ScaleLimitError, hidden_subgroup_state,
                       subgroup_elements)
from .subsetsum import count_eta_batch, iter_all_eta

#: Shard size shared by the exact enumerator and the MC estimators; the
#: fsum merge over shards makes totals independent of threading.
SHARD = 4096

#: Hard guard on exact enumeration of Z_N^k.
EXACT_ENUM_LIMIT = 2 ** 26

#: Automatic exact/MC switch used by threshold_sweep.
SWEEP_EXACT_LIMIT = 2 ** 14

#: Up to this N the per-draw value is accumulated from the cross products
#: sqrt(eta_r eta_q), which are exact for perfect squares; this is what
#: makes small closed-form values (like 3/4 at N=2, k=1) come out exact.
EXACT_CROSS_MAX_N = 64


@dataclass(frozen=True)
class ThresholdPoint:
    """One (N, k) success-probability estimate with its provenance."""

    N: int
    k: int
    nu: float
    p: float
    stderr: float
    method: str  # EXACT | MC | CLOSED_FORM


@dataclass(frozen=True)
class InfoBoundResult:
    """Copy lower bound from the accessible-information inequality."""

    N: int
    p: float
    chi_per_copy: float   # left side is k times this
    i_p_lower: float      # right side of the displayed inequality
    k_min: int
    k_min_asymptotic: float  # large-N form p log(N-1) - H(p, 1-p)


def _density(N: int, k: int) -> float:
    if N < 2 or k < 1:
        raise ValueError("need N >= 2 and k >= 1")
    return k / math.log2(N)


# ---------------------------------------------------------------------------
# N-outcome success probability
# ---------------------------------------------------------------------------

def _success_values(eta: np.ndarray, N: int, k: int) -> np.ndarray:
    """Per-draw values (sum_r sqrt(eta_r))^2 / (2^k N)."""
    denom = N * float(2 ** k)
    ef = eta.astype(np.float64)
    if N <= EXACT_CROSS_MAX_N:
        total = np.zeros(eta.shape[0])
        for r in range(N):
            total += np.sqrt(ef * ef[:, r:r + 1]).sum(axis=1)
        return total / denom
    return np.sqrt(ef).sum(axis=1) ** 2 / denom


def _chunked(xs: np.ndarray):
    for lo in range(0, xs.shape[0], SHARD):
        yield xs[lo:lo + SHARD]


def _success_over(xs: np.ndarray, N: int, k: int) -> tuple[float, float]:
    """Mean and standard error of the per-draw values over given draws,
    reduced shard by shard exactly like the estimators below."""
    sums, sumsqs, count = [], [], 0
    for chunk in _chunked(xs):
        v = _success_values(count_eta_batch(chunk, N), N, k)
        sums.append(float(np.sum(v)))
        sumsqs.append(float(np.sum(v * v)))
        count += v.size
    mean = math.fsum(sums) / count
    if count < 2:
        return mean, 0.0
    var = max(math.fsum(sumsqs) - count * mean * mean, 0.0) / (count - 1)
    return mean, math.sqrt(var / count)


def success_exact(N: int, k: int) -> ThresholdPoint:
    """Exact success probability by full enumeration of Z_N^k."""
    nu = _density(N, k)
    if N ** k > EXACT_ENUM_LIMIT:
        raise ScaleLimitError(
            f"N^k = {N ** k} exceeds the enumeration guard; use success_mc")
    sums = []
    for _, eta in iter_all_eta(N, k, batch=SHARD):
        sums.append(float(np.sum(_success_values(eta, N, k))))
    p = math.fsum(sums) / N ** k
    return ThresholdPoint(N, k, nu, p, 0.0, "EXACT")


def success_single_copy(N: int) -> ThresholdPoint:
    """Closed form (2N - 1) / N^2 for a single copy."""
    return ThresholdPoint(N, 1, _density(N, 1), (2 * N - 1) / N ** 2,
                          0.0, "CLOSED_FORM")


def _sharded_mean(samples: int, seed, worker, threads: int = 1):
    """Deterministic sharded Monte Carlo mean/stderr.

    worker(rng, count) returns per-draw values; shards are merged in a
    fixed order, so the result does not depend on the thread count.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples")
    counts = [min(SHARD, samples - lo) for lo in range(0, samples, SHARD)]
    root = (seed if isinstance(seed, np.random.SeedSequence)
            else np.random.SeedSequence(seed))
    seeds = root.spawn(len(counts))

    def shard(args):
        ss, n = args
        v = worker(np.random.default_rng(ss), n)
        return float(np.sum(v)), float(np.sum(v * v))

    jobs = list(zip(seeds, counts))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(shard, jobs))
    else:
        parts = [shard(j) for j in jobs]
    mean = math.fsum(s for s, _ in parts) / samples
    var = max(math.fsum(q for _, q in parts) - samples * mean * mean, 0.0)
    stderr = math.sqrt(var / (samples - 1) / samples)
    return mean, stderr


def success_mc(N: int, k: int, samples: int, seed,
               threads: int = 1) -> ThresholdPoint:
    """Unbiased Monte Carlo estimate of the success probability.

    Draws x uniformly from Z_N^k and averages (sum_r sqrt(eta_r))^2
    / (2^k N); deterministic for a given seed.
    """
    nu = _density(N, k)

    def worker(rng, n):
        xs = rng.integers(0, N, size=(n, k))
        return _success_values(count_eta_batch(xs, N), N, k)

    p, stderr = _sharded_mean(samples, seed, worker, threads)
    return ThresholdPoint(N, k, nu, p, stderr, "MC")


def trivial_success(N: int, k: int, samples: int | None = None,
                    seed=None) -> float:
    """Probability that k copies of the maximally mixed state land on the
    leftover outcome: 1 - rank(G)/(2N)^k.

    Exact by enumeration when samples is None (guarded); otherwise a
    Monte Carlo estimate of E_x[support_dim] / 2^k.
    """
    _density(N, k)
    if samples is None:
        if N ** k > EXACT_ENUM_LIMIT:
            raise ScaleLimitError(
                f"N^k = {N ** k} exceeds the enumeration guard; pass samples")
        rank = 0
        for _, eta in iter_all_eta(N, k, batch=SHARD):
            rank += int(np.count_nonzero(eta, axis=1).sum())
        return 1.0 - rank / float((2 * N) ** k)

    def worker(rng, n):
        xs = rng.integers(0, N, size=(n, k))
        support = np.count_nonzero(count_eta_batch(xs, N), axis=1)
        return support / float(2 ** k)

    mean, _ = _sharded_mean(samples, seed, worker)
    return 1.0 - mean


def threshold_sweep(N: int, k_list, samples: int, seed,
                    threads: int = 1) -> list[ThresholdPoint]:
    """One success-probability point per k: exact when N^k is small
    enough, Monte Carlo (with a per-k child seed) otherwise."""
    k_list = list(k_list)
    children = np.random.SeedSequence(seed).spawn(len(k_list))
    points = []
    for k, child in zip(k_list, children):
        if N ** k <= SWEEP_EXACT_LIMIT:
            points.append(success_exact(N, k))
        else:
            points.append(success_mc(N, k, samples, child, threads))
    return points


# ---------------------------------------------------------------------------
# parity (least significant bit) success probability
# ---------------------------------------------------------------------------

def _lsb_values(eta: np.ndarray, N: int, k: int) -> np.ndarray:
    """Per-draw parity success values
    (1/2)(1 + sum_r sqrt(eta_r eta_(r+N/2)) / 2^k)."""
    ef = eta.astype(np.float64)
    paired = np.roll(ef, -(N // 2), axis=1)
    cross = np.sqrt(ef * paired).sum(axis=1)
    return 0.5 * (1.0 + cross / float(2 ** k))


def lsb_upper_bound(N: int, k: int) -> float:
    """Analytic ceiling (1/2)(1 + 2^k/N + 6/N + 3/2^k) on the parity
    success probability."""
    return 0.5 * (1.0 + 2 ** k / N + 6 / N + 3 / 2 ** k)


def lsb_success_exact(N: int, k: int) -> float:
    """Exact parity success probability by enumeration (N even)."""
    _density(N, k)
    if N % 2 != 0:
        raise ValueError("N must be even")
    if N ** k > EXACT_ENUM_LIMIT:
        raise ScaleLimitError(
            f"N^k = {N ** k} exceeds the enumeration guard; use lsb_threshold_check")
    sums = []
    for _, eta in iter_all_eta(N, k, batch=SHARD):
        sums.append(float(np.sum(_lsb_values(eta, N, k))))
    return math.fsum(sums) / N ** k


def lsb_threshold_check(N: int, k: int, samples: int, seed,
                        threads: int = 1) -> tuple[ThresholdPoint, float]:
    """Monte Carlo parity success estimate together with its analytic
    upper bound; the estimate must sit below bound + sampling noise."""
    nu = _density(N, k)
    if N % 2 != 0:
        raise ValueError("N must be even")

    def worker(rng, n):
        xs = rng.integers(0, N, size=(n, k))
        return _lsb_values(count_eta_batch(xs, N), N, k)

    p, stderr = _sharded_mean(samples, seed, worker, threads)
    return ThresholdPoint(N, k, nu, p, stderr, "MC"), lsb_upper_bound(N, k)


def lsb_counting_sums(N: int, k: int) -> tuple[int, int, int]:
    """Exact integer sums behind the parity bound, by full enumeration:
    sum_x eta_0, sum_x eta_(N/2), and sum_x sum_(r != 0, N/2) eta_r eta_(-r).
    """
    if N % 2 != 0:
        raise ValueError("N must be even")
    if N ** k > EXACT_ENUM_LIMIT:
        raise ScaleLimitError("enumeration guard exceeded")
    sum0 = 0
    sum_half = 0
    cross = 0
    half = N // 2
    keep = np.array([r for r in range(N) if r not in (0, half)], dtype=np.int64)
    for _, eta in iter_all_eta(N, k, batch=SHARD):
        sum0 += int(eta[:, 0].sum())
        sum_half += int(eta[:, half].sum())
        mirrored = eta[:, (-keep) % N]
        cross += int((eta[:, keep] * mirrored).sum())
    return sum0, sum_half, cross


# ---------------------------------------------------------------------------
# information-theoretic bounds
# ---------------------------------------------------------------------------

def _entropy_bits(spectrum: np.ndarray) -> float:
    lam = spectrum[spectrum > 1e-14]
    return float(-(lam * np.log2(lam)).sum())


def chi_single_copy(N: int) -> float:
    """Accessible-information ceiling S(mean) - mean(S) of the single-copy
    ensemble over all N shifts; equals 1 - 1/N.

    The mixture spectrum is {1/N (once), 1/2N (2N-2 times), 0 (once)} and
    each shifted state is a flat rank-N mixture, both checked by the
    dense eigensolve this routine performs.
    """
    if 2 * N > 512:
        raise ScaleLimitError("dense eigensolve guard is 2N <= 512")
    states = [hidden_subgroup_state(subgroup_elements("order2", N, d=d))
              for d in range(N)]
    mixture = sum(states) / N
    s_mix = _entropy_bits(np.linalg.eigvalsh(mixture))
    s_each = [_entropy_bits(np.linalg.eigvalsh(rho)) for rho in states]
    return s_mix - math.fsum(s_each) / N


def _binary_entropy(p: float) -> float:
    total = 0.0
    for q in (p, 1.0 - p):
        if q > 0.0:
            total -= q * math.log2(q)
    return total


def info_lower_bound(N: int, p: float) -> InfoBoundResult:
    """Smallest k with k (1 - 1/N) >= log N - (1-p) log(N-1) - H(p, 1-p).

    This is deliberately the displayed inequality evaluated verbatim;
    for constant p it is far weaker than the log N threshold.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    if N < 2:
        raise ValueError("N must be >= 2")
    h = _binary_entropy(p)
    i_p = math.log2(N) - (1.0 - p) * math.log2(N - 1) - h
    rate = 1.0 - 1.0 / N
    k_min = max(1, math.ceil(i_p / rate)) if i_p > 0 else 1
    asymptotic = p * math.log2(N - 1) - h
    return InfoBoundResult(N, p, rate, i_p, k_min, asymptotic)
