"""End-to-end simulation of the block-by-block measurement protocol.

A trial draws the block label x (uniform on Z_N^k for every hidden
subgroup), computes the exact N+1-outcome distribution inside that block
from the solution counts alone, and samples an outcome by inverse CDF.
Within block x the outcome probabilities for a hidden shift d are

    P(j | x) = |sum_p omega^((d-j) p) sqrt(eta_p^x)|^2 / (N 2^k),

which depends on j only through (d - j) mod N; the trivial outcome has
probability zero.  For the trivial subgroup every j is equally likely at
support_dim / (N 2^k) and the leftover outcome absorbs the rest.

Nothing here materializes 2^k-dimensional vectors: a length-N Fourier
transform of sqrt(eta) per block is all it takes, which is what lets the
simulator run at k around 20 and N around 1024.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dihedral import TRIVIAL, BlockLabel
from .subsetsum import count_eta_batch


@dataclass(frozen=True)
class TrialRecord:
    """One simulated measurement: what was hidden, what came out."""

    hidden: object  # shift d, or TRIVIAL
    label: BlockLabel
    outcome: object  # j in Z_N, or TRIVIAL
    correct: bool


@dataclass(frozen=True)
class OutcomeDistribution:
    """Exact outcome probabilities within one block (trivial outcome last)."""

    label: BlockLabel
    hidden: object
    probs: np.ndarray  # length N + 1

    def prob(self, outcome) -> float:
        if outcome is TRIVIAL:
            return float(self.probs[-1])
        return float(self.probs[int(outcome) % self.label.N])


def _distributions(eta: np.ndarray, N: int, k: int, hidden) -> np.ndarray:
    """Outcome probabilities, rows = draws, columns = (j in Z_N, trivial)."""
    S = eta.shape[0]
    out = np.zeros((S, N + 1))
    denom = N * float(2 ** k)
    if hidden is TRIVIAL:
        support = np.count_nonzero(eta, axis=1)
        out[:, :N] = (support / denom)[:, None]
        out[:, N] = 1.0 - support / float(2 ** k)
        return out
    d = int(hidden) % N
    # W[m] = |sum_p omega^(mp) sqrt(eta_p)|^2, shared by every shift:
    # P(j) only reads it at index (d - j) mod N, so shift covariance is
    # exact by construction.
    amps = np.fft.ifft(np.sqrt(eta.astype(np.float64)), axis=1) * N
    W = amps.real ** 2 + amps.imag ** 2
    cols = (d - np.arange(N)) % N
    out[:, :N] = W[:, cols] / denom
    return out


def outcome_distribution(label: BlockLabel, hidden) -> OutcomeDistribution:
    """Exact within-block outcome distribution for one label."""
    eta = count_eta_batch(np.array([label.x]), label.N)
    probs = _distributions(eta, label.N, label.k, hidden)[0]
    return OutcomeDistribution(label, hidden, probs)


def run_trials(N: int, k: int, hidden, trials: int, seed,
               threads: int = 1) -> tuple[float, list[TrialRecord]]:
    """Simulate full measurement trials and return (success rate, records).

    Outcomes are drawn by inverse CDF on the N+1 probabilities with one
    uniform per trial (ties resolve toward smaller j).  Trials run in
    fixed-size shards with split seeds, merged in shard order.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    shard_size = 4096
    counts = [min(shard_size, trials - lo) for lo in range(0, trials, shard_size)]
    seeds = np.random.SeedSequence(seed).spawn(len(counts))

    def shard(args):
        ss, n = args
        rng = np.random.default_rng(ss)
        xs = rng.integers(0, N, size=(n, k))
        eta = count_eta_batch(xs, N)
        probs = _distributions(eta, N, k, hidden)
        cdf = np.cumsum(probs, axis=1)
        u = rng.random(n)
        outcomes = np.minimum((cdf <= u[:, None]).sum(axis=1), N)
        return xs, outcomes

    jobs = list(zip(seeds, counts))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(shard, jobs))
    else:
        parts = [shard(j) for j in jobs]

    want = TRIVIAL if hidden is TRIVIAL else int(hidden) % N
    records = []
    hits = 0
    for xs, outcomes in parts:
        for row, out in zip(xs, outcomes):
            result = TRIVIAL if out == N else int(out)
            ok = result == want
            hits += ok
            records.append(TrialRecord(want, BlockLabel(tuple(row), N),
                                       result, bool(ok)))
    return hits / trials, records


def shift_covariance_check(N: int, k: int, samples: int, seed) -> bool:
    """Outcome distributions for shifted hidden values are exact index
    shifts of one another: P_d(j) == P_(d+delta)(j+delta), bitwise."""
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        label = BlockLabel(tuple(rng.integers(0, N, size=k)), N)
        d = int(rng.integers(N))
        delta = int(rng.integers(N))
        base = outcome_distribution(label, d).probs
        moved = outcome_distribution(label, (d + delta) % N).probs
        if not np.array_equal(np.roll(base[:N], delta), moved[:N]):
            return False
        if base[N] != moved[N]:
            return False
    return True
