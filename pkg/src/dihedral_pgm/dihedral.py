"""Dihedral group arithmetic and hidden-subgroup state constructions.

The dihedral group of order 2N is generated by a rotation s (order N) and
a reflection r (order 2) with r s r = s^-1.  A generic element is written
r^t s^k with t in Z_2 and k in Z_N, and occupies position t*N + k of the
2N-dimensional "group basis".

A conditional Fourier transform on the rotation register (inverse when
t = 0, forward when t = 1) moves states with a hidden order-two subgroup
{e, r s^d} into a basis labeled by (bit, x) in which k copies of the
state are block diagonal over x in Z_N^k, with pure 2^k-dimensional
conditional states whose amplitudes depend only on d and the subset sums
b . x mod N.  The block-compressed representation of those states lives
here; everything downstream (counting, measurement, certification) is
built on top of it.

Conventions fixed once for all modules:

* bit strings b in Z_2^k are little-endian integers sum_j b_j 2^(j-1)
  (b_1 is the least significant bit), and b . x is accumulated as a full
  integer before reduction mod N;
* block labels x in Z_N^k flatten lexicographically (x_1 most
  significant);
* complex phases are read from a per-N table of the N distinct roots of
  unity, indexed by exponents reduced mod N, so equal exponents are
  bitwise-identical values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

#: Marker for the trivial hidden subgroup (and the matching outcome).
TRIVIAL = "trivial"

#: Dense operators are only built at oracle scale.
DENSE_DIM_LIMIT = 4096

#: Explicit enumeration of the 2^k bit strings is capped here.
ENUM_LIMIT = 2 ** 24


class ScaleLimitError(ValueError):
    """An operation would exceed its dense/enumeration guard."""


@lru_cache(maxsize=None)
def phase_table(N: int) -> np.ndarray:
    """The N distinct values exp(2 pi i m / N), m = 0 .. N-1.

    All phase arithmetic indexes into this table with exponents reduced
    mod N; identities such as sum_j omega^(j(p-q)) = N delta_pq then
    cancel to machine precision because repeated exponents are
    bitwise-identical values.
    """
    table = np.exp(2j * np.pi * np.arange(N) / N)
    table.flags.writeable = False
    return table


# ---------------------------------------------------------------------------
# group elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DihedralElement:
    """Element r^t s^k of the dihedral group of order 2N."""

    t: int
    k: int
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        object.__setattr__(self, "t", self.t % 2)
        object.__setattr__(self, "k", self.k % self.N)

    @property
    def index(self) -> int:
        """Position t*N + k in the group basis."""
        return self.t * self.N + self.k

    def __repr__(self):
        return f"r^{self.t} s^{self.k} (N={self.N})"


def identity(N: int) -> DihedralElement:
    return DihedralElement(0, 0, N)


def element_from_index(index: int, N: int) -> DihedralElement:
    """Inverse of DihedralElement.index."""
    return DihedralElement(index // N, index % N, N)


def multiply(a: DihedralElement, b: DihedralElement) -> DihedralElement:
    """Product ab, using r^t' s^k' r^t s^k = r^(t+t') s^(k + (-1)^t k')."""
    if a.N != b.N:
        raise ValueError("group mismatch")
    sign = -1 if b.t else 1
    return DihedralElement(a.t + b.t, b.k + sign * a.k, a.N)


def inverse(a: DihedralElement) -> DihedralElement:
    """Group inverse; reflections are involutions."""
    if a.t:
        return a
    return DihedralElement(0, -a.k, a.N)


def subgroup_elements(kind: str, N: int, *, j: int | None = None,
                      d: int | None = None) -> frozenset[DihedralElement]:
    """Elements of a supported subgroup of the order-2N dihedral group.

    kind is one of "trivial", "order2" (requires d), "cyclic" (requires a
    divisor j of N) or "dihedral" (requires j and d).  "order2" with
    shift d is the subgroup {e, r s^d}.
    """
    if kind == "trivial":
        return frozenset({identity(N)})
    if kind == "order2":
        if d is None:
            raise ValueError("order2 subgroup needs a shift d")
        return frozenset({identity(N), DihedralElement(1, d, N)})
    if kind in ("cyclic", "dihedral"):
        if j is None:
            raise ValueError(f"{kind} subgroup needs an index j")
        if N % j != 0:
            raise ValueError(f"j={j} does not divide N={N}")
        rotations = [DihedralElement(0, m * j, N) for m in range(N // j)]
        if kind == "cyclic":
            return frozenset(rotations)
        if d is None:
            raise ValueError("dihedral subgroup needs a shift d")
        reflections = [DihedralElement(1, m * j + d, N) for m in range(N // j)]
        return frozenset(rotations + reflections)
    raise ValueError(f"unknown subgroup kind {kind!r}")


# ---------------------------------------------------------------------------
# single-copy states in the group basis
# ---------------------------------------------------------------------------

def coset_state_group_basis(k: int, d: int, N: int) -> np.ndarray:
    """Random coset state (|0,k> + |1,-k+d>)/sqrt(2) as 2N amplitudes."""
    v = np.zeros(2 * N, dtype=np.complex128)
    v[k % N] = 1 / np.sqrt(2)
    v[N + (d - k) % N] = 1 / np.sqrt(2)
    return v


def hidden_subgroup_state(subgroup: frozenset[DihedralElement],
                          N: int | None = None) -> np.ndarray:
    """Single-copy hidden subgroup state (|H|/|G|) sum_g |gH><gH|.

    The sum runs over one representative per left coset; the coset state
    |gH> is the uniform superposition over {gh : h in H}.
    """
    elems = list(subgroup)
    if not elems:
        raise ValueError("empty subgroup")
    if N is None:
        N = elems[0].N
    if any(h.N != N for h in elems):
        raise ValueError("group mismatch")
    dim = 2 * N
    if dim > DENSE_DIM_LIMIT:
        raise ScaleLimitError(f"dense dimension {dim} exceeds {DENSE_DIM_LIMIT}")
    order = len(elems)
    rho = np.zeros((dim, dim), dtype=np.complex128)
    seen = np.zeros(dim, dtype=bool)
    for idx in range(dim):
        if seen[idx]:
            continue
        g = element_from_index(idx, N)
        coset = [multiply(g, h).index for h in elems]
        seen[coset] = True
        v = np.zeros(dim, dtype=np.complex128)
        v[coset] = 1 / np.sqrt(order)
        rho += (order / dim) * np.outer(v, v.conj())
    return rho


def tilde_basis_change(N: int) -> np.ndarray:
    """Conditional Fourier transform on the rotation register (2N x 2N).

    Applies the inverse Z_N transform when the reflection bit is 0 and
    the forward transform when it is 1.  Pushing the uniform mixture of
    coset states with shift d through this unitary yields the block form
    (1/N) sum_x |phi~_{x,d}><phi~_{x,d}| with
    |phi~_{x,d}> = (|0> + omega^(xd) |1>) |x> / sqrt(2).
    """
    if 2 * N > DENSE_DIM_LIMIT:
        raise ScaleLimitError(f"dense dimension {2*N} exceeds {DENSE_DIM_LIMIT}")
    table = phase_table(N)
    grid = np.outer(np.arange(N), np.arange(N))
    forward = table[grid % N] / np.sqrt(N)
    backward = table[(-grid) % N] / np.sqrt(N)
    U = np.zeros((2 * N, 2 * N), dtype=np.complex128)
    U[:N, :N] = backward
    U[N:, N:] = forward
    return U


# ---------------------------------------------------------------------------
# block labels and block-compressed k-copy states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockLabel:
    """Per-copy Fourier label x in Z_N^k."""

    x: tuple[int, ...]
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        xs = tuple(int(v) for v in self.x)
        if len(xs) < 1:
            raise ValueError("label needs k >= 1 entries")
        if any(v < 0 or v >= self.N for v in xs):
            raise ValueError("label entries must lie in [0, N)")
        object.__setattr__(self, "x", xs)

    @property
    def k(self) -> int:
        return len(self.x)

    @property
    def flat_index(self) -> int:
        """Lexicographic rank of x in Z_N^k (x_1 most significant)."""
        idx = 0
        for v in self.x:
            idx = idx * self.N + v
        return idx

    @classmethod
    def from_flat(cls, index: int, N: int, k: int) -> "BlockLabel":
        digits = []
        for _ in range(k):
            index, v = divmod(index, N)
            digits.append(v)
        return cls(tuple(reversed(digits)), N)


def bit_dot_table(label: BlockLabel) -> np.ndarray:
    """(b . x) mod N for every bit string b, in little-endian order.

    The sums are accumulated as full integers and reduced mod N once at
    the end.  Guarded at 2^k <= 2^24 entries.
    """
    k = label.k
    if 2 ** k > ENUM_LIMIT:
        raise ScaleLimitError(f"2^{k} bit strings exceed the enumeration guard")
    sums = np.zeros(1, dtype=np.int32)
    for xj in label.x:
        sums = np.concatenate([sums, sums + np.int32(xj)])
    return sums % label.N


@dataclass(frozen=True)
class BlockState:
    """Conditional state within block x: pure for a shift d, a flat flag
    for the trivial subgroup (which carries no amplitudes)."""

    label: BlockLabel
    shift: object  # int mod N, or TRIVIAL
    amplitudes: np.ndarray | None

    @property
    def is_trivial(self) -> bool:
        return self.shift is TRIVIAL


def block_state(label: BlockLabel, shift) -> BlockState:
    """Block-compressed conditional state for hidden shift d (or TRIVIAL).

    For a shift d the amplitudes are omega^(d (b.x)) / 2^(k/2); in the
    subset-sum basis this is sum_p omega^(dp) sqrt(eta_p) |S_p> / 2^(k/2).
    """
    if shift is TRIVIAL:
        return BlockState(label, TRIVIAL, None)
    N = label.N
    table = phase_table(N)
    amps = table[(int(shift) * bit_dot_table(label).astype(np.int64)) % N]
    amps = amps / np.sqrt(2.0 ** label.k)
    return BlockState(label, int(shift) % N, amps)


# ---------------------------------------------------------------------------
# dense oracle-scale constructions
# ---------------------------------------------------------------------------

def _check_dense(N: int, k: int) -> int:
    dim = (2 * N) ** k
    if dim > DENSE_DIM_LIMIT:
        raise ScaleLimitError(
            f"oracle scale exceeded: (2N)^k = {dim} > {DENSE_DIM_LIMIT}")
    return dim


def dense_state(shift, k: int, N: int) -> np.ndarray:
    """k-copy hidden subgroup state as a dense (2N)^k matrix (group basis)."""
    dim = _check_dense(N, k)
    if shift is TRIVIAL:
        return np.eye(dim, dtype=np.complex128) / dim
    single = hidden_subgroup_state(subgroup_elements("order2", N, d=int(shift)))
    return reduce(np.kron, [single] * k)


def block_basis_transform(N: int, k: int) -> np.ndarray:
    """Unitary from the k-copy group basis to the x-major block basis.

    Applies the conditional Fourier transform per copy, then reorders
    tensor factors so the row index is X * 2^k + B with X the flattened
    block label and B the little-endian bit integer.
    """
    dim = _check_dense(N, k)
    U = tilde_basis_change(N)
    T = reduce(np.kron, [U] * k)
    rows = np.empty(dim, dtype=np.int64)
    for J in range(dim):
        rem = J
        digits = []
        for _ in range(k):
            rem, i = divmod(rem, 2 * N)
            digits.append(i)
        digits.reverse()  # kron puts copy 1 in the most significant digit
        B = 0
        X = 0
        for copy, i in enumerate(digits):
            B |= (i // N) << copy  # copy 1 -> least significant bit
            X = X * N + (i % N)    # copy 1 -> most significant digit
        rows[J] = X * 2 ** k + B
    W = np.empty_like(T)
    W[rows] = T
    return W


def assemble_block_density(shift, k: int, N: int) -> np.ndarray:
    """k-copy state assembled from block states, in the x-major block basis.

    Each block x carries weight N^-k; for the trivial subgroup the result
    is the maximally mixed state (identical in every basis).
    """
    dim = _check_dense(N, k)
    if shift is TRIVIAL:
        return np.eye(dim, dtype=np.complex128) / dim
    out = np.zeros((dim, dim), dtype=np.complex128)
    blk = 2 ** k
    for X in range(N ** k):
        label = BlockLabel.from_flat(X, N, k)
        psi = block_state(label, shift).amplitudes
        out[X * blk:(X + 1) * blk, X * blk:(X + 1) * blk] = (
            np.outer(psi, psi.conj()) / N ** k)
    return out
