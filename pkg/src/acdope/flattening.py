"""Distribution flattening and hybrid monotone-map composition.

Flattening maps a plaintext m with known distribution function F to
mbar = floor(N * F(x)) where F is interpolated linearly between F(m) and
F(m+1) at a random offset u.  Because F is strictly increasing (each step is
at least 1/N), the transform is exactly invertible: unflatten finds the
unique m with F(m) <= mbar/N < F(m+1).  The output is near-uniform on [0, N),
which restores the uniformity assumption the window one-wayness analysis
needs.

All CDF values are exact rationals and u is dyadic, so the inversion proof
holds verbatim in code, not just up to rounding.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import gacd
from .prng import DeterministicGenerator

CDF_FILE_FORMAT = "cdf/1"

#: Extra dyadic bits for u beyond lg N; truncation then moves the
#: interpolated value across an integer boundary with probability < 2^-16,
#: and such draws are rejected and redrawn.
_U_GUARD_BITS = 16


class DomainError(ValueError):
    pass


class ModelError(ValueError):
    """CDF table violates the strict-increase or boundary invariants."""


@dataclass(frozen=True)
class CdfModel:
    M: int
    N: int
    F: tuple  # Fraction values F(0..M)

    def __post_init__(self):
        if len(self.F) != self.M + 1:
            raise ModelError(f"need {self.M + 1} CDF values, got {len(self.F)}")
        if self.F[0] != 0 or self.F[-1] != 1:
            raise ModelError("CDF must have F(0)=0 and F(M)=1")
        step = Fraction(1, self.N)
        for m in range(self.M):
            if self.F[m + 1] - self.F[m] < step:
                raise ModelError(f"CDF step at m={m} below 1/N: not strictly increasing")

    def p(self, m: int) -> Fraction:
        """Frequency function Pr(m) = F(m+1) - F(m)."""
        return self.F[m + 1] - self.F[m]


def uniform_model(M: int, N: int) -> CdfModel:
    return CdfModel(M, N, tuple(Fraction(m, M) for m in range(M + 1)))


def model_from_frequencies(counts: Sequence[int], N: int) -> CdfModel:
    """Build a model from empirical counts for values 0..M-1, smoothing with
    a 1/N floor so every step satisfies the strict-increase invariant."""
    M = len(counts)
    if M < 1:
        raise ModelError("need at least one frequency")
    if any(c < 0 for c in counts):
        raise ModelError("negative count")
    total = sum(counts)
    if total == 0:
        probs = [Fraction(1, M)] * M
    else:
        scale = 1 - Fraction(M, N)
        probs = [scale * Fraction(c, total) + Fraction(1, N) for c in counts]
    F = [Fraction(0)]
    for p in probs:
        F.append(F[-1] + p)
    F[-1] = Fraction(1)  # exact by construction; re-pin against bookkeeping drift
    return CdfModel(M, N, tuple(F))


def u_precision_bits(model: CdfModel) -> int:
    return (model.N - 1).bit_length() + _U_GUARD_BITS


def flatten(m: int, model: CdfModel, gen: DeterministicGenerator) -> int:
    """Randomised transform m -> floor(N * ((1-u)F(m) + u F(m+1))) in [0, N)."""
    if not 0 <= m < model.M:
        raise DomainError(f"plaintext {m} outside [0, {model.M})")
    bits = u_precision_bits(model)
    ulp = Fraction(1, 1 << bits)
    fm, fm1 = model.F[m], model.F[m + 1]
    # invertibility needs the output in [ceil(N*F(m)), ceil(N*F(m+1)) - 1];
    # the partial cell below ceil(N*F(m)) belongs to m-1 under unflatten
    nf = model.N * fm
    min_cell = -(nf.numerator // -nf.denominator)
    for _ in range(64):
        u = gen.uniform_fraction(bits)
        val = model.N * ((1 - u) * fm + u * fm1)
        # reject draws whose truncated tail could straddle an integer
        val_next = val + model.N * (fm1 - fm) * ulp
        lo_floor = val.numerator // val.denominator
        hi_floor = val_next.numerator // val_next.denominator
        if lo_floor >= min_cell and (lo_floor == hi_floor or val_next == hi_floor):
            return lo_floor
    return max(lo_floor, min_cell)  # vanishing probability; clamp and accept


def unflatten(mbar: int, model: CdfModel) -> int:
    """Exact inverse: the unique m with F(m) <= mbar/N < F(m+1)."""
    if not 0 <= mbar < model.N:
        raise DomainError(f"flattened value {mbar} outside [0, {model.N})")
    t = Fraction(mbar, model.N)
    m = bisect_right(model.F, t) - 1
    return min(m, model.M - 1)


@dataclass(frozen=True)
class MonotoneMap:
    """A strictly increasing integer map with its left inverse."""

    forward: Callable[[int], int]
    inverse: Callable[[int], int]


def identity_map() -> MonotoneMap:
    return MonotoneMap(forward=lambda m: m, inverse=lambda v: v)


def shift_map(a0: int) -> MonotoneMap:
    return MonotoneMap(forward=lambda m: m + a0, inverse=lambda v: v - a0)


def table_map(values: Sequence[int]) -> MonotoneMap:
    """Map m -> values[m] for a strictly increasing table (e.g. a cached
    order-preserving function)."""
    vals = list(values)
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise DomainError("table is not strictly increasing")
    index = {v: i for i, v in enumerate(vals)}

    def inv(v: int) -> int:
        try:
            return index[v]
        except KeyError:
            raise gacd.ForeignCiphertextError(f"{v} not in the map's image") from None

    return MonotoneMap(forward=lambda m: vals[m], inverse=inv)


def hybrid_encrypt(
    m: int, mmap: MonotoneMap, key: gacd.SecretKey, gen: DeterministicGenerator
) -> gacd.Ciphertext:
    """c = f(m)*k + r: compose any increasing map with the GACD scheme."""
    fm = mmap.forward(m)
    if not 0 <= fm <= key.params.M:
        raise DomainError(f"mapped value {fm} outside the key's domain [0, {key.params.M}]")
    return gacd.encrypt(fm, key, gen)


def hybrid_decrypt(c: gacd.Ciphertext, mmap: MonotoneMap, key: gacd.SecretKey) -> int:
    return mmap.inverse(gacd.decrypt(c, key))


def save_cdf_model(model: CdfModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{CDF_FILE_FORMAT} M={model.M} N={model.N}\n")
        for v in model.F:
            fh.write(f"{v.numerator}/{v.denominator}\n")


def load_cdf_model(path: str) -> CdfModel:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 3 or header[0] != CDF_FILE_FORMAT:
            raise ModelError("bad CDF file header")
        M = int(header[1].removeprefix("M="))
        N = int(header[2].removeprefix("N="))
        F = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            num, den = line.split("/")
            F.append(Fraction(int(num), int(den)))
    return CdfModel(M, N, tuple(F))


def load_frequencies(path: str, M: int) -> list:
    """Read newline-separated "<value> <count>" pairs into a count table."""
    counts = [0] * M
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            value, count = line.split()
            v = int(value)
            if not 0 <= v < M:
                raise DomainError(f"frequency value {v} outside [0, {M})")
            counts[v] += int(count)
    return counts
