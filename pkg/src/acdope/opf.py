"""Deterministic order-preserving functions by recursive range bisection.

A key fixes a random increasing map f: [0, M] -> [1, N] (M = 2^r, N >= M^2)
without ever materialising it.  Encryption bisects the domain; each frame
(a, b, f(a), f(b)) reseeds the generator through a keyed hash, draws the
midpoint image f((a+b)/2) = f(a) + z with z in [0, f(b) - f(a)], and recurses
into the half containing the plaintext.  Decryption replays exactly the same
frames and pseudorandom choices, so it reconstructs the identical f values
and walks down to the preimage.

Two midpoint samplers are supported.  "uniform" draws z uniformly (the
CryptDB-style ope-exp baseline; it deliberately ignores the tail condition
and is kept as a labelled baseline only).  "beta" draws z = floor(y * w) with
w ~ Beta(h, h+1) for half-width h, clamped into [y/4, 3y/4] so the subrange
cannot collapse (the clamp count is tracked in CLAMP_COUNT).
"""

from __future__ import annotations

import enum
import hashlib
import hmac
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from . import betadist
from .prng import SEED_BYTES, DeterministicGenerator, Seed, fresh_seed

KEY_FILE_SCHEME = "opf/1"


class Sampler(enum.Enum):
    UNIFORM = "uniform"
    BETA = "beta"


class DomainError(ValueError):
    """Plaintext outside [0, M] or ciphertext outside [1, N]."""


class NotACiphertextError(ValueError):
    """Value is not in the image of this key's order-preserving function."""


class KeyFormatError(ValueError):
    pass


#: Number of beta-mode midpoint draws clamped into [y/4, 3y/4] so far.
CLAMP_COUNT = 0


def reset_clamp_count() -> None:
    global CLAMP_COUNT
    CLAMP_COUNT = 0


@dataclass(frozen=True)
class OpfKey:
    master_seed: Seed
    r_bits: int
    N: int
    sampler: Sampler

    @property
    def M(self) -> int:
        return 1 << self.r_bits


def make_opf_key(
    r_bits: int,
    sampler: Sampler,
    N: Optional[int] = None,
    master_seed: Optional[Seed] = None,
) -> OpfKey:
    """Build a key for the power-of-two domain [0, 2^r_bits].

    N defaults to M^2, the smallest allowed range bound.
    """
    if r_bits < 1:
        raise DomainError("r_bits must be >= 1 (domain [0, 2^r])")
    M = 1 << r_bits
    if N is None:
        N = M * M
    if N < M * M:
        raise DomainError(f"N={N} below M^2={M * M}")
    if master_seed is None:
        master_seed = fresh_seed()
    return OpfKey(master_seed=master_seed, r_bits=r_bits, N=N, sampler=sampler)


@dataclass(frozen=True)
class RangeFrame:
    a: int
    b: int
    fa: int
    fb: int


def _encode_int(v: int) -> bytes:
    raw = v.to_bytes(max((v.bit_length() + 7) // 8, 1), "big")
    return len(raw).to_bytes(4, "big") + raw


def seed_fn(master: Seed, frame: RangeFrame) -> Seed:
    """Per-frame seed: keyed hash of the length-prefixed frame encoding.

    Length prefixes make the encoding injective, so distinct frames cannot
    alias to the same generator stream.
    """
    msg = b"".join(_encode_int(v) for v in (frame.a, frame.b, frame.fa, frame.fb))
    return Seed(hmac.new(master.data, msg, hashlib.sha256).digest())


def init_endpoints(key: OpfKey) -> tuple[int, int]:
    """Pseudorandom (f(0), f(M)) with f(M) - f(0) > 3N/4, inside [1, N]."""
    N = key.N
    gen = DeterministicGenerator(
        Seed(hmac.new(key.master_seed.data, b"opf/endpoints", hashlib.sha256).digest())
    )
    f0 = gen.uniform_int(1, max(N // 4 - 1, 1))
    fM = gen.uniform_int(f0 + 3 * N // 4 + 1, N)
    return f0, fM


def _beta_precision(key: OpfKey) -> int:
    return max((key.N - 1).bit_length(), 64)


def sample_mid(
    gen: DeterministicGenerator,
    y: int,
    x: int,
    a: int,
    sampler: Sampler,
    prec: int = 64,
) -> int:
    """Midpoint offset z in [0, y] for a subdomain of width a with relative
    midpoint x.  Beta mode clamps into [y/4, 3y/4] (tail condition)."""
    global CLAMP_COUNT
    if y < 1:
        raise DomainError("degenerate range: y must be >= 1")
    if sampler is Sampler.UNIFORM:
        return gen.uniform_int(0, y)
    wn = betadist.beta_icdf_bits(x, a - x + 1, gen.bits(prec), prec)
    z = (y * wn) >> prec
    lo, hi = -(-y // 4), (3 * y) // 4
    if lo > hi:  # y <= 3: the tail window is empty, nothing to clamp into
        return z
    if z < lo or z > hi:
        CLAMP_COUNT += 1
        z = min(max(z, lo), hi)
    return z


def _midpoint_value(key: OpfKey, frame: RangeFrame, prec: int) -> int:
    y = frame.fb - frame.fa
    if y == 0:
        return frame.fa  # earlier collision flattened this subrange
    gen = DeterministicGenerator(seed_fn(key.master_seed, frame))
    width = frame.b - frame.a
    z = sample_mid(gen, y, width // 2, width, key.sampler, prec)
    return frame.fa + z


def opf_encrypt(m: int, key: OpfKey, trace: Optional[list] = None) -> int:
    """Deterministic ciphertext f(m) in [1, N]; nondecreasing in m."""
    M = key.M
    if not 0 <= m <= M:
        raise DomainError(f"plaintext {m} outside [0, {M}]")
    f0, fM = init_endpoints(key)
    if m == 0:
        return f0
    if m == M:
        return fM
    prec = _beta_precision(key)
    a, b, fa, fb = 0, M, f0, fM
    while True:
        frame = RangeFrame(a, b, fa, fb)
        fx = _midpoint_value(key, frame, prec)
        x = (a + b) // 2
        if trace is not None:
            trace.append((frame, fx))
        if x == m:
            return fx
        if m < x:
            b, fb = x, fx
        else:
            a, fa = x, fx


def opf_decrypt(c: int, key: OpfKey, trace: Optional[list] = None) -> int:
    """Preimage of c under the key's function, by bit-exact replay."""
    M, N = key.M, key.N
    if not 1 <= c <= N:
        raise DomainError(f"ciphertext {c} outside [1, {N}]")
    f0, fM = init_endpoints(key)
    if c == f0:
        return 0
    if c == fM:
        return M
    if not f0 < c < fM:
        raise NotACiphertextError(f"{c} outside the image interval [{f0}, {fM}]")
    prec = _beta_precision(key)
    a, b, fa, fb = 0, M, f0, fM
    while True:
        if b - a == 1:
            raise NotACiphertextError(f"{c} falls in a gap of the function image")
        frame = RangeFrame(a, b, fa, fb)
        fx = _midpoint_value(key, frame, prec)
        x = (a + b) // 2
        if trace is not None:
            trace.append((frame, fx))
        if fx == c:
            return x
        if c < fx:
            b, fb = x, fx
        else:
            a, fa = x, fx


def eq1_pmf(x: int, a: int, y: int, b: int) -> Fraction:
    """Reference pmf of the x-th smallest of a uniform draws on [0, b]
    landing at y; exact rational.  Used to sanity-check samplers, never in
    the encryption path (it is the continuum-limit discretisation and only
    approximately normalised for small b)."""
    if not (1 <= x <= a and 0 <= y <= b and b >= 1):
        raise DomainError("need 1 <= x <= a, 0 <= y <= b, b >= 1")
    coeff = Fraction(comb(a, x) * x)  # a! / ((x-1)! (a-x)!)
    return coeff * Fraction(y, b) ** (x - 1) * Fraction(1, b) * Fraction(b - y, b) ** (a - x)


def save_key(key: OpfKey, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"scheme={KEY_FILE_SCHEME}\n")
        fh.write(f"sampler={key.sampler.value}\n")
        fh.write(f"r_bits={key.r_bits}\n")
        fh.write(f"N={key.N}\n")
        fh.write(f"seed_hex={key.master_seed.hex()}\n")


def load_key(path: str) -> OpfKey:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    fields = dict(ln.split("=", 1) for ln in lines)
    if fields.get("scheme") != KEY_FILE_SCHEME:
        raise KeyFormatError(f"unexpected key file scheme: {fields.get('scheme')!r}")
    seed = Seed.from_hex(fields["seed_hex"])
    if len(seed.data) != SEED_BYTES:
        raise KeyFormatError("bad seed length")
    return make_opf_key(
        r_bits=int(fields["r_bits"]),
        sampler=Sampler(fields["sampler"]),
        N=int(fields["N"]),
        master_seed=seed,
    )
