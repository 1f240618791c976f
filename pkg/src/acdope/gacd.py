"""Randomised order-preserving encryption from approximate common divisors.

Encryption is c = m*k + r with a secret (lambda+1)-bit k and fresh noise r
drawn uniformly from the open band (k^(3/4), k - k^(3/4)); decryption is
floor(c / k).  Order is preserved because k*(m - m') >= k always beats the
noise difference, while equal plaintexts encrypt to randomly ordered
ciphertexts.  Parameter validation enforces lambda > (8/3)*lg M, which keeps
the lattice-based approximate-common-divisor attacks outside their working
range, and the noise band keeps offsets above the attack threshold k^(3/4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .prng import DeterministicGenerator

KEY_FILE_SCHEME = "gacd-ope/1"

#: Ciphertexts are opaque arbitrary-precision integers.
Ciphertext = int


class ParameterError(ValueError):
    """Scheme parameters violate the security constraints."""


class DomainError(ValueError):
    """Plaintext outside [0, M]."""


class ForeignCiphertextError(ValueError):
    """Ciphertext decrypts outside the plaintext domain for this key."""


def floor_root4(n: int) -> int:
    """Exact floor(n^(1/4)) for nonnegative integers."""
    return math.isqrt(math.isqrt(n))


def floor_pow34(k: int) -> int:
    """Exact floor(k^(3/4)), computed without floating point."""
    return floor_root4(k**3)


def min_lambda(M: int) -> int:
    """Smallest integer lambda with lambda > (8/3)*lg M, exactly.

    lambda > (8/3)*lg M  <=>  2^(3*lambda) > M^8, which is an exact integer
    comparison for every M (power of two or not).
    """
    if M < 2:
        raise DomainError("plaintext bound M must be >= 2")
    e = (M**8).bit_length() - 1  # floor(lg M^8)
    # smallest lambda with 3*lambda >= e + 1
    return (e + 3) // 3


def beta0_bound(alpha0: Fraction) -> Fraction:
    """Offset-exponent threshold 1 - a/2 - sqrt(1 - a - a^2/2) of the
    lattice attack, exact when the radicand is a rational square, otherwise
    correct to at least 64 fractional bits."""
    alpha0 = Fraction(alpha0)
    if not 0 <= alpha0 <= 1:
        raise DomainError("alpha0 must lie in (0, 1]")
    radicand = 1 - alpha0 - alpha0 * alpha0 / 2
    if radicand < 0:
        raise DomainError("radicand negative: alpha0 out of the attack's domain")
    p, q = radicand.numerator, radicand.denominator
    sp, sq = math.isqrt(p), math.isqrt(q)
    if sp * sp == p and sq * sq == q:
        root = Fraction(sp, sq)
    else:
        # sqrt(p/q) = sqrt(p*q)/q, truncated at 96 fractional bits
        scale = 1 << 96
        root = Fraction(math.isqrt(p * q * scale * scale), q * scale)
    return 1 - alpha0 / 2 - root


@dataclass(frozen=True)
class SchemeParams:
    M: int
    lam: int
    n_hint: Optional[int] = None


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    reasons: tuple = ()
    warnings: tuple = ()
    ciphertext_bits: int = 0
    expansion_ratio: Optional[float] = None


def validate_params(params: SchemeParams) -> ValidationReport:
    """Structured pass/fail check of SchemeParams; never raises."""
    reasons = []
    warnings = []
    if params.M < 2:
        reasons.append(f"M={params.M} below minimum 2")
        return ValidationReport(False, tuple(reasons))
    lam_min = min_lambda(params.M)
    if params.lam < lam_min:
        reasons.append(
            f"lambda={params.lam} below bound: need lambda > (8/3)*lg M, "
            f"i.e. lambda >= {lam_min}"
        )
    if params.n_hint is not None:
        if params.n_hint > params.M // 10:
            reasons.append(
                f"n_hint={params.n_hint} too large versus M={params.M} "
                f"(sorting-attack risk; need n << M)"
            )
        elif params.n_hint > params.M // 100:
            warnings.append(
                f"n_hint={params.n_hint} above M/100; sorting-attack margin is thin"
            )
    rho = max(params.M.bit_length() - 1, 1)  # ceil(lg M) for power-of-two M
    if params.M & (params.M - 1):
        rho = params.M.bit_length()
    bits = rho + params.lam + 1
    ratio = bits / rho if params.lam == lam_min else None
    return ValidationReport(not reasons, tuple(reasons), tuple(warnings), bits, ratio)


@dataclass(frozen=True)
class SecretKey:
    k: int
    noise_lo: int
    noise_hi: int
    params: SchemeParams = field(repr=False)


def _noise_band(k: int) -> tuple[int, int]:
    # open interval (k^(3/4), k - k^(3/4)) tightened to integers in the
    # strict direction
    f4 = floor_pow34(k)
    return f4 + 1, k - f4 - 1


def keygen(params: SchemeParams, gen: DeterministicGenerator) -> SecretKey:
    report = validate_params(params)
    if not report.ok:
        raise ParameterError("; ".join(report.reasons))
    k = gen.uniform_int(1 << params.lam, (1 << (params.lam + 1)) - 1)
    lo, hi = _noise_band(k)
    return SecretKey(k=k, noise_lo=lo, noise_hi=hi, params=params)


def encrypt(m: int, key: SecretKey, gen: DeterministicGenerator) -> Ciphertext:
    if not 0 <= m <= key.params.M:
        raise DomainError(f"plaintext {m} outside [0, {key.params.M}]")
    r = gen.uniform_int(key.noise_lo, key.noise_hi)
    return m * key.k + r


def decrypt(c: Ciphertext, key: SecretKey) -> int:
    m = c // key.k
    if not 0 <= m <= key.params.M:
        raise ForeignCiphertextError(
            f"quotient {m} outside [0, {key.params.M}]: not a ciphertext for this key"
        )
    return m


def noise_entropy_bits(key: SecretKey) -> float:
    """lg of the noise-band size: entropy added to each ciphertext."""
    return math.log2(key.noise_hi - key.noise_lo + 1)


def save_key(key: SecretKey, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"scheme={KEY_FILE_SCHEME}\n")
        fh.write(f"lambda={key.params.lam}\n")
        fh.write(f"M={key.params.M}\n")
        fh.write(f"k={key.k}\n")


def load_key(path: str) -> SecretKey:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    fields = dict(ln.split("=", 1) for ln in lines)
    if fields.get("scheme") != KEY_FILE_SCHEME:
        raise ParameterError(f"unexpected key file scheme: {fields.get('scheme')!r}")
    params = SchemeParams(M=int(fields["M"]), lam=int(fields["lambda"]))
    k = int(fields["k"])
    if not (1 << params.lam) <= k < (1 << (params.lam + 1)):
        raise ParameterError("key k outside [2^lambda, 2^(lambda+1))")
    lo, hi = _noise_band(k)
    return SecretKey(k=k, noise_lo=lo, noise_hi=hi, params=params)
