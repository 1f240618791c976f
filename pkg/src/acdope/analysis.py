"""Security estimators and desk-scale attack oracles.

Implements the adversary's side of the window one-wayness game (estimate the
secret multiplier from the sample maximum, then localise a challenge), the
success-probability law 1 - (1-eps)^n it obeys, leakage accounting, the
inversion estimate for Boldyreva-style deterministic OPFs, and a brute-force
approximate-common-divisor search used as a test oracle against deliberately
weakened keys.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import gacd
from .prng import DeterministicGenerator, Seed, derive_seed


class EmptyInputError(ValueError):
    pass


class BudgetExceededError(ValueError):
    pass


@dataclass(frozen=True)
class SortedSample:
    ciphertexts: tuple
    M: int

    def __post_init__(self):
        if not self.ciphertexts:
            raise EmptyInputError("sample must be nonempty")
        if any(b < a for a, b in zip(self.ciphertexts, self.ciphertexts[1:])):
            raise ValueError("ciphertexts must be nondecreasing")

    @property
    def n(self) -> int:
        return len(self.ciphertexts)


@dataclass(frozen=True)
class WindowEstimate:
    m_hat: Fraction
    k_hat: Fraction


def estimate_k(sample: SortedSample) -> Fraction:
    """Maximum-likelihood estimate c_n / M of the secret multiplier; the
    sample maximum is a sufficient statistic for the range."""
    return Fraction(sample.ciphertexts[-1], sample.M)


def window_attack(c: int, sample: SortedSample) -> WindowEstimate:
    k_hat = estimate_k(sample)
    return WindowEstimate(m_hat=c / k_hat, k_hat=k_hat)


def success_probability(epsilon: Fraction, n: int) -> Fraction:
    """Exact probability 1 - (1 - eps)^n that the sample maximum lands within
    relative eps of the top of the range."""
    epsilon = Fraction(epsilon)
    if not 0 <= epsilon <= 1:
        raise gacd.ParameterError("epsilon must lie in [0, 1]")
    if n < 1:
        raise gacd.ParameterError("n must be >= 1")
    return 1 - (1 - epsilon) ** n


def leakage_bits(n: int) -> float:
    """Bits of a plaintext leaked by its rank among n sorted ciphertexts:
    lg n, up to an O(1) term reported as a band by callers, never asserted."""
    if n < 1:
        raise gacd.ParameterError("n must be >= 1")
    return math.log2(n)


LEAKAGE_BAND_BITS = 2.0  # reporting band for the O(1) term


def bclo_invert_estimate(c: int, M: int, N: int) -> tuple[Fraction, float]:
    """Inversion estimate for a uniformly random increasing map [0,M]->[1,N]:
    m_hat = M*c/N with standard deviation ~ sqrt(2*m_hat*(1 - m_hat/M))."""
    if not 0 <= c <= N:
        raise gacd.DomainError(f"ciphertext {c} outside [0, {N}]")
    m_hat = Fraction(M * c, N)
    sigma = math.sqrt(2 * float(m_hat) * (1 - float(m_hat) / M))
    return m_hat, sigma


BRUTEFORCE_BUDGET = 1 << 24


def noise_band_consistent(c: int, k: int) -> bool:
    """Residue of c mod k strictly inside the scheme's noise band."""
    f4 = gacd.floor_pow34(k)
    r = c % k
    return f4 < r < k - f4


def bruteforce_gacd(ciphertexts: Sequence[int], k_min: int, k_max: int) -> list:
    """Every k' in [k_min, k_max] whose residues all sit strictly inside its
    noise band (k'^(3/4), k' - k'^(3/4)); exactly what an adversary against
    this scheme can verify."""
    if not ciphertexts:
        raise EmptyInputError("need at least one ciphertext")
    if k_max - k_min > BRUTEFORCE_BUDGET:
        raise BudgetExceededError(
            f"candidate range {k_max - k_min} exceeds desk-scale budget {BRUTEFORCE_BUDGET}"
        )
    cts = list(ciphertexts)
    out = []
    for k in range(max(k_min, 2), k_max + 1):
        f4 = gacd.floor_pow34(k)
        hi = k - f4
        ok = True
        for c in cts:
            r = c % k
            if not f4 < r < hi:
                ok = False
                break
        if ok:
            out.append(k)
    return out


@dataclass(frozen=True)
class LeakageReport:
    """Per-plaintext leakage increment lg(m * p_m / F(m)) from flattening."""

    entries: tuple  # (m, bits) for m = 1 .. M-1
    max_bits: float


def flatten_leakage_report(model) -> LeakageReport:
    entries = []
    worst = 0.0
    for m in range(1, model.M):
        ratio = m * model.p(m) / model.F[m]
        bits = math.log2(float(ratio))
        entries.append((m, bits))
        worst = max(worst, bits)
    return LeakageReport(entries=tuple(entries), max_bits=worst)


def window_success_rate(
    *,
    n: int,
    M: int,
    lam: Optional[int],
    trials: int,
    radius: Callable[[int], Fraction],
    seed: Seed,
) -> float:
    """Monte-Carlo estimate of the window adversary's success rate.

    Each trial keys a fresh scheme, encrypts n uniform plaintexts plus a
    uniform challenge, runs window_attack and scores a hit when the true
    plaintext lies within radius(m) of the estimate.  Trials use derived
    seeds, so batches are reproducible and embarrassingly parallel.
    """
    if lam is None:
        lam = gacd.min_lambda(M)
    params = gacd.SchemeParams(M=M, lam=lam)
    hits = 0
    for t in range(trials):
        gen = DeterministicGenerator(derive_seed(seed, b"window-trial-%d" % t))
        key = gacd.keygen(params, gen)
        sample_cts = sorted(
            gacd.encrypt(gen.uniform_int(0, M - 1), key, gen) for _ in range(n)
        )
        m = gen.uniform_int(0, M - 1)
        c = gacd.encrypt(m, key, gen)
        est = window_attack(c, SortedSample(tuple(sample_cts), M))
        if abs(m - est.m_hat) < radius(m):
            hits += 1
    return hits / trials
