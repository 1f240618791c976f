"""Beta(x, b) sampling with integer shapes at fixed dyadic precision.

For integer shape parameters the regularised incomplete beta function is the
binomial tail

    I_z(x, b) = sum_{j=x}^{d} C(d, j) z^j (1-z)^(d-j),   d = x + b - 1,

which we evaluate exactly in integer arithmetic for dyadic z.  Inversion is
pinned to the dyadic grid: the draw for target u is the largest multiple w of
2^-prec with I_w(x, b) <= u, so the result is independent of how the search
for it was seeded.  A float initial guess plus one exact Newton step lands
within an ulp or two; a verification loop then fixes the grid point.

When the polynomial degree exceeds EXACT_DEGREE_LIMIT, exact evaluation is
intractable and we substitute the normal quantile with the Beta's exact mean
and variance, computed with mpmath at fixed precision so draws stay
deterministic and monotone in u.  The Beta(x, x+1) distributions met in the
bisection recursion concentrate as 1/sqrt(x), so the substitution error
vanishes precisely where it is used.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

import mpmath
from scipy.special import betaincinv

EXACT_DEGREE_LIMIT = 128


def beta_cdf(x: int, b: int, z: Fraction) -> Fraction:
    """Exact regularised incomplete beta I_z(x, b) for integer shapes."""
    if x < 1 or b < 1:
        raise ValueError("shape parameters must be positive integers")
    z = Fraction(z)
    if z <= 0:
        return Fraction(0)
    if z >= 1:
        return Fraction(1)
    d = x + b - 1
    p, q = z.numerator, z.denominator
    pc = q - p  # numerator of 1 - z
    # running powers: p^j ascending, pc^(d-j) descending
    a_pow = p**x
    b_pow = pc ** (d - x)
    total = 0
    for j in range(x, d + 1):
        total += comb(d, j) * a_pow * b_pow
        if j < d:
            a_pow *= p
            b_pow //= pc
    return Fraction(total, q**d)


def beta_pdf(x: int, b: int, z: Fraction) -> Fraction:
    """Exact Beta(x, b) density at rational z."""
    z = Fraction(z)
    if not 0 < z < 1:
        return Fraction(0)
    inv_beta = Fraction(factorial(x + b - 1), factorial(x - 1) * factorial(b - 1))
    return inv_beta * z ** (x - 1) * (1 - z) ** (b - 1)


def _cdf_leq(x: int, b: int, wn: int, prec: int, un: int) -> bool:
    """I_{wn/2^prec}(x, b) <= un/2^prec, exactly, without huge Fractions."""
    if wn <= 0:
        return un >= 0
    D = 1 << prec
    if wn >= D:
        return un >= D
    d = x + b - 1
    pc = D - wn
    a_pow = wn**x
    b_pow = pc ** (d - x)
    total = 0
    for j in range(x, d + 1):
        total += comb(d, j) * a_pow * b_pow
        if j < d:
            a_pow *= wn
            b_pow //= pc
    # total / D^d <= un / D  <=>  total <= un * D^(d-1)
    return total <= un * D ** (d - 1)


def _icdf_exact(x: int, b: int, un: int, prec: int) -> int:
    """Largest wn with I_{wn/2^prec}(x, b) <= un/2^prec, for small degree."""
    D = 1 << prec
    if un <= 0:
        return 0
    u = Fraction(un, D)
    guess = float(betaincinv(x, b, un / D))
    z = Fraction(guess)  # floats are dyadic, so this is exact
    z = min(max(z, Fraction(1, 1 << 70)), 1 - Fraction(1, 1 << 70))
    # one exact Newton step: float error ~2^-50 squares to far below an ulp
    steps = 1 if prec <= 90 else 2
    for _ in range(steps):
        fz = beta_pdf(x, b, z)
        if fz > 0:
            z = z - (beta_cdf(x, b, z) - u) / fz
            z = min(max(z, Fraction(0)), Fraction(1))
            # re-truncate so the next CDF evaluation stays cheap
            z = Fraction((z.numerator << (prec + 64)) // z.denominator, 1 << (prec + 64))
    wn = (z.numerator * D) // z.denominator
    wn = min(max(wn, 0), D - 1)
    # pin to the grid definition; Newton should be within a couple of ulps
    for _ in range(8):
        if not _cdf_leq(x, b, wn, prec, un):
            wn -= 1
        elif _cdf_leq(x, b, wn + 1, prec, un):
            wn += 1
        else:
            return max(wn, 0)
        wn = min(max(wn, 0), D - 1)
    # Newton landed far off (pathological endpoint); fall back to bisection
    lo, hi = 0, D  # invariant: cdf(lo) <= u, cdf(hi) > u (hi=D sentinel)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _cdf_leq(x, b, mid, prec, un):
            lo = mid
        else:
            hi = mid
    return lo


def _icdf_normal(x: int, b: int, un: int, prec: int) -> int:
    """Normal-quantile stand-in for huge shapes; deterministic via mpmath."""
    D = 1 << prec
    if un <= 0:
        return 0
    with mpmath.mp.workprec(prec + 48):
        u = mpmath.mpf(un) / D
        s = x + b
        mean = mpmath.mpf(x) / s
        var = mpmath.mpf(x) * b / (mpmath.mpf(s) ** 2 * (s + 1))
        q = mean + mpmath.sqrt(2 * var) * mpmath.erfinv(2 * u - 1)
        wn = int(mpmath.floor(q * D))
    return min(max(wn, 0), D - 1)


def beta_icdf_bits(x: int, b: int, un: int, prec: int) -> int:
    """Dyadic inverse CDF: numerator of the Beta(x, b) draw for target
    un/2^prec, at prec fractional bits."""
    if x < 1 or b < 1:
        raise ValueError("shape parameters must be positive integers")
    if not 0 <= un < (1 << prec):
        raise ValueError("target numerator outside [0, 2^prec)")
    if x == 1 and b == 1:
        return un  # Beta(1,1) is uniform
    if x + b - 1 <= EXACT_DEGREE_LIMIT:
        return _icdf_exact(x, b, un, prec)
    return _icdf_normal(x, b, un, prec)


def draw(gen, x: int, b: int, prec: int) -> Fraction:
    """One Beta(x, b) variate at prec dyadic fractional bits."""
    un = gen.bits(prec)
    return Fraction(beta_icdf_bits(x, b, un, prec), 1 << prec)
