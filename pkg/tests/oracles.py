"""Independent oracles used by the tests.

Everything here deliberately avoids the code paths under test: pi comes
from a Machin formula summed in exact rationals, roots from Fraction
Newton iteration, K/E from their hypergeometric series, the beta value
from a split binomial series, and integrals from composite midpoint
rules.  Values are computed fresh so the tests never assert against
numbers produced by the library itself.
"""

from fractions import Fraction

import mpmath as mp


def _num(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def close(a, b, neg_exp10: int, dps: int = None) -> bool:
    """|a - b| < 10^-neg_exp10, with the subtraction done at enough
    precision that the comparison itself cannot round the gap away."""
    with mp.workdps(dps or neg_exp10 + 30):
        return abs(_num(a) - _num(b)) < mp.mpf(10) ** (-neg_exp10)


def gap(a, b, dps: int = 120) -> mp.mpf:
    with mp.workdps(dps):
        return abs(_num(a) - _num(b))


def machin_pi(digits: int) -> mp.mpf:
    """pi via 16 atan(1/5) - 4 atan(1/239), exact rational partial sums."""
    def atan_inv(n: int, terms: int) -> Fraction:
        acc = Fraction(0)
        for k in range(terms):
            term = Fraction((-1) ** k, (2 * k + 1) * n ** (2 * k + 1))
            acc += term
        return acc

    terms = digits // 1 + 10  # 1/5^2 per term is far more than a digit
    val = 16 * atan_inv(5, terms) - 4 * atan_inv(239, terms // 2 + 5)
    with mp.workdps(digits + 10):
        return mp.mpf(val.numerator) / val.denominator


def newton_nth_root(a: int, n: int, digits: int) -> mp.mpf:
    """a**(1/n) by Fraction Newton iteration."""
    x = Fraction(a, 1) if a >= 1 else Fraction(1)
    target = Fraction(a)
    for _ in range(digits.bit_length() + 8):
        x = x - (x ** n - target) / (n * x ** (n - 1))
        # limit the rational's size to keep iterations cheap
        x = x.limit_denominator(10 ** (2 * digits + 20))
    with mp.workdps(digits + 10):
        return mp.mpf(x.numerator) / x.denominator


def hypergeometric_K(k, dps: int) -> mp.mpf:
    """K via (pi/2) sum ((1/2)_n / n!)^2 k^(2n)."""
    with mp.workdps(dps):
        k = mp.mpf(k)
        k2 = k * k
        term = mp.mpf(1)
        acc = mp.mpf(1)
        n = 0
        eps = mp.mpf(10) ** (-dps)
        while True:
            n += 1
            term *= ((2 * n - 1) ** 2 * k2) / (4 * n * n)
            acc += term
            if term < eps * acc:
                break
            if n > 20 * dps:
                raise RuntimeError("series too slow for this k")
        return +(mp.pi / 2 * acc)


def hypergeometric_E(k, dps: int) -> mp.mpf:
    """E via (pi/2) [1 - sum ((1/2)_n/n!)^2 k^(2n)/(2n-1)]."""
    with mp.workdps(dps):
        k = mp.mpf(k)
        k2 = k * k
        coeff = mp.mpf(1)
        acc = mp.mpf(0)
        n = 0
        eps = mp.mpf(10) ** (-dps)
        while True:
            n += 1
            coeff *= ((2 * n - 1) ** 2 * k2) / (4 * n * n)
            term = coeff / (2 * n - 1)
            acc += term
            if term < eps and n > 3:
                break
            if n > 20 * dps:
                raise RuntimeError("series too slow for this k")
        return +(mp.pi / 2 * (1 - acc))


def beta_complete_16_23(dps: int) -> mp.mpf:
    """B(1; 1/6, 2/3) by splitting at 1/2 and expanding (1-t)^(-1/3)
    resp. (1-u)^(-5/6) binomially; every term integrates to a rational
    times a power of 1/2."""
    def half_integral(a: Fraction, b: Fraction, dps: int) -> mp.mpf:
        # int_0^(1/2) t^(a-1) (1-t)^(b-1) dt, binomial series in t
        with mp.workdps(dps + 20):
            coeff = mp.mpf(1)
            acc = mp.mpf(0)
            half = mp.mpf(1) / 2
            eps = mp.mpf(10) ** (-dps - 10)
            am, bm = mp.mpf(a.numerator) / a.denominator, mp.mpf(b.numerator) / b.denominator
            k = 0
            while True:
                # coeff = (-1)^k C(b-1, k) = prod_{j<k} (j+1-b)/ (j+1)
                term = coeff * half ** (am + k) / (am + k)
                acc += term
                if abs(term) < eps and k > 3:
                    break
                coeff *= (k + 1 - bm) / (k + 1)
                k += 1
            return +acc

    a, b = Fraction(1, 6), Fraction(2, 3)
    with mp.workdps(dps + 20):
        return half_integral(a, b, dps) + half_integral(b, a, dps)


def composite_midpoint(f, a, b, n: int) -> mp.mpf:
    h = (mp.mpf(b) - mp.mpf(a)) / n
    return h * mp.fsum(f(a + (i + mp.mpf(1) / 2) * h) for i in range(n))


def random_planted_poly(rng, degree: int = 6, height: int = 10 ** 6):
    """A random integer polynomial with a real root, plus that root at
    ~100 digits (refine with newton_refine_root for more)."""
    while True:
        coeffs = [rng.randint(-height, height) for _ in range(degree)] \
            + [rng.randint(1, height)]
        with mp.workdps(120):
            try:
                roots = mp.polyroots(list(reversed(coeffs)), maxsteps=300,
                                     extraprec=300)
            except Exception:
                continue
            reals = [z for z in roots if abs(mp.im(z)) < mp.mpf(10) ** -20
                     and abs(mp.re(z)) > mp.mpf(10) ** -6]
            if reals:
                return coeffs, mp.re(reals[0])


def newton_refine_root(coeffs, x0, dps: int):
    """Polish a root of the integer polynomial (ascending coeffs) to dps."""
    with mp.workdps(dps + 20):
        x = mp.mpf(x0)
        rev = list(reversed(coeffs))
        dcoeffs = [c * (len(coeffs) - 1 - i) for i, c in enumerate(rev)][:-1]
        for _ in range(300):
            fx = mp.polyval(rev, x)
            dfx = mp.polyval(dcoeffs, x)
            step = fx / dfx
            x -= step
            if abs(step) < mp.mpf(10) ** (-dps - 10):
                break
        return +x


def poly_divides(d: tuple, p: tuple) -> bool:
    """Whether integer polynomial d (ascending coeffs) divides p over Q."""
    rem = [Fraction(c) for c in p]
    dd = [Fraction(c) for c in d]
    while len(rem) >= len(dd) and any(rem):
        if rem[-1] == 0:
            rem.pop()
            continue
        factor = rem[-1] / dd[-1]
        shift = len(rem) - len(dd)
        for i, c in enumerate(dd):
            rem[shift + i] -= factor * c
        rem.pop()
    return not any(rem)
