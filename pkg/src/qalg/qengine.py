"""Nome construction and q-dependent building blocks.

The central objects are the two-sided products

    [a,p;q] = prod_{n>=0} (1 - q^(p*n+a)) (1 - q^(p*n+p-a)),   0 < a < p,

called *agiles*, their normalised companions
[a,p;q]* = q^(p/12 - a/2 + a^2/(2p)) [a,p;q], the alternating theta sums
theta(a,b;q) = sum_{n in Z} (-1)^n q^(a n^2 + b n), the classical theta2,
theta3, and the prefactor-free eta product eta(m) = prod (1 - q^(m*n)).

All parameters a, p, r are exact rationals; q = exp(-pi*sqrt(r)).
Truncation: products stop at the first index whose factor differs from 1
by less than 10^-(digits+guard), plus one extra term; theta sums are cut
symmetrically with the same bound.  The discarded tails are dominated by
geometric series far below the visible precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import DomainError, OrderError
from .precision import HPReal, PrecisionContext, to_mpf
from .series import FormalSeries, one_minus_power_product


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Nome:
    """q = exp(-pi*sqrt(r)), 0 < q < 1.

    r is normally an exact positive rational; a high-precision real is
    also accepted (needed when r comes out of the inverse singular
    modulus), in which case it must carry the context's full precision.
    """

    r: object  # Fraction or mpf
    q: HPReal
    ctx: PrecisionContext

    def scaled(self, c: Fraction) -> "Nome":
        """The nome q**c, i.e. parameter c^2 * r."""
        c = Fraction(c)
        if c <= 0:
            raise DomainError("scale factor must be positive")
        return make_nome(self.r * c * c if isinstance(self.r, Fraction)
                         else self.r * to_mpf(c * c), self.ctx)


@dataclass(frozen=True)
class AgileSpec:
    """Parameters (a, p) of a two-sided q-product, 0 < a < p."""

    a: Fraction
    p: Fraction

    def __post_init__(self):
        a, p = Fraction(self.a), Fraction(self.p)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "p", p)
        if not (0 < a < p):
            raise DomainError(f"need 0 < a < p, got a={a}, p={p}")


@dataclass(frozen=True)
class ThetaSpec:
    """Parameters (a, b) of the alternating sum  sum (-1)^n q^(a n^2 + b n)."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        a, b = Fraction(self.a), Fraction(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a <= 0:
            raise DomainError(f"quadratic coefficient must be positive, got {a}")


def make_nome(r, ctx: PrecisionContext) -> Nome:
    if isinstance(r, mp.mpf):
        if r <= 0:
            raise DomainError(f"r must be positive, got {r}")
        with ctx.workdps():
            q = mp.exp(-mp.pi * mp.sqrt(r))
        return Nome(r, q, ctx)
    r = Fraction(r)
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    with ctx.workdps():
        q = mp.exp(-mp.pi * mp.sqrt(to_mpf(r)))
    return Nome(r, q, ctx)


def star_exponent(a, p) -> Fraction:
    """The normalisation exponent p/12 - a/2 + a^2/(2p), exactly."""
    a, p = Fraction(a), Fraction(p)
    return p / 12 - a / 2 + a * a / (2 * p)


# ---------------------------------------------------------------------------
# internal truncation helpers (run under an active workdps)
# ---------------------------------------------------------------------------

def _tail_threshold(nome: Nome) -> int:
    """Integer X such that q**x < 10^-(digits+guard) for all x > X."""
    ctx = nome.ctx
    return int(mp.ceil(mp.mpf(ctx.digits + ctx.guard) / (-mp.log10(nome.q))))


def _qpow(q: HPReal, e: Fraction) -> HPReal:
    return mp.power(q, to_mpf(Fraction(e)))


def _agile_raw(a: Fraction, p: Fraction, nome: Nome) -> HPReal:
    """The two-sided product for any positive rational a (also a >= p,
    where early factors may be negative); used by the shift symmetries."""
    q = nome.q
    stop = _tail_threshold(nome)
    t1 = _qpow(q, a)
    t2 = _qpow(q, p - a) if p != a else mp.mpf(1)  # q^(p-a); may exceed 1
    qp = _qpow(q, p)
    prod = mp.mpf(1)
    e1, e2 = Fraction(a), p - a
    n = 0
    while min(e1, e2) <= stop or n == 0:
        prod *= (1 - t1) * (1 - t2)
        t1 *= qp
        t2 *= qp
        e1 += p
        e2 += p
        n += 1
    prod *= (1 - t1) * (1 - t2)  # one extra term past the bound
    return prod


def agile(spec: AgileSpec, nome: Nome) -> HPReal:
    """[a,p;q], truncated with tail below the guard threshold."""
    with nome.ctx.workdps():
        return +_agile_raw(spec.a, spec.p, nome)


def agile_star(spec: AgileSpec, nome: Nome) -> HPReal:
    """q^(p/12 - a/2 + a^2/(2p)) * [a,p;q] (principal positive branch)."""
    with nome.ctx.workdps():
        e = star_exponent(spec.a, spec.p)
        return +(_qpow(nome.q, e) * _agile_raw(spec.a, spec.p, nome))


def theta_general(spec: ThetaSpec, nome: Nome) -> HPReal:
    """sum_{n=-inf}^{inf} (-1)^n q^(a n^2 + b n), symmetric truncation."""
    a, b = spec.a, spec.b
    q = nome.q
    with nome.ctx.workdps():
        stop = _tail_threshold(nome)
        s = mp.mpf(1)
        # walk n = 1, 2, ... and n = -1, -2, ... together; exponents are
        # advanced multiplicatively: e(n+1) - e(n) = a(2n+1) + b.
        tp = _qpow(q, a + b)      # q^(a+b) = term at n=1
        tm = _qpow(q, a - b)      # term at n=-1
        step_p = _qpow(q, 3 * a + b)   # e(2)-e(1)
        step_m = _qpow(q, 3 * a - b)
        q2a = _qpow(q, 2 * a)
        ep, em = a + b, a - b     # exact exponents, for the stop test
        n = 1
        while True:
            s += (-1) ** n * (tp + tm)
            if min(ep, em) > stop and n >= 2:
                break
            tp *= step_p
            tm *= step_m
            step_p *= q2a
            step_m *= q2a
            ep += a * (2 * n + 1) + b
            em += a * (2 * n + 1) - b
            n += 1
        return +s


def theta2(nome: Nome) -> HPReal:
    """theta_2(q) = sum q^((n+1/2)^2) = 2 q^(1/4) sum_{n>=0} q^(n^2+n)."""
    q = nome.q
    with nome.ctx.workdps():
        stop = _tail_threshold(nome)
        s = mp.mpf(1)
        t = mp.mpf(1)
        n = 0
        while n * n + n <= stop or n < 2:
            t *= _qpow(q, 2 * (n + 1))  # q^((n+1)^2+(n+1)) / q^(n^2+n) = q^(2n+2)
            s += t
            n += 1
        return +(2 * _qpow(q, Fraction(1, 4)) * s)


def theta3(nome: Nome) -> HPReal:
    """theta_3(q) = 1 + 2 sum_{n>=1} q^(n^2)."""
    q = nome.q
    with nome.ctx.workdps():
        stop = _tail_threshold(nome)
        s = mp.mpf(0)
        t = mp.mpf(1)
        n = 0
        while n * n <= stop or n < 2:
            t *= _qpow(q, 2 * n + 1)
            s += t
            n += 1
        return +(1 + 2 * s)


def theta_powersum(m: int, nome: Nome) -> HPReal:
    """sum_{n=-inf}^{inf} q^(n^2 + m*n), computed by direct summation.

    (Closed forms in terms of K and the singular modulus live in
    :mod:`qalg.elliptic`; the harness compares the two.)
    """
    m = int(m)
    q = nome.q
    with nome.ctx.workdps():
        stop = _tail_threshold(nome) + abs(m) ** 2 / 4 + 1
        s = mp.mpf(1)
        tp = _qpow(q, 1 + m)
        tm = _qpow(q, 1 - m)
        step_p = _qpow(q, 3 + m)
        step_m = _qpow(q, 3 - m)
        q2 = _qpow(q, 2)
        n = 1
        while True:
            s += tp + tm
            if n * n - abs(m) * n > stop and n >= 2:
                break
            tp *= step_p
            tm *= step_m
            step_p *= q2
            step_m *= q2
            n += 1
        return +s


def eta_paper(multiplier, nome: Nome) -> HPReal:
    """prod_{n>=1} (1 - q^(m*n)) for a positive rational multiplier m.

    This is the prefactor-free eta product used throughout the toolkit;
    no q^(1/24) factor is attached.
    """
    m = Fraction(multiplier)
    if m <= 0:
        raise DomainError(f"multiplier must be positive, got {m}")
    q = nome.q
    with nome.ctx.workdps():
        stop = _tail_threshold(nome)
        qm = _qpow(q, m)
        t = qm
        prod = mp.mpf(1)
        e = Fraction(m)
        while e <= stop or e == m:
            prod *= 1 - t
            t *= qm
            e += m
        prod *= 1 - t
        return +prod


def m_series(c: HPReal, nome_power: HPReal, ctx: PrecisionContext) -> HPReal:
    """sum_{n>=0} c^n * w^(n(n+1)/2) for |w| < 1.

    c may exceed 1 in magnitude (the quadratic power of w eventually
    dominates); summation stops once terms are decreasing and below the
    tail threshold.
    """
    with ctx.workdps():
        w = mp.mpf(nome_power)
        if abs(w) >= 1:
            raise DomainError("the quadratic base must satisfy |w| < 1")
        c = mp.mpf(c)
        eps = mp.mpf(10) ** -(ctx.digits + ctx.guard)
        s = mp.mpf(1)
        term = mp.mpf(1)
        wn = mp.mpf(1)
        n = 0
        while True:
            wn *= w                      # w^(n+1)
            term *= c * wn               # c^(n+1) w^((n+1)(n+2)/2)
            s += term
            n += 1
            if abs(term) < eps and abs(c * wn * w) < 1:
                break
            if n > 10_000_000:
                raise DomainError("series failed to converge")
        return +s


def agile_via_triangular(spec: AgileSpec, nome: Nome) -> HPReal:
    """[a,p;q] assembled from the triangular-number series:
    (M(-q^-a, q^p) - q^a M(-q^a, q^p)) / eta(p)."""
    a, p = spec.a, spec.p
    ctx = nome.ctx
    with ctx.workdps():
        q = nome.q
        qa = _qpow(q, a)
        qp = _qpow(q, p)
        num = m_series(-1 / qa, qp, ctx) - qa * m_series(-qa, qp, ctx)
        return +(num / eta_paper(p, nome))


def tau_star(a, p, nome: Nome) -> HPReal:
    """[a,p;q^2]* / [a,p;q]* for positive rational a, p (a need not lie
    in (0,p): the ratio repeats when a is shifted by multiples of p or
    mirrored, which is what makes it worth exposing unrestricted)."""
    a, p = Fraction(a), Fraction(p)
    if a <= 0 or p <= 0:
        raise DomainError("a and p must be positive")
    nome2 = nome.scaled(Fraction(2))
    with nome.ctx.workdps():
        e = star_exponent(a, p)
        top = _qpow(nome2.q, e) * _agile_raw(a, p, nome2)
        bot = _qpow(nome.q, e) * _agile_raw(a, p, nome)
        return +(top / bot)


# ---------------------------------------------------------------------------
# exact q-expansions
# ---------------------------------------------------------------------------

def agile_qexpansion(a: int, p: int, order: int) -> FormalSeries:
    """Exact coefficients of [a,p;q] up to q**order (integer 0 < a < p)."""
    if order < 1:
        raise OrderError("order must be >= 1")
    a, p = int(a), int(p)
    if not (0 < a < p):
        raise DomainError(f"need integers 0 < a < p, got a={a}, p={p}")
    exps = []
    for n in range(0, order // p + 1):
        for e in (p * n + a, p * n + p - a):
            if e <= order:
                exps.append(e)
    return one_minus_power_product(exps, order)


def eta_qexpansion(multiplier: int, order: int) -> FormalSeries:
    """Exact coefficients of prod (1 - q^(m*n)) up to q**order."""
    m = int(multiplier)
    if m < 1 or order < 1:
        raise OrderError("need multiplier >= 1 and order >= 1")
    return one_minus_power_product(range(m, order + 1, m), order)


def theta_qexpansion(p: int, j: int, order: int) -> FormalSeries:
    """Exact expansion of sum (-1)^n q^((p n^2 + (p-2j) n)/2).

    The exponent p*n*(n+1)/2 - j*n is an integer for all n, so this is an
    honest power series; it equals eta(p) * [j,p;q] coefficientwise.
    """
    if order < 1:
        raise OrderError("order must be >= 1")
    p, j = int(p), int(j)
    terms: dict[int, int] = {0: 1}
    n = 1
    while True:
        ep = (p * n * n + (p - 2 * j) * n) // 2
        em = (p * n * n - (p - 2 * j) * n) // 2
        if min(ep, em) > order:
            break
        sign = -1 if n % 2 else 1
        for e in (ep, em):
            if e <= order:
                terms[e] = terms.get(e, 0) + sign
        n += 1
    return FormalSeries.from_terms(terms, order)
