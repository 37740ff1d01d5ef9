"""Moebius inversion of Taylor coefficients and periodic representations.

Given the Taylor coefficients c_n = f^(n)(0)/n! of a function f with
f(0) = 0, the inverted sequence

    X(n) = (1/n) * sum_{d|n} mu(n/d) * d * c_d

satisfies exp(-f(q)) = prod (1 - q^n)^X(n).  When X is periodic with
period T, mirror-symmetric inside each period ("catoptric",
a_j = a_{T-j}) and a_T = 0, the product collapses to finitely many
two-sided q-products [j,T;q] and, equivalently, to a quotient of theta
sums by an eta power; q^A exp(-f(q)) is then an algebraic number at
q = exp(-pi sqrt(r)) for rational r, with the exact rational exponent A
computed here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import mpmath as mp

from .errors import DomainError, InsufficientData
from .precision import HPReal, to_mpf
from .qengine import (
    AgileSpec,
    Nome,
    ThetaSpec,
    agile,
    eta_paper,
    star_exponent,
    theta_general,
    _qpow,
)

# ---------------------------------------------------------------------------
# arithmetic functions
# ---------------------------------------------------------------------------


def moebius_mu(n: int) -> int:
    """The Moebius function: 0 unless n is squarefree, else (-1)^(#primes)."""
    n = int(n)
    if n < 1:
        raise DomainError(f"mu is defined for n >= 1, got {n}")
    if n == 1:
        return 1
    count = 0
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            count += 1
        d += 1 if d == 2 else 2
    if n > 1:
        count += 1
    return -1 if count % 2 else 1


def _jacobi_odd(n: int, k: int) -> int:
    # standard iterative Jacobi symbol, k odd positive
    n %= k
    t = 1
    while n:
        while n % 2 == 0:
            n //= 2
            if k % 8 in (3, 5):
                t = -t
        n, k = k, n
        if n % 4 == 3 and k % 4 == 3:
            t = -t
        n %= k
    return t if k == 1 else 0


def jacobi_symbol(n: int, G: int) -> int:
    """The quadratic-residue symbol (n/G), completely multiplicative in n.

    G may be even provided 4 | G (for G = 2*odd the symbol has no
    consistent completely-multiplicative extension, hence DomainError);
    the factor for each 2 is 0 on even n and (+1,-1,-1,+1) on
    n = 1,3,5,7 mod 8.
    """
    n, G = int(n), int(G)
    if G < 1:
        raise DomainError(f"modulus must be positive, got {G}")
    m2 = 0
    odd = G
    while odd % 2 == 0:
        odd //= 2
        m2 += 1
    if m2 == 1:
        raise DomainError(f"modulus {G} has exactly one factor of 2")
    if G == 1:
        return 1
    val = 1
    if m2:
        if n % 2 == 0:
            return 0
        two = 1 if n % 8 in (1, 7) else -1
        val = two ** m2
    if odd > 1:
        if n <= 0:
            raise DomainError("n must be positive")
        val *= _jacobi_odd(n, odd)
    return val


@dataclass(frozen=True)
class JacobiCharacter:
    """X(n) = (n/G) for an admissible modulus G.

    Admissible means the associated character is even, which is exactly
    what makes the sequence mirror-symmetric in each period: the power of
    2 in G must not be exactly 1, and the odd part must be 1 mod 4.
    """

    modulus: int

    def __post_init__(self):
        G = int(self.modulus)
        object.__setattr__(self, "modulus", G)
        if G < 1:
            raise DomainError(f"modulus must be positive, got {G}")
        odd = G
        m2 = 0
        while odd % 2 == 0:
            odd //= 2
            m2 += 1
        if m2 == 1:
            raise DomainError(f"modulus {G}: the power of 2 must not be exactly 1")
        if odd % 4 == 3:
            raise DomainError(
                f"modulus {G}: odd part {odd} is 3 mod 4, the symbol is not mirror-symmetric"
            )

    def value(self, n: int) -> int:
        return jacobi_symbol(n, self.modulus)

    def values(self, upto: int) -> list[int]:
        return [self.value(n) for n in range(1, upto + 1)]

    def as_periodic(self, max_period: Optional[int] = None) -> "PeriodicCoeffs":
        """Detect the (catoptric) period of the symbol sequence."""
        if self.modulus == 1:
            raise DomainError("the trivial character has no vanishing period point")
        mp_ = max_period or self.modulus
        pc = detect_period([Fraction(v) for v in self.values(3 * mp_)], mp_)
        if pc is None:
            raise DomainError(f"symbol mod {self.modulus} did not present as catoptric")
        return pc


# ---------------------------------------------------------------------------
# Taylor input and inversion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TaylorInput:
    """Exact Taylor coefficients coeffs[n-1] = f^(n)(0)/n!, n = 1..N."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coeffs)
        if not cs:
            raise DomainError("need at least one coefficient")
        object.__setattr__(self, "coeffs", cs)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @classmethod
    def from_json(cls, text: str) -> "TaylorInput":
        """Parse {"coeffs": ["1/1", "1/2", ...]} (exact rational strings,
        1-based)."""
        doc = json.loads(text)
        return cls(tuple(Fraction(s) for s in doc["coeffs"]))

    def to_json(self) -> str:
        return json.dumps({"coeffs": [str(c) for c in self.coeffs]})


def extract_X(inp: TaylorInput) -> list[Fraction]:
    """Moebius-invert the Taylor coefficients: the returned list has
    entry n-1 equal to X(n) = (1/n) sum_{d|n} mu(n/d) d c_d."""
    N = inp.order
    cs = inp.coeffs
    out = []
    for n in range(1, N + 1):
        s = Fraction(0)
        for d in range(1, n + 1):
            if n % d == 0:
                m = moebius_mu(n // d)
                if m:
                    s += m * d * cs[d - 1]
        out.append(s / n)
    return out


def coeffs_from_X(X: Sequence[Fraction], order: int) -> list[Fraction]:
    """Inverse direction: c_n = (1/n) sum_{d|n} d X(d) (X may be shorter
    than order only if periodic; here X must cover 1..order)."""
    out = []
    for n in range(1, order + 1):
        s = Fraction(0)
        for d in range(1, n + 1):
            if n % d == 0:
                s += d * Fraction(X[d - 1])
        out.append(s / n)
    return out


# ---------------------------------------------------------------------------
# periodicity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PeriodicCoeffs:
    """A detected period-T, catoptric, rational exponent sequence."""

    period: int
    values: tuple  # a_1 .. a_T, exact Fractions, a_T = 0
    catoptric: bool
    A: Fraction

    def value(self, n: int) -> Fraction:
        return self.values[(n - 1) % self.period]


def _weights(period: int, values: Sequence[Fraction]):
    """Representation weights: a_j on [j,T] for j < T/2, and a_{T/2}/2 on
    the self-mirrored middle product when T is even (its two factor
    families coincide, so it enters with half the exponent)."""
    T = period
    out = []
    for j in range(1, (T - 1) // 2 + 1):
        if values[j - 1]:
            out.append((j, Fraction(values[j - 1])))
    if T % 2 == 0 and values[T // 2 - 1]:
        out.append((T // 2, Fraction(values[T // 2 - 1]) / 2))
    return out


def exponent_A(pc: PeriodicCoeffs) -> Fraction:
    """The exact rational exponent A with q^A exp(-f(q)) algebraic:
    A = sum_j (-j/2 + j^2/(2T) + T/12) a_j over the representation
    weights."""
    if not pc.catoptric:
        raise DomainError("exponent formula requires a catoptric sequence")
    T = pc.period
    return sum((star_exponent(j, T) * w for j, w in _weights(T, pc.values)),
               Fraction(0))


def detect_period(X: Sequence, max_period: int) -> Optional[PeriodicCoeffs]:
    """Smallest T <= max_period such that X repeats with period T,
    X(T) = 0 and the values mirror inside the period; None otherwise.

    Needs at least 3*max_period observed values (two full periods to
    confirm, one of margin).
    """
    xs = [Fraction(v) for v in X]
    if max_period < 1:
        raise DomainError("max_period must be >= 1")
    if len(xs) < 3 * max_period:
        raise InsufficientData(
            f"need at least {3 * max_period} values to scan periods up to {max_period}"
        )
    for T in range(1, max_period + 1):
        if any(xs[k + T] != xs[k] for k in range(len(xs) - T)):
            continue
        values = tuple(xs[:T])
        if values[T - 1] != 0:
            continue
        if any(values[j - 1] != values[T - j - 1] for j in range(1, T)):
            continue
        pc = PeriodicCoeffs(T, values, True, Fraction(0))
        return PeriodicCoeffs(T, values, True, exponent_A(pc))
    return None


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------


def represent_product(pc: PeriodicCoeffs) -> list[tuple[AgileSpec, Fraction]]:
    """exp(-f) as a finite product of two-sided q-products:
    prod [j,T;q]^(w_j) over the representation weights."""
    if not pc.catoptric:
        raise DomainError("product representation requires a catoptric sequence")
    return [(AgileSpec(Fraction(j), Fraction(pc.period)), w)
            for j, w in _weights(pc.period, pc.values)]


@dataclass(frozen=True)
class ThetaRepresentation:
    period: int
    eta_exponent: Fraction  # exponent on eta(T)
    factors: tuple          # ((ThetaSpec, weight), ...)


def represent_theta(pc: PeriodicCoeffs) -> ThetaRepresentation:
    """exp(-f) = eta(T)^(-sum w_j) * prod theta(T/2, (T-2j)/2; q)^(w_j)."""
    if not pc.catoptric:
        raise DomainError("theta representation requires a catoptric sequence")
    T = pc.period
    ws = _weights(T, pc.values)
    factors = tuple(
        (ThetaSpec(Fraction(T, 2), Fraction(T - 2 * j, 2)), w) for j, w in ws
    )
    return ThetaRepresentation(T, -sum((w for _, w in ws), Fraction(0)), factors)


def product_value(pc: PeriodicCoeffs, nome: Nome) -> HPReal:
    """Numeric exp(-f(q)) through the q-product representation."""
    with nome.ctx.workdps():
        acc = mp.mpf(1)
        for spec, w in represent_product(pc):
            acc *= mp.power(agile(spec, nome), to_mpf(w))
        return +acc


def theta_value(pc: PeriodicCoeffs, nome: Nome) -> HPReal:
    """Numeric exp(-f(q)) through the eta/theta representation."""
    rep = represent_theta(pc)
    with nome.ctx.workdps():
        acc = mp.power(eta_paper(rep.period, nome), to_mpf(rep.eta_exponent))
        for spec, w in rep.factors:
            acc *= mp.power(theta_general(spec, nome), to_mpf(w))
        return +acc


def normalized_value(pc: PeriodicCoeffs, nome: Nome) -> HPReal:
    """q^A exp(-f(q)) - the quantity that is algebraic at rational r."""
    with nome.ctx.workdps():
        return +(_qpow(nome.q, pc.A) * product_value(pc, nome))


# ---------------------------------------------------------------------------
# Lambert series and log-derivatives
# ---------------------------------------------------------------------------

XLike = Union[PeriodicCoeffs, JacobiCharacter, Callable[[int], Fraction]]


def _x_callable(X: XLike) -> Callable[[int], Fraction]:
    if isinstance(X, PeriodicCoeffs):
        return X.value
    if isinstance(X, JacobiCharacter):
        return lambda n: Fraction(X.value(n))
    return lambda n: Fraction(X(n))


def lambert_series(X: XLike, nome: Nome) -> HPReal:
    """sum_{n>=1} n X(n) q^n / (1 - q^n)."""
    xf = _x_callable(X)
    ctx = nome.ctx
    with ctx.workdps():
        q = nome.q
        eps = mp.mpf(10) ** -(ctx.digits + ctx.guard)
        one_minus_q = 1 - q
        s = mp.mpf(0)
        qn = mp.mpf(1)
        n = 1
        while True:
            qn *= q
            if n * qn / one_minus_q < eps and n > 2:
                break
            x = xf(n)
            if x:
                s += to_mpf(x) * n * qn / (1 - qn)
            n += 1
        return +s


def eta_qdlog(multiplier: int, nome: Nome) -> HPReal:
    """q d/dq log prod(1 - q^(m n))  =  -sum m n q^(mn)/(1-q^(mn))."""
    m = int(multiplier)
    ctx = nome.ctx
    with ctx.workdps():
        q = nome.q
        qm = _qpow(q, Fraction(m))
        eps = mp.mpf(10) ** -(ctx.digits + ctx.guard)
        s = mp.mpf(0)
        t = mp.mpf(1)
        n = 1
        while True:
            t *= qm
            term = m * n * t / (1 - t)
            s -= term
            if term < eps and n > 2:
                break
            n += 1
        return +s


def theta_qdlog(spec: ThetaSpec, nome: Nome) -> HPReal:
    """q (d theta/dq) / theta for the alternating theta sum."""
    a, b = spec.a, spec.b
    ctx = nome.ctx
    with ctx.workdps():
        q = nome.q
        stop = int(mp.ceil(mp.mpf(ctx.digits + ctx.guard) / (-mp.log10(q))))
        num = mp.mpf(0)
        den = mp.mpf(1)
        n = 1
        while True:
            ep = a * n * n + b * n
            em = a * n * n - b * n
            tp = _qpow(q, ep)
            tm = _qpow(q, em)
            sign = -1 if n % 2 else 1
            num += sign * (to_mpf(ep) * tp + to_mpf(em) * tm)
            den += sign * (tp + tm)
            if min(ep, em) > stop and n >= 2:
                break
            n += 1
        return +(num / den)


def logderiv_representation(pc: PeriodicCoeffs, nome: Nome) -> HPReal:
    """-q d/dq log( eta(T)^(-S) prod theta^(w_j) ), each factor
    differentiated termwise; equals lambert_series(pc, nome)."""
    if not pc.catoptric:
        raise DomainError("log-derivative form requires a catoptric sequence")
    T = pc.period
    ws = _weights(T, pc.values)
    S = sum((w for _, w in ws), Fraction(0))
    with nome.ctx.workdps():
        acc = to_mpf(S) * eta_qdlog(T, nome)
        for j, w in ws:
            spec = ThetaSpec(Fraction(T, 2), Fraction(T - 2 * j, 2))
            acc -= to_mpf(w) * theta_qdlog(spec, nome)
        return +acc


# ---------------------------------------------------------------------------
# perfect-square character identity (exact, coefficientwise)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesIdentityReport:
    identical: bool
    order: int
    first_mismatch: Optional[int] = None


def square_character_eta_identity(g: int, order: int) -> SeriesIdentityReport:
    """For a perfect square g: compare prod (1-q^n)^((n/g)) against the
    inclusion-exclusion eta quotient prod_{d | rad(g)} eta(d)^mu(d),
    coefficientwise to the given order."""
    from math import isqrt

    from .series import exponent_product
    from .qengine import eta_qexpansion

    g = int(g)
    if isqrt(g) ** 2 != g:
        raise DomainError(f"g must be a perfect square, got {g}")
    char = JacobiCharacter(g)
    lhs = exponent_product(lambda n: char.value(n), order)

    # squarefree divisors of the radical of g
    primes = []
    m = g
    d = 2
    while d * d <= m:
        if m % d == 0:
            primes.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.append(m)
    rhs = None
    for mask in range(1 << len(primes)):
        dd = 1
        bits = 0
        for i, p in enumerate(primes):
            if mask >> i & 1:
                dd *= p
                bits += 1
        s = eta_qexpansion(dd, order)
        s = s if bits % 2 == 0 else s.inverse()
        rhs = s if rhs is None else rhs * s
    for n in range(order + 1):
        if lhs[n] != rhs[n]:
            return SeriesIdentityReport(False, order, n)
    return SeriesIdentityReport(True, order)
