"""Rogers-Ramanujan continued fraction, degree-5 modular relations,
Klein's j from the continued fraction, the sextic bridge and the
integral identities tying the bridge value to the incomplete beta
function of the singular modulus.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import BranchError, ConvergenceError, DomainError, SingularError
from .hpcore import integrate
from .precision import HPReal, PrecisionContext, to_mpf
from .qengine import (
    AgileSpec,
    Nome,
    ThetaSpec,
    agile,
    eta_paper,
    make_nome,
    theta2,
    theta3,
    theta_general,
    _qpow,
)
from .elliptic import j_invariant, singular_modulus, ellint_K, elliptic_alpha, multiplier
from .moebius import eta_qdlog, theta_qdlog


@dataclass(frozen=True)
class Residual:
    """Two independently computed sides of one identity."""

    lhs: HPReal
    rhs: HPReal
    note: str = ""

    @property
    def diff(self) -> HPReal:
        return abs(self.lhs - self.rhs)


# ---------------------------------------------------------------------------
# Rogers-Ramanujan continued fraction
# ---------------------------------------------------------------------------

def rrcf(nome: Nome, method: str = "product") -> HPReal:
    """R(q) = q^(1/5) prod (1-q^n)^((n/5)), equal to the continued
    fraction q^(1/5)/(1 + q/(1 + q^2/(1 + ...))).

    method="product" uses the quotient of two-sided q-products;
    method="continued_fraction" evaluates the fraction by backward
    recurrence, deepening until two evaluations agree.
    """
    ctx = nome.ctx
    if method == "product":
        with ctx.workdps():
            val = (_qpow(nome.q, Fraction(1, 5))
                   * agile(AgileSpec(1, 5), nome)
                   / agile(AgileSpec(2, 5), nome))
            return +val
    if method == "continued_fraction":
        with ctx.workdps():
            q = nome.q
            eps = ctx.eps_tail
            depth = int(mp.ceil(mp.mpf(ctx.digits + ctx.guard) / (-mp.log10(q)))) + 4
            prev = None
            for _ in range(6):
                t = mp.mpf(1)
                for k in range(depth, 0, -1):
                    t = 1 + _qpow(q, Fraction(k)) / t
                val = _qpow(q, Fraction(1, 5)) / t
                if prev is not None and abs(val - prev) < eps:
                    return +val
                prev = val
                depth += 8
            raise ConvergenceError("continued fraction failed to stabilise")
    raise DomainError(f"unknown rrcf method {method!r}")


def klein_j_from_R(R, ctx: PrecisionContext) -> HPReal:
    """j from the continued-fraction value via Klein's relation
    -(R^20 - 228 R^15 + 494 R^10 + 228 R^5 + 1)^3 / (R^5 (R^10 + 11 R^5 - 1)^5),
    where R is the continued fraction at the squared nome."""
    with ctx.workdps():
        R = mp.mpf(R)
        if not (0 < R < 1):
            raise DomainError(f"R must lie in (0,1), got {R}")
        r5 = R ** 5
        den_core = r5 * r5 + 11 * r5 - 1
        if abs(den_core) < mp.mpf(10) ** -(ctx.digits - 2):
            raise SingularError("denominator R^10 + 11 R^5 - 1 vanishes")
        num = (r5 ** 4 - 228 * r5 ** 3 + 494 * r5 ** 2 + 228 * r5 + 1) ** 3
        return +(-num / (r5 * den_core ** 5))


# ---------------------------------------------------------------------------
# degree-5 modular relations
# ---------------------------------------------------------------------------

def modular5_check(nome: Nome) -> tuple[Residual, Residual]:
    """Residuals of the two degree-5 modular relations between k_r and
    k_{25r}, both moduli taken from theta quotients (at q and q^5).

    The sextic form vanishes with u = k_{25r}^(1/4), v = k_r^(1/4);
    (the printed orientation with u and v exchanged does not).
    """
    ctx = nome.ctx
    with ctx.workdps():
        nome5 = nome.scaled(Fraction(5))
        k = theta2(nome) ** 2 / theta3(nome) ** 2
        k25 = theta2(nome5) ** 2 / theta3(nome5) ** 2
        kp = mp.sqrt(1 - k * k)
        kp25 = mp.sqrt(1 - k25 * k25)
        lhs3 = (k * k25 + kp * kp25
                + 2 ** (mp.mpf(5) / 3) * (k * k25 * kp * kp25) ** (mp.mpf(1) / 3))
        first = Residual(+lhs3, mp.mpf(1), note="product-of-moduli relation")
        u = k25 ** (mp.mpf(1) / 4)
        v = k ** (mp.mpf(1) / 4)
        lhs4 = (u ** 6 - v ** 6 + 5 * u * u * v * v * (u * u - v * v)
                + 4 * u * v * (1 - u ** 4 * v ** 4))
        second = Residual(+lhs4, mp.mpf(0), note="depressed sextic form, u=k_25r^(1/4)")
        return first, second


def ramanujan_modular5_check(nome: Nome) -> Residual:
    """Residual of R(q^(1/5))^5 against the degree-5 rational transform
    of R(q)."""
    ctx = nome.ctx
    with ctx.workdps():
        R = rrcf(nome)
        fifth = nome.scaled(Fraction(1, 5))
        lhs = rrcf(fifth) ** 5
        rhs = R * (1 - 2 * R + 4 * R ** 2 - 3 * R ** 3 + R ** 4) \
            / (1 + 3 * R + 4 * R ** 2 + 2 * R ** 3 + R ** 4)
        return Residual(+lhs, +rhs)


# ---------------------------------------------------------------------------
# the sextic bridge
# ---------------------------------------------------------------------------

def sextic_theta(nome: Nome, via: str = "theta") -> HPReal:
    """theta(5,1;q)^6 theta(5,3;q)^6 / (q^2 eta(10)^12); equal to
    R(q^2)^-5 - 11 - R(q^2)^5 (via="rrcf" evaluates that form)."""
    ctx = nome.ctx
    with ctx.workdps():
        if via == "theta":
            t1 = theta_general(ThetaSpec(5, 1), nome)
            t3 = theta_general(ThetaSpec(5, 3), nome)
            den = _qpow(nome.q, Fraction(2)) * eta_paper(10, nome) ** 12
            return +(t1 ** 6 * t3 ** 6 / den)
        if via == "rrcf":
            R = rrcf(nome.scaled(Fraction(2)))
            return +(R ** -5 - 11 - R ** 5)
        raise DomainError(f"unknown route {via!r}")


@dataclass(frozen=True)
class SexticYResult:
    """Outcome of testing 3125 + 250 Y^6 + Y^12 = j^(1/3) Y^10 with
    Y^6 = q^-1 (eta(1)/eta(5))^6 against several candidate j-arguments."""

    y6: HPReal
    residuals: dict
    satisfied: tuple
    tolerance: HPReal


def sextic_Y_check(nome: Nome) -> SexticYResult:
    """Try the j-argument candidates {r, 4r, r/4}.  The quarter argument
    satisfies the relation identically; at special r several arguments
    can share the same j value, so callers should treat the outcome as a
    measurement rather than a uniqueness assertion."""
    ctx = nome.ctx
    if not isinstance(nome.r, Fraction):
        raise DomainError("the candidate scan needs a rational r")
    with ctx.workdps():
        y6 = eta_paper(1, nome) ** 6 / (eta_paper(5, nome) ** 6 * nome.q)
        tol = ctx.eps_check
        residuals = {}
        satisfied = []
        for label, arg in (("r", nome.r), ("4r", 4 * nome.r), ("r/4", nome.r / 4)):
            jv = j_invariant(arg, ctx)
            resid = abs(3125 + 250 * y6 + y6 ** 2
                        - mp.cbrt(jv) * y6 ** (mp.mpf(5) / 3))
            residuals[label] = +resid
            if resid < tol:
                satisfied.append(label)
        return SexticYResult(+y6, residuals, tuple(satisfied), +tol)


@dataclass(frozen=True)
class SexticInstance:
    """Coefficients of  b^2/(20a) + b Y + a Y^2 = c Y^(5/3)."""

    a: HPReal
    b: HPReal
    c: HPReal

    def j_target(self, ctx: PrecisionContext) -> HPReal:
        with ctx.workdps():
            a, b, c = mp.mpf(self.a), mp.mpf(self.b), mp.mpf(self.c)
            if a == 0 or b == 0:
                raise DomainError("need a != 0 and b != 0")
            return +(250 * c ** 3 / (a * a * b))


def solve_sextic(inst: SexticInstance, ctx: PrecisionContext) -> tuple[HPReal, Residual]:
    """Solve the sextic on the principal branch: find r >= 1 with
    j(r) = 250 c^3/(a^2 b), then Y = b/(250a) (R(q^2)^-5 - 11 - R(q^2)^5)
    at q = exp(-pi sqrt(r)).  Returns (Y, residual-of-the-sextic)."""
    with ctx.workdps():
        target = inst.j_target(ctx)
        if not target >= 1728:
            raise BranchError(
                f"j target {mp.nstr(target, 10)} below 1728; outside the principal branch"
            )
        target_log = mp.log(target)

        def g(r):
            return mp.log(j_invariant(r, ctx)) - target_log

        lo = mp.mpf(1)
        if g(lo) > mp.mpf(10) ** -(ctx.digits - ctx.guard):
            raise BranchError("j target below the branch minimum")
        hi = mp.mpf(2)
        while g(hi) < 0:
            lo = hi
            hi *= 2
            if hi > 2 ** 40:
                raise ConvergenceError("failed to bracket the j target")
        glo, ghi = g(lo), g(hi)
        # bisection to ~10 digits, then secant
        for _ in range(40):
            mid = (lo + hi) / 2
            gm = g(mid)
            if gm < 0:
                lo, glo = mid, gm
            else:
                hi, ghi = mid, gm
        x0, x1, f0, f1 = lo, hi, glo, ghi
        for _ in range(int(mp.ceil(mp.log(ctx.dps, 2))) + 12):
            if f1 == f0:
                break
            x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
            x0, f0, x1 = x1, f1, x2
            f1 = g(x2)
            if abs(x1 - x0) < abs(x1) * mp.mpf(10) ** (-ctx.dps + 2):
                break
        r = x1
        nome = make_nome(+r, ctx)
        a, b, c = mp.mpf(inst.a), mp.mpf(inst.b), mp.mpf(inst.c)
        Y = b / (250 * a) * sextic_theta(nome, via="rrcf")
        resid = Residual(
            +(b * b / (20 * a) + b * Y + a * Y * Y),
            +(c * Y ** (mp.mpf(5) / 3)),
            note=f"sextic at r={mp.nstr(r, 20)}",
        )
        return +Y, resid


# ---------------------------------------------------------------------------
# incomplete beta and the integral identities
# ---------------------------------------------------------------------------

def incomplete_beta(x, p, q, ctx: PrecisionContext) -> HPReal:
    """B(x; p, q) = int_0^x t^(p-1) (1-t)^(q-1) dt for rational p, q > 0
    and 0 <= x <= 1, by quadrature with endpoint power substitutions."""
    p, q = Fraction(p), Fraction(q)
    if p <= 0 or q <= 0:
        raise DomainError("p and q must be positive")
    with ctx.workdps():
        x = to_mpf(x) if isinstance(x, (Fraction, int, str)) else mp.mpf(x)
        if x < 0 or x > 1:
            raise DomainError(f"x must lie in [0,1], got {x}")
        if x == 0:
            return mp.mpf(0)
        pm, qm = to_mpf(p), to_mpf(q)

        def f(t):
            return t ** (pm - 1) * (1 - t) ** (qm - 1)

        lo_power = None
        if p < 1:
            k = 1
            while k * p < 1:
                k += 1
            lo_power = max(k, p.denominator)
        hi_power = None
        f_from_hi = None
        if x == 1 and q < 1:
            m = 1
            while m * q < 1:
                m += 1
            hi_power = max(m, q.denominator)
            # near t = 1 the integrand must be fed the offset s = 1 - t
            # directly, or the complement cancels to zero
            f_from_hi = lambda s: (1 - s) ** (pm - 1) * s ** (qm - 1)
        return integrate(f, 0, x, ctx, lo_power=lo_power, hi_power=hi_power,
                         f_from_hi=f_from_hi)


def theorem3_check(r, ctx: PrecisionContext) -> Residual:
    """The inverse-nome style identity: one fifth of the tail integral
    int_theta^inf dt / (t^(1/6) sqrt(125 + 22t + t^2)) against
    B(k_{4r}^2; 1/6, 2/3) / (5 * 4^(1/3)), theta being the sextic bridge
    value at q = exp(-pi sqrt(r)).

    The beta argument is the *square* of the singular modulus at 4r; the
    unsquared argument fails by O(0.1).
    """
    r = Fraction(r)
    with ctx.workdps():
        nome = make_nome(r, ctx)
        th = sextic_theta(nome)

        def f(t):
            return 1 / (t ** (mp.mpf(1) / 6) * mp.sqrt(125 + 22 * t + t * t))

        lhs = integrate(f, th, None, ctx, decay=Fraction(7, 6)) / 5
        k4r = singular_modulus(4 * r, ctx)
        rhs = incomplete_beta(k4r * k4r, Fraction(1, 6), Fraction(2, 3), ctx) \
            / (5 * mp.cbrt(mp.mpf(4)))
        return Residual(+lhs, +rhs)


def eq43_derivative_check(r, ctx: PrecisionContext) -> Residual:
    """Central difference of r -> B(k_r^2; 1/6, 2/3) against the closed
    form -(pi/2) 4^(1/3) q^(1/6) eta(1)^4 / sqrt(r); the step is
    10^-(digits/4), so agreement is to roughly half the working digits."""
    r = Fraction(r)
    with ctx.workdps():
        h = mp.mpf(10) ** -(ctx.digits // 4)
        rm = to_mpf(r)

        def B(rv):
            k = singular_modulus(+rv, ctx)
            return incomplete_beta(k * k, Fraction(1, 6), Fraction(2, 3), ctx)

        lhs = (B(rm + h) - B(rm - h)) / (2 * h)
        nome = make_nome(r, ctx)
        rhs = -(mp.pi / 2) * mp.cbrt(mp.mpf(4)) * _qpow(nome.q, Fraction(1, 6)) \
            * eta_paper(1, nome) ** 4 / mp.sqrt(rm)
        return Residual(+lhs, +rhs, note=f"central difference, h=1e-{ctx.digits // 4}")


def theorem4_check(p: int, r, ctx: PrecisionContext) -> Residual:
    """Eisenstein-type identity for prime p: the normalised log-derivative
    of eta(p)^(-(p-1)/2) prod_j theta(p/2,(p-2j)/2) against the alpha /
    multiplier combination at r and p^2 r.

    Evaluated literally; for p = 2 the product over j is empty and the
    literal form fails (callers record rather than assert that case).
    """
    p = int(p)
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise DomainError(f"p must be prime, got {p}")
    r = Fraction(r)
    with ctx.workdps():
        nome = make_nome(r, ctx)
        sr = mp.sqrt(to_mpf(r))
        qd = -to_mpf(Fraction(p - 1, 2)) * eta_qdlog(p, nome)
        for j in range(1, (p - 1) // 2 + 1):
            qd += theta_qdlog(ThetaSpec(Fraction(p, 2), Fraction(p - 2 * j, 2)), nome)
        k = singular_modulus(r, ctx)
        K = ellint_K(k, ctx)
        lhs = mp.pi ** 2 * sr / (4 * K * K) * (-1 + p - 24 * qd)
        kp2 = singular_modulus(p * p * r, ctx)
        m = multiplier(r, p, ctx)
        rhs = (6 * elliptic_alpha(r, ctx) - sr * (1 + k * k)
               + m * m * (-6 * elliptic_alpha(p * p * r, ctx)
                          + p * sr * (1 + kp2 * kp2)))
        return Residual(+lhs, +rhs)
