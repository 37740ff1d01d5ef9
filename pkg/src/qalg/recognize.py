"""Algebraic-number recognition via exact integer lattice reduction.

Given a value known to hundreds of digits, build the knapsack lattice on
(1, x, ..., x^d) with the powers scaled to integers, LLL-reduce it with
exact integer arithmetic (delta = 0.99), and read candidate integer
relations off the short vectors.  A candidate is only reported as
*recognized* after a two-tier residual test: small at working precision,
and - when the value can be recomputed - still consistently small at
doubled precision.  Degrees are scanned in ascending order, so the
returned polynomial has minimal degree among the passing candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath as mp

from .errors import DegenerateBasis, DomainError, InsufficientPrecision
from .precision import HPReal, PrecisionContext, to_mpf
from .qengine import AgileSpec, ThetaSpec, agile_star, make_nome, theta_general
from .elliptic import inverse_singular_modulus, singular_modulus
from .moebius import detect_period, normalized_value
from .modular import Residual, rrcf


# ---------------------------------------------------------------------------
# exact integer LLL
# ---------------------------------------------------------------------------

def lattice_reduce(basis: Sequence[Sequence[int]],
                   delta: Fraction = Fraction(99, 100)) -> list[list[int]]:
    """LLL-reduce an integer basis (rows), entirely in integer arithmetic.

    Uses the integral Gram-Schmidt bookkeeping d_i, lambda_{i,j}; the
    Lovasz test for delta = num/den is
    den*d[k+1]*d[k-1] < num*d[k]^2 - den*lambda^2.
    Raises DegenerateBasis on linearly dependent rows.
    """
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise DomainError("delta must lie in (1/4, 1)")
    num, den = delta.numerator, delta.denominator
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n == 0 or any(len(row) != len(b[0]) for row in b):
        raise DomainError("basis must be a non-empty rectangular matrix")
    if n == 1:
        if not any(b[0]):
            raise DegenerateBasis("zero row")
        return b

    d = [0] * (n + 1)
    d[0] = 1
    lam = [[0] * n for _ in range(n)]

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def reduce_row(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            bk, bl = b[k], b[l]
            for i in range(len(bk)):
                bk[i] -= q * bl[i]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap_rows(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lam_ = lam[k][k - 1]
        new_dk = (d[k - 1] * d[k + 1] + lam_ * lam_) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lam_ * t) // d[k]
            lam[i][k - 1] = (new_dk * t + lam_ * lam[i][k]) // d[k + 1]
        d[k] = new_dk

    kmax = 0
    d[1] = dot(b[0], b[0])
    if d[1] == 0:
        raise DegenerateBasis("zero row")
    k = 1
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise DegenerateBasis("rows are linearly dependent")
                    d[k + 1] = u
        while True:
            reduce_row(k, k - 1)
            if den * d[k + 1] * d[k - 1] < num * d[k] * d[k] - den * lam[k][k - 1] ** 2:
                swap_rows(k, kmax)
                k = max(1, k - 1)
            else:
                for l in range(k - 2, -1, -1):
                    reduce_row(k, l)
                k += 1
                break
    return b


# ---------------------------------------------------------------------------
# recognition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegerPolynomial:
    """Primitive integer polynomial c0 + c1 x + ... + cd x^d with
    positive leading coefficient."""

    coefficients: tuple

    def __post_init__(self):
        cs = [int(c) for c in self.coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise DomainError("the zero polynomial is not allowed")
        g = 0
        for c in cs:
            g = math.gcd(g, abs(c))
        if g > 1:
            cs = [c // g for c in cs]
        if cs[-1] < 0:
            cs = [-c for c in cs]
        object.__setattr__(self, "coefficients", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coefficients)

    def evaluate(self, x) -> HPReal:
        acc = mp.mpf(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def evaluate_exact(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coefficients):
            if not c:
                continue
            if i == 0:
                parts.append(f"{c}")
            elif i == 1:
                parts.append(f"{c}*x")
            else:
                parts.append(f"{c}*x^{i}")
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class RecognitionResult:
    poly: Optional[IntegerPolynomial]
    residual: Optional[HPReal]
    verified_residual: Optional[HPReal]
    digits_used: int
    status: str  # recognized | refuted-at-bounds | inconclusive
    provenance: str = ""

    def to_json_dict(self) -> dict:
        return {
            "poly": list(self.poly.coefficients) if self.poly else None,
            "residual": mp.nstr(self.residual, 8) if self.residual is not None else None,
            "verified_residual": (mp.nstr(self.verified_residual, 8)
                                  if self.verified_residual is not None else None),
            "status": self.status,
            "digits": self.digits_used,
            "provenance": self.provenance,
        }


def _mpf_to_fraction(x: HPReal) -> Fraction:
    # no mp.mpf() re-wrap here: that would round x to the *current*
    # working precision and silently discard its stored bits
    sign, man, exp, _ = x._mpf_
    man, exp = int(man), int(exp)  # the mantissa may be a gmpy2 mpz
    if man == 0:
        return Fraction(0)
    v = Fraction(man, 1) * (Fraction(2) ** exp)
    return -v if sign else v


def _candidate_rows(reduced: list[list[int]]):
    rows = [r for r in reduced if any(r[:-1])]
    rows.sort(key=lambda r: sum(c * c for c in r))
    return rows


def recognize(
    x,
    max_degree: int,
    height_digits: int,
    ctx: PrecisionContext,
    recompute: Optional[Callable[[PrecisionContext], HPReal]] = None,
    provenance: str = "",
) -> RecognitionResult:
    """Search for an integer polynomial of degree <= max_degree and
    coefficient height < 10^height_digits annihilating x.

    The lattice is scaled by 10^(digits - guard); a candidate passes at
    degree d only if |P(x)| < 10^-(digits - d*height_digits - guard), and
    is *recognized* only if the residual also survives the second tier:
    with a `recompute` callback the value is rebuilt at doubled precision
    and |P| must fall below 10^-(2*digits - d*height_digits - guard);
    without one, P is re-evaluated on x in exact rational arithmetic
    against the first-tier bound (guarding against evaluation round-off,
    not against short inputs - supply recompute when possible).
    """
    if max_degree < 1:
        raise DomainError("max_degree must be >= 1")
    if height_digits < 1:
        raise DomainError("height_digits must be >= 1")
    digits = ctx.digits
    needed = max_degree * height_digits + 2 * ctx.guard
    if digits < needed:
        raise InsufficientPrecision(
            f"recognition at degree {max_degree}, height 10^{height_digits} "
            f"needs at least {needed} working digits, have {digits}"
        )
    height_bound = 10 ** height_digits

    with ctx.workdps():
        xv = mp.mpf(x)
        if not mp.isfinite(xv):
            raise DomainError("value must be finite")
        scale = mp.mpf(10) ** (digits - ctx.guard)
        powers = [mp.mpf(1)]
        for _ in range(max_degree):
            powers.append(powers[-1] * xv)

        best = None
        for d in range(1, max_degree + 1):
            rows = []
            for i in range(d + 1):
                row = [0] * (d + 1) + [int(mp.nint(scale * powers[i]))]
                row[i] = 1
                rows.append(row)
            reduced = lattice_reduce(rows)
            tier1 = mp.mpf(10) ** -(digits - d * height_digits - ctx.guard)
            for row in _candidate_rows(reduced)[:3]:
                coeffs = row[:-1]
                if max(abs(c) for c in coeffs) >= height_bound:
                    continue
                try:
                    poly = IntegerPolynomial(tuple(coeffs))
                except DomainError:
                    continue
                resid = abs(poly.evaluate(xv))
                if resid < tier1:
                    best = (d, poly, resid, tier1)
                    break
            if best:
                break

        if best is None:
            return RecognitionResult(None, None, None, digits, "refuted-at-bounds",
                                     provenance)

    d, poly, resid, tier1 = best
    if recompute is not None:
        ctx2 = ctx.doubled()
        with ctx2.workdps():
            x2 = mp.mpf(recompute(ctx2))
            v = abs(poly.evaluate(x2))
            tier2 = mp.mpf(10) ** -(2 * digits - d * height_digits - ctx.guard)
            status = "recognized" if v < tier2 else "inconclusive"
    else:
        xq = _mpf_to_fraction(x)
        exact = poly.evaluate_exact(xq)
        with ctx.doubled().workdps():
            v = abs(to_mpf(exact.numerator) / to_mpf(exact.denominator)) if exact else mp.mpf(0)
            status = "recognized" if v < tier1 else "inconclusive"
    with ctx.workdps():
        return RecognitionResult(poly, +resid, +v, digits, status, provenance)


# ---------------------------------------------------------------------------
# named evaluation pipelines
# ---------------------------------------------------------------------------

def _eval_agile_star(params: dict, ctx: PrecisionContext) -> HPReal:
    a, p, r = Fraction(params["a"]), Fraction(params["p"]), Fraction(params["r"])
    power = int(params.get("power", 1))
    nome = make_nome(r, ctx)
    with ctx.workdps():
        return +(agile_star(AgileSpec(a, p), nome) ** power)


def _eval_agile_star_ki(params: dict, ctx: PrecisionContext) -> HPReal:
    a, p, x = Fraction(params["a"]), Fraction(params["p"]), Fraction(params["x"])
    power = int(params.get("power", 1))
    with ctx.workdps():
        r = inverse_singular_modulus(x, ctx)
        nome = make_nome(r, ctx)
        return +(agile_star(AgileSpec(a, p), nome) ** power)


def _eval_periodic(params: dict, ctx: PrecisionContext) -> HPReal:
    values = [Fraction(v) for v in params["values"]]
    r = Fraction(params["r"])
    xs = values * 3
    pc = detect_period(xs, len(values))
    if pc is None:
        raise DomainError("the values are not catoptric-periodic")
    nome = make_nome(r, ctx)
    return normalized_value(pc, nome)


def _eval_rrcf(params: dict, ctx: PrecisionContext) -> HPReal:
    r = Fraction(params["r"])
    power = int(params.get("power", 1))
    nome = make_nome(r, ctx)
    with ctx.workdps():
        return +(rrcf(nome) ** power)


def _eval_theta_quotient(params: dict, ctx: PrecisionContext) -> HPReal:
    a1, b1 = Fraction(params["a1"]), Fraction(params["b1"])
    a2, b2 = Fraction(params["a2"]), Fraction(params["b2"])
    r = Fraction(params["r"])
    nome = make_nome(r, ctx)
    with ctx.workdps():
        return +(theta_general(ThetaSpec(a1, b1), nome)
                 / theta_general(ThetaSpec(a2, b2), nome))


EXPRESSION_EVALUATORS: dict[str, Callable[[dict, PrecisionContext], HPReal]] = {
    "agile_star": _eval_agile_star,
    "agile_star_ki": _eval_agile_star_ki,
    "periodic_normalized": _eval_periodic,
    "rrcf": _eval_rrcf,
    "theta_quotient": _eval_theta_quotient,
}


def recognize_expression(
    pipeline: str,
    params: dict,
    max_degree: int,
    height_digits: int,
    ctx: PrecisionContext,
) -> RecognitionResult:
    """Evaluate a named quantity at ctx precision and recognize it, with
    the doubled-precision re-verification wired to the same evaluator."""
    try:
        evaluator = EXPRESSION_EVALUATORS[pipeline]
    except KeyError:
        raise DomainError(
            f"unknown pipeline {pipeline!r}; choose from {sorted(EXPRESSION_EVALUATORS)}"
        ) from None
    value = evaluator(params, ctx)
    prov = pipeline + "(" + ", ".join(f"{k}={v}" for k, v in sorted(params.items())) + ")"
    return recognize(value, max_degree, height_digits, ctx,
                     recompute=lambda c: evaluator(params, c), provenance=prov)


# ---------------------------------------------------------------------------
# algebraic-function probing over the inverse singular modulus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeResult:
    x: Fraction
    recognition: RecognitionResult
    closed_form: Optional[Residual]


def probe_Q_function(
    a,
    p,
    x_values: Sequence,
    max_degree: int,
    height_digits: int,
    ctx: PrecisionContext,
) -> list[ProbeResult]:
    """For each rational x in (0,1): set r = k_i(x), evaluate [a,p;q]* at
    q = exp(-pi sqrt(r)) and recognize it.  For the two parameter pairs
    with known closed forms - (1,4): value^12 = 4(1-x^2)/x, and (1/2,4):
    value^48 = 4(1-x)^4 (2+x-2 sqrt(1+x))^12 / (x^13 (1+x)^2) - the
    closed form is evaluated alongside as a residual pair."""
    a, p = Fraction(a), Fraction(p)
    out = []
    for xr in x_values:
        xr = Fraction(xr)
        if not (0 < xr < 1):
            raise DomainError(f"x must lie in (0,1), got {xr}")
        params = {"a": str(a), "p": str(p), "x": str(xr)}
        rec = recognize(
            _eval_agile_star_ki(params, ctx),
            max_degree,
            height_digits,
            ctx,
            recompute=lambda c, prm=params: _eval_agile_star_ki(prm, c),
            provenance=f"agile_star_ki(a={a}, p={p}, x={xr})",
        )
        closed = None
        with ctx.workdps():
            val = _eval_agile_star_ki(params, ctx)
            xm = to_mpf(xr)
            if (a, p) == (Fraction(1), Fraction(4)):
                closed = Residual(+(val ** 12), +(4 * (1 - xm * xm) / xm),
                                  note="twelfth power closed form")
            elif (a, p) == (Fraction(1, 2), Fraction(4)):
                rhs = (4 * (1 - xm) ** 4 * (2 + xm - 2 * mp.sqrt(1 + xm)) ** 12
                       / (xm ** 13 * (1 + xm) ** 2))
                closed = Residual(+(val ** 48), +rhs, note="48th power closed form")
        out.append(ProbeResult(xr, rec, closed))
    return out
