"""Registry of named identity checks, suite runner and report emission.

Every identity the toolkit claims to reproduce is registered here under a
stable id (an ``eqNN``/``thmN``/``exN`` tag from the internal identity
catalog plus parameters, e.g. ``eq03.product-moduli.r2``).  A check
computes both sides independently and reports the absolute difference
against its tolerance:

* numeric checks:   tolerance 10^-(digits - guard), except the
  finite-difference check which documents its looser 10^-(digits/4 - 4);
* exact checks:     the two sides are formal series with rational
  coefficients; the "difference" is the number of mismatched
  coefficients and the tolerance is 1 (i.e. zero mismatches pass);
* recorded checks:  measurements around a known ambiguity; they never
  pass or fail, they carry data.

Suites: ``paper-core`` (the numeric identity grid), ``conjectures``
(recognition-based checks), ``series-exact`` (coefficientwise identities),
``all``.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import mpmath as mp

from .precision import PrecisionContext, to_mpf
from .series import FormalSeries, exponent_product
from .qengine import (
    AgileSpec,
    ThetaSpec,
    agile,
    agile_qexpansion,
    agile_star,
    agile_via_triangular,
    eta_paper,
    eta_qexpansion,
    make_nome,
    tau_star,
    theta2,
    theta3,
    theta_general,
    theta_powersum,
    theta_qexpansion,
    _qpow,
)
from .elliptic import (
    elliptic_alpha,
    ellint_K,
    inverse_singular_modulus,
    j_invariant,
    singular_modulus,
    theta_powersum_closed,
)
from .moebius import (
    JacobiCharacter,
    coeffs_from_X,
    detect_period,
    eta_qdlog,
    lambert_series,
    logderiv_representation,
    normalized_value,
    square_character_eta_identity,
    theta_qdlog,
    theta_value,
)
from .modular import (
    eq43_derivative_check,
    klein_j_from_R,
    modular5_check,
    ramanujan_modular5_check,
    rrcf,
    sextic_theta,
    sextic_Y_check,
    theorem3_check,
    theorem4_check,
)
from .recognize import recognize_expression


# ---------------------------------------------------------------------------
# outcome / report plumbing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckOutcome:
    lhs: str
    rhs: str
    diff: object          # mpf for numeric, int for exact/coefficient counts
    tolerance: object     # matching type
    note: str = ""


@dataclass(frozen=True)
class IdentityCheck:
    id: str
    suites: tuple
    anchors: tuple
    kind: str  # numeric | exact | recorded
    run: Callable[[PrecisionContext], CheckOutcome]
    min_digits: int = 0  # floor for checks that need headroom (recognition)


@dataclass(frozen=True)
class IdentityReport:
    id: str
    lhs: str
    rhs: str
    abs_difference: str
    tolerance: str
    verdict: str  # pass | fail | recorded
    wall_time_ms: int
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_difference": self.abs_difference,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "wall_time_ms": self.wall_time_ms,
            "note": self.note,
        }


def _num(v) -> str:
    if isinstance(v, int):
        return str(v)
    return mp.nstr(mp.mpf(v), 40)


def _residual_outcome(res, ctx: PrecisionContext, note: str = "") -> CheckOutcome:
    return CheckOutcome(
        lhs=_num(res.lhs),
        rhs=_num(res.rhs),
        diff=abs(res.lhs - res.rhs),
        tolerance=ctx.eps_check,
        note=note or res.note,
    )


def _pair_outcome(lhs, rhs, ctx: PrecisionContext, note: str = "",
                  tolerance=None) -> CheckOutcome:
    return CheckOutcome(
        lhs=_num(lhs),
        rhs=_num(rhs),
        diff=abs(lhs - rhs),
        tolerance=ctx.eps_check if tolerance is None else tolerance,
        note=note,
    )


def _series_outcome(lhs: FormalSeries, rhs: FormalSeries, note: str = "") -> CheckOutcome:
    n = min(lhs.order, rhs.order)
    mismatches = sum(1 for i in range(n + 1) if lhs[i] != rhs[i])
    return CheckOutcome(
        lhs=f"series(order={n})",
        rhs=f"series(order={n})",
        diff=mismatches,
        tolerance=1,
        note=note or "difference counts mismatched coefficients",
    )


# ---------------------------------------------------------------------------
# the checks
# ---------------------------------------------------------------------------

_KRON5 = [1, -1, -1, 1, 0]


def _kron5(n: int) -> int:
    return _KRON5[(n - 1) % 5]


def _check_modular5(r: Fraction, which: int):
    def run(ctx):
        nome = make_nome(r, ctx)
        first, second = modular5_check(nome)
        return _residual_outcome((first, second)[which], ctx)
    return run


def _check_modulus_theta(r: Fraction):
    def run(ctx):
        with ctx.workdps():
            nome = make_nome(r, ctx)
            lhs = singular_modulus(r, ctx)
            rhs = theta2(nome) ** 2 / theta3(nome) ** 2
            return _pair_outcome(lhs, rhs, ctx, note="root-finding vs theta quotient")
    return run


def _check_modulus25_theta(r: Fraction):
    def run(ctx):
        with ctx.workdps():
            nome5 = make_nome(r, ctx).scaled(Fraction(5))
            lhs = singular_modulus(25 * r, ctx)
            rhs = theta2(nome5) ** 2 / theta3(nome5) ** 2
            return _pair_outcome(lhs, rhs, ctx)
    return run


def _check_klein(r: Fraction):
    def run(ctx):
        with ctx.workdps():
            R = rrcf(make_nome(4 * r, ctx))
            lhs = klein_j_from_R(R, ctx)
            rhs = j_invariant(r, ctx)
            return _pair_outcome(lhs, rhs, ctx, note="j from the continued fraction vs modulus form")
    return run


def _check_eq09(r: Fraction):
    def run(ctx):
        return _residual_outcome(ramanujan_modular5_check(make_nome(r, ctx)), ctx)
    return run


def _check_j_eta_route(r: Fraction):
    def run(ctx):
        with ctx.workdps():
            return _pair_outcome(j_invariant(r, ctx, via="modulus"),
                                 j_invariant(r, ctx, via="eta"), ctx)
    return run


def _check_eta_power(r: Fraction):
    def run(ctx):
        with ctx.workdps():
            nome = make_nome(r, ctx)
            k = singular_modulus(r, ctx)
            kp = mp.sqrt(1 - k * k)
            K = ellint_K(k, ctx)
            lhs = eta_paper(1, nome) ** 8
            rhs = (2 ** (mp.mpf(8) / 3) / mp.pi ** 4 * _qpow(nome.q, Fraction(-1, 3))
                   * k ** (mp.mpf(2) / 3) * kp ** (mp.mpf(8) / 3) * K ** 4)
            return _pair_outcome(lhs, rhs, ctx)
    return run


def _check_theta_eta_agile_grid(rs, pmax: int):
    def run(ctx):
        worst = mp.mpf(0)
        worst_at = ""
        with ctx.workdps():
            for r in rs:
                nome = make_nome(r, ctx)
                for p in range(3, pmax + 1):
                    ep = eta_paper(p, nome)
                    for a in range(1, (p + 1) // 2 + 1):
                        if a >= p:
                            continue
                        lhs = ep * agile(AgileSpec(a, p), nome)
                        rhs = theta_general(
                            ThetaSpec(Fraction(p, 2), Fraction(p - 2 * a, 2)), nome)
                        d = abs(lhs - rhs)
                        if d > worst:
                            worst, worst_at = d, f"a={a},p={p},r={r}"
            return CheckOutcome(
                lhs="eta(p)*[a,p;q] (grid)", rhs="theta(p/2,(p-2a)/2;q) (grid)",
                diff=+worst, tolerance=ctx.eps_check,
                note=f"worst pair {worst_at}")
    return run


def _check_eq28(a: int, p: int, r: Fraction):
    def run(ctx):
        with ctx.workdps():
            nome = make_nome(r, ctx)
            spec = AgileSpec(a, p)
            return _pair_outcome(agile(spec, nome), agile_via_triangular(spec, nome),
                                 ctx, note="direct product vs triangular-number series")
    return run


def _check_duplication(r: Fraction):
    # shift/mirror invariance of the squared-nome ratio
    cases = [(Fraction(1, 3), 4), (Fraction(2, 7), 3), (Fraction(5, 4), 7),
             (Fraction(3, 5), 5), (Fraction(7, 6), 9)]

    def run(ctx):
        worst = mp.mpf(0)
        with ctx.workdps():
            nome = make_nome(r, ctx)
            for a, p in cases:
                base = tau_star(a, p, nome)
                for shifted in (p - a, p + a, 2 * p - a, 2 * p + a):
                    worst = max(worst, abs(tau_star(shifted, p, nome) - base))
            return CheckOutcome("tau*(a,p)", "tau*(np+-a,p)", +worst, ctx.eps_check,
                                note=f"{len(cases)} rational a, shifts n=1,2")
    return run


def _check_eq35(r: Fraction):
    def run(ctx):
        with ctx.workdps():
            nome = make_nome(r, ctx)
            lhs = lambert_series(JacobiCharacter(5), nome)
            rhs = (theta_qdlog(ThetaSpec(Fraction(5, 2), Fraction(1, 2)), nome)
                   - theta_qdlog(ThetaSpec(Fraction(5, 2), Fraction(3, 2)), nome))
            return _pair_outcome(lhs, rhs, ctx,
                                 note="Jacobi-symbol Lambert sum vs theta quotient log-derivative")
    return run


def _check_eq36(r: Fraction):
    def run(ctx):
        with ctx.workdps():
            nome = make_nome(r, ctx)
            L1 = lambert_series(JacobiCharacter(1), nome)
            L5 = lambert_series(JacobiCharacter(1), nome.scaled(Fraction(5)))
            lhs = L1 - 5 * L5
            rhs = -(theta_qdlog(ThetaSpec(Fraction(5, 2), Fraction(1, 2)), nome)
                    + theta_qdlog(ThetaSpec(Fraction(5, 2), Fraction(3, 2)), nome)
                    - 2 * eta_qdlog(5, nome))
            return _pair_outcome(lhs, rhs, ctx)
    return run


def _check_thm2(values, r: Fraction):
    def run(ctx):
        pc = detect_period([Fraction(v) for v in values] * 3, len(values))
        nome = make_nome(r, ctx)
        with ctx.workdps():
            return _pair_outcome(lambert_series(pc, nome),
                                 logderiv_representation(pc, nome), ctx,
                                 note=f"period {pc.period} Lambert sum vs termwise log-derivative")
    return run


def _check_thm1_consistency(values, r: Fraction):
    def run(ctx):
        pc = detect_period([Fraction(v) for v in values] * 3, len(values))
        nome = make_nome(r, ctx)
        with ctx.workdps():
            from .moebius import product_value
            return _pair_outcome(product_value(pc, nome), theta_value(pc, nome), ctx,
                                 note="q-product form vs eta/theta form")
    return run


def _check_eq39_numeric(r: Fraction):
    def run(ctx):
        nome = make_nome(r, ctx)
        with ctx.workdps():
            return _pair_outcome(sextic_theta(nome, via="theta"),
                                 sextic_theta(nome, via="rrcf"), ctx)
    return run


def _check_eq39_worked(ctx_r=Fraction(1, 5)):
    def run(ctx):
        nome = make_nome(ctx_r, ctx)
        with ctx.workdps():
            return _pair_outcome(sextic_theta(nome), 5 * mp.sqrt(mp.mpf(5)), ctx,
                                 note="bridge value at r=1/5 is 5*sqrt(5)")
    return run


def _check_thm3(r: Fraction):
    def run(ctx):
        return _residual_outcome(theorem3_check(r, ctx), ctx)
    return run


def _check_k45_radical():
    def run(ctx):
        with ctx.workdps():
            s = mp.sqrt(2 - 4 * mp.sqrt(-2 + mp.sqrt(mp.mpf(5))))
            radical = (2 - s) / (2 + s)
            return _pair_outcome(singular_modulus(Fraction(4, 5), ctx), radical, ctx,
                                 note="nested radical for the modulus at 4/5")
    return run


def _check_eq43(r: Fraction):
    def run(ctx):
        res = eq43_derivative_check(r, ctx)
        with ctx.workdps():
            tol = mp.mpf(10) ** -(ctx.digits // 4 - 4)
            rel = abs(res.lhs - res.rhs) / abs(res.rhs)
            return CheckOutcome(_num(res.lhs), _num(res.rhs), +rel, +tol,
                                note="relative difference; finite-difference tolerance 1e-(digits/4-4)")
    return run


def _check_eq46(r: Fraction):
    def run(ctx):
        with ctx.workdps():
            nome = make_nome(r, ctx)
            lhs = 1 - 24 * lambert_series(JacobiCharacter(1), nome)
            k = singular_modulus(r, ctx)
            K = ellint_K(k, ctx)
            sr = mp.sqrt(to_mpf(r))
            rhs = (6 / (mp.pi * sr)
                   + 4 * K * K * (-6 * elliptic_alpha(r, ctx) + sr * (1 + k * k))
                   / (mp.pi ** 2 * sr))
            return _pair_outcome(lhs, rhs, ctx)
    return run


def _check_powersum(r: Fraction, ms: tuple):
    def run(ctx):
        worst = mp.mpf(0)
        with ctx.workdps():
            nome = make_nome(r, ctx)
            for m in ms:
                worst = max(worst, abs(theta_powersum(m, nome)
                                       - theta_powersum_closed(m, r, ctx)))
            return CheckOutcome("sum q^(n^2+mn) (direct)", "closed form", +worst,
                                ctx.eps_check, note=f"m in {list(ms)}")
    return run


def _check_q14(r: Fraction):
    def run(ctx):
        with ctx.workdps():
            nome = make_nome(r, ctx)
            k = singular_modulus(r, ctx)
            lhs = agile_star(AgileSpec(1, 4), nome) ** 12
            return _pair_outcome(lhs, 4 * (1 - k * k) / k, ctx,
                                 note="12th power of the (1,4) starred product")
    return run


def _check_q12_4(r: Fraction):
    def run(ctx):
        with ctx.workdps():
            nome = make_nome(r, ctx)
            k = singular_modulus(r, ctx)
            lhs = agile_star(AgileSpec(Fraction(1, 2), 4), nome) ** 48
            rhs = (4 * (1 - k) ** 4 * (2 + k - 2 * mp.sqrt(1 + k)) ** 12
                   / (k ** 13 * (1 + k) ** 2))
            return _pair_outcome(lhs, rhs, ctx,
                                 note="48th power of the (1/2,4) starred product")
    return run


def _check_thm4(p: int, r: Fraction):
    def run(ctx):
        return _residual_outcome(theorem4_check(p, r, ctx), ctx)
    return run


def _check_example2():
    def run(ctx):
        pc = detect_period([Fraction(v) for v in (1, 1, 0)] * 4, 3)
        nome = make_nome(Fraction(1), ctx)
        with ctx.workdps():
            lhs = normalized_value(pc, nome)
            inner = 81 * (885 + 511 * mp.sqrt(mp.mpf(3))
                          - 3 * mp.sqrt(174033 + 100478 * mp.sqrt(mp.mpf(3))))
            rhs = mp.root(inner, 12)
            return _pair_outcome(lhs, rhs, ctx, note=f"A={pc.A}")
    return run


def _check_example3i():
    def run(ctx):
        nome = make_nome(Fraction(2), ctx)
        with ctx.workdps():
            y6 = eta_paper(1, nome) ** 6 / (eta_paper(5, nome) ** 6 * nome.q)
            lhs = 3125 + 250 * y6 + y6 * y6
            rhs = 20 * y6 ** (mp.mpf(5) / 3)
            return _pair_outcome(lhs, rhs, ctx, note="sextic with cube root of j equal to 20")
    return run


def _check_example3ii():
    def run(ctx):
        pc = detect_period([Fraction(v) for v in (1, 1, 1, 1, 0)] * 3, 5)
        nome = make_nome(Fraction(4), ctx)
        with ctx.workdps():
            lhs = normalized_value(pc, nome)
            rhs = mp.sqrt(mp.mpf(5) / 2 + 5 * mp.sqrt(mp.mpf(5)) / 2)
            return _pair_outcome(lhs, rhs, ctx, note=f"A={pc.A}")
    return run


def _check_sextic_index(r: Fraction):
    def run(ctx):
        res = sextic_Y_check(make_nome(r, ctx))
        worst = min(res.residuals.values(), key=abs)
        return CheckOutcome(
            lhs="argument candidates {r, 4r, r/4}",
            rhs="sextic relation residuals",
            diff=+abs(worst),
            tolerance=res.tolerance,
            note="satisfied by: " + ", ".join(res.satisfied)
                 + " (quarter argument is the identity; coincidences possible)",
        )
    return run


def _check_thm4_p2():
    def run(ctx):
        res = theorem4_check(2, Fraction(1), ctx)
        return CheckOutcome(
            _num(res.lhs), _num(res.rhs), +abs(res.lhs - res.rhs), ctx.eps_check,
            note="literal form at p=2 (empty theta product); measured, not asserted")
    return run


def _check_eq45_lambert_reading(g: int, r: Fraction):
    def run(ctx):
        with ctx.workdps():
            nome = make_nome(r, ctx)
            lam = lambert_series(JacobiCharacter(g), nome)
            primes = sorted({p for p in range(2, g + 1) if g % p == 0 and _is_prime(p)})
            bracket = mp.mpf(0)
            for mask in range(1 << len(primes)):
                d = 1
                bits = 0
                for i, p in enumerate(primes):
                    if mask >> i & 1:
                        d *= p
                        bits += 1
                sign = -1 if bits % 2 else 1
                bracket += sign * d * lambert_series(
                    JacobiCharacter(1), nome.scaled(Fraction(d)))
            literal = -bracket / nome.q
            match_plain = abs(lam - bracket)
            match_literal = abs(lam - literal)
            reading = "bracket itself" if match_plain < match_literal else "-q^-1 * bracket"
            return CheckOutcome(
                _num(lam), _num(bracket), +match_plain, ctx.eps_check,
                note=f"matching reading: {reading}; literal-prefactor mismatch {mp.nstr(match_literal, 5)}")
    return run


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---- exact series checks ----

def _check_eq25_series(values, order: int):
    def run(ctx):
        pc = detect_period([Fraction(v) for v in values] * 3, len(values))
        xs = [pc.value(n) for n in range(1, order + 1)]
        coeffs = coeffs_from_X(xs, order)
        target = FormalSeries([Fraction(0)] + [-c for c in coeffs]).exp()
        from .moebius import represent_product
        prod = FormalSeries.one(order)
        for spec, w in represent_product(pc):
            base = agile_qexpansion(int(spec.a), int(spec.p), order)
            prod = prod * base.pow_rational(w)
        return _series_outcome(target, prod,
                               note=f"period {pc.period}: exp(-sum c_n q^n) vs q-product expansion")
    return run


def _check_eq33_series(a: int, p: int, order: int):
    def run(ctx):
        lhs = theta_qexpansion(p, a, order)
        rhs = eta_qexpansion(p, order) * agile_qexpansion(a, p, order)
        return _series_outcome(lhs, rhs, note=f"(a,p)=({a},{p})")
    return run


def _check_eq39_series(order: int):
    def run(ctx):
        # everything lives in v = q^2
        lhs = (theta_qexpansion(5, 2, order).pow_int(6)
               * theta_qexpansion(5, 1, order).pow_int(6)
               * eta_qexpansion(5, order).pow_int(12).inverse())
        neg = exponent_product(lambda n: -5 * _kron5(n), order)
        pos = exponent_product(lambda n: 5 * _kron5(n), order)
        rhs = neg - FormalSeries.from_terms({1: 11}, order) - pos.shift(2)
        return _series_outcome(lhs, rhs, note="both sides times v, v = q^2")
    return run


def _check_eq45_series(g: int, order: int):
    def run(ctx):
        rep = square_character_eta_identity(g, order)
        return CheckOutcome(
            lhs=f"prod (1-q^n)^((n/{g}))", rhs="inclusion-exclusion eta quotient",
            diff=0 if rep.identical else 1 + (rep.first_mismatch or 0),
            tolerance=1,
            note=f"order {order}")
    return run


def _check_eq09_series(order: int):
    def run(ctx):
        lhs = exponent_product(lambda n: 5 * _kron5(n), order).shift(1)
        R = exponent_product(lambda n: _kron5(n // 5) if n % 5 == 0 else 0,
                             order).shift(1)
        num = (FormalSeries.one(order) - R.scale(2) + R.pow_int(2).scale(4)
               - R.pow_int(3).scale(3) + R.pow_int(4))
        den = (FormalSeries.one(order) + R.scale(3) + R.pow_int(2).scale(4)
               + R.pow_int(3).scale(2) + R.pow_int(4))
        rhs = R * num * den.inverse()
        return _series_outcome(lhs, rhs, note="fifth-root nome transform as series in u = q^(1/5)")
    return run


# ---- recognition checks (conjecture suite) ----

# (a, p, r) triples whose starred product is recognized at degree <= 24
# with coefficient height < 10^4 at 300 digits.
CONJECTURE_TRIPLES = (
    ("1", "4", "1"), ("1", "4", "2"), ("1", "4", "4"), ("1", "4", "1/2"),
    ("1", "2", "1"), ("1", "2", "2"), ("1/2", "2", "1"), ("1", "6", "2"),
    ("1", "8", "2"), ("3", "8", "2"), ("1", "5", "4"), ("2", "5", "4"),
)


def _check_eq19_recognition(a: str, p: str, r: str):
    def run(ctx):
        rec = recognize_expression(
            "agile_star", {"a": a, "p": p, "r": r}, max_degree=24,
            height_digits=4, ctx=ctx)
        ok = rec.status == "recognized" and rec.poly is not None and rec.poly.degree <= 24
        return CheckOutcome(
            lhs=f"[{a},{p}]* at r={r}",
            rhs=str(rec.poly) if rec.poly else "(no relation within bounds)",
            diff=0 if ok else 1,
            tolerance=1,
            note=f"status={rec.status}"
                 + (f", degree={rec.poly.degree}, verified_residual={mp.nstr(rec.verified_residual, 5)}"
                    if rec.poly else ""),
        )
    return run


def _check_eq59_quartic():
    target = (-885735, 0, -21870, 364, 45)

    def run(ctx):
        rec = recognize_expression(
            "agile_star_ki", {"a": "1", "p": "3", "x": "1/5", "power": 6},
            max_degree=6, height_digits=7, ctx=ctx)
        ok = (rec.status == "recognized" and rec.poly is not None
              and rec.poly.coefficients == target)
        return CheckOutcome(
            lhs="sixth power of the (1,3) starred product at r = k_i(1/5)",
            rhs=str(rec.poly) if rec.poly else "(none)",
            diff=0 if ok else 1, tolerance=1,
            note=f"status={rec.status}")
    return run


def _check_eq58_radical():
    def run(ctx):
        from .recognize import _eval_agile_star_ki
        with ctx.workdps():
            val = _eval_agile_star_ki({"a": "1", "p": "3", "x": "1/5", "power": 6}, ctx)
            t = mp.mpf(3) ** (mp.mpf(2) / 3) * mp.cbrt(mp.mpf(10))
            radical = (-182 - mp.sqrt(689224 - 148230 * t)
                       + mp.sqrt(2 * (92571934
                                      * mp.sqrt(2 / (344612 - 74115 * t))
                                      + 74115 * t + 689224))) / 90
            return _pair_outcome(val, radical, ctx,
                                 note="printed nested radical vs computed sixth power")
    return run


def _check_ki_roundtrip():
    rs = (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(5))

    def run(ctx):
        worst = mp.mpf(0)
        with ctx.workdps():
            for r in rs:
                k = singular_modulus(r, ctx)
                worst = max(worst, abs(inverse_singular_modulus(k, ctx) - to_mpf(r)))
            return CheckOutcome("k_i(k_r)", "r", +worst, ctx.eps_check,
                                note=f"grid {[str(r) for r in rs]}")
    return run


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

def _build_registry() -> dict:
    checks: list[IdentityCheck] = []

    def add(id_, suites, anchors, kind, run, min_digits=0):
        checks.append(IdentityCheck(id_, tuple(suites), tuple(anchors), kind, run,
                                    min_digits))

    PC = ("paper-core",)
    CJ = ("conjectures",)
    SE = ("series-exact",)

    for r in (Fraction(1), Fraction(2), Fraction(1, 5)):
        tag = str(r).replace("/", "_")
        add(f"eq03.product-moduli.r{tag}", PC, ("eq03", "eq05", "eq06"), "numeric",
            _check_modular5(r, 0))
        add(f"eq04.depressed.r{tag}", PC, ("eq04",), "numeric", _check_modular5(r, 1))
    for r in (Fraction(1), Fraction(2)):
        add(f"eq05.modulus-theta.r{r}", PC, ("eq01", "eq02", "eq05"), "numeric",
            _check_modulus_theta(r))
    add("eq06.modulus25-theta.r1", PC, ("eq06",), "numeric",
        _check_modulus25_theta(Fraction(1)))
    for r in (Fraction(1), Fraction(2)):
        add(f"eq08.klein-vs-modulus.r{r}", PC, ("eq07", "eq08", "eq10"), "numeric",
            _check_klein(r))
    for r in (Fraction(25), Fraction(50)):
        add(f"eq09.degree5-transform.r{r}", PC, ("eq09",), "numeric", _check_eq09(r))
    for r in (Fraction(1), Fraction(2), Fraction(3)):
        add(f"eq16.j-eta-route.r{r}", PC, ("eq10", "eq15", "eq16"), "numeric",
            _check_j_eta_route(r))
        add(f"eq17.eta-power.r{r}", PC, ("eq15", "eq17"), "numeric", _check_eta_power(r))
    add("eq33.bridge.grid", PC, ("eq18", "eq26", "eq32", "eq33", "thm1"), "numeric",
        _check_theta_eta_agile_grid((Fraction(1), Fraction(2), Fraction(3)), 8))
    add("eq28.triangular.a1p5.r2", PC, ("eq27", "eq28"), "numeric",
        _check_eq28(1, 5, Fraction(2)))
    add("eq30.duplication.r2", PC, ("eq29", "eq30"), "numeric",
        _check_duplication(Fraction(2)))
    add("eq35.jacobi5-lambert.r1", PC, ("eq34", "eq35", "eq44", "thm2"), "numeric",
        _check_eq35(Fraction(1)))
    add("eq36.eisenstein5.r1", PC, ("eq36",), "numeric", _check_eq36(Fraction(1)))
    add("thm2.lambert-logderiv.rrcf.r2", PC, ("eq34", "thm2"), "numeric",
        _check_thm2((1, -1, -1, 1, 0), Fraction(2)))
    add("thm1.product-vs-theta.rrcf.r2", PC, ("eq32", "thm1"), "numeric",
        _check_thm1_consistency((1, -1, -1, 1, 0), Fraction(2)))
    for r in (Fraction(1), Fraction(2), Fraction(1, 5)):
        tag = str(r).replace("/", "_")
        add(f"eq39.bridge.r{tag}", PC, ("eq39",), "numeric", _check_eq39_numeric(r))
    add("eq39.worked.r1_5", PC, ("eq39",), "numeric", _check_eq39_worked())
    for r in (Fraction(1, 5), Fraction(1, 2), Fraction(1)):
        tag = str(r).replace("/", "_")
        add(f"eq40.tail-integral.r{tag}", PC, ("eq40", "eq41", "eq42", "thm3"), "numeric",
            _check_thm3(r))
    add("eq40.k45-radical", PC, ("eq40", "eq01"), "numeric", _check_k45_radical())
    for r in (Fraction(1), Fraction(2)):
        add(f"eq43.beta-derivative.r{r}", PC, ("eq43",), "numeric", _check_eq43(r))
    for r in (Fraction(1), Fraction(2), Fraction(3), Fraction(5)):
        add(f"eq46.eisenstein-alpha.r{r}", PC, ("eq46",), "numeric", _check_eq46(r))
    for r in (Fraction(1), Fraction(2)):
        add(f"eq47.powersum-even.r{r}", PC, ("eq47", "eq49"), "numeric",
            _check_powersum(r, (0, 2, -2)))
        add(f"eq48.powersum-odd.r{r}", PC, ("eq48", "eq49"), "numeric",
            _check_powersum(r, (1, -1, 3)))
    for r in (Fraction(1), Fraction(2), Fraction(3, 2)):
        tag = str(r).replace("/", "_")
        add(f"eq53.q14-closed.r{tag}", ("paper-core", "conjectures"),
            ("eq52", "eq53", "eq55", "eq57"), "numeric", _check_q14(r))
        add(f"eq54.q12-4-closed.r{tag}", ("paper-core", "conjectures"),
            ("eq54", "eq56"), "numeric", _check_q12_4(r))
    add("eq50.ki-roundtrip", PC, ("eq50",), "numeric", _check_ki_roundtrip())
    add("thm4.p3.r1", PC, ("thm4",), "numeric", _check_thm4(3, Fraction(1)))
    add("thm4.p5.r1", PC, ("thm4",), "numeric", _check_thm4(5, Fraction(1)))
    add("thm4.p2.r1", PC, ("thm4",), "recorded", _check_thm4_p2())
    add("ex2.t3-closed-form.r1", PC, ("ex2", "eq20", "eq21", "eq22", "thm"), "numeric",
        _check_example2())
    add("ex3.sextic-j20.r2", PC, ("ex3", "eq13", "eq14"), "numeric", _check_example3i())
    add("ex3.value.r4", PC, ("ex3",), "numeric", _check_example3ii())
    for r in (Fraction(2), Fraction(3)):
        add(f"sexticY.index.r{r}", PC, ("ex3", "eq13"), "recorded",
            _check_sextic_index(r))

    # conjectures
    for a, p, r in CONJECTURE_TRIPLES:
        tag = f"{a}_{p}_{r}".replace("/", "o")
        add(f"eq19.recognize.{tag}", CJ, ("eq18", "eq19", "eq20", "eq21"), "numeric",
            _check_eq19_recognition(a, p, r), min_digits=300)
    add("eq59.quartic", CJ, ("eq50", "eq52", "eq57", "eq59"), "numeric",
        _check_eq59_quartic(), min_digits=300)
    add("eq58.radical", CJ, ("eq58", "eq59"), "numeric", _check_eq58_radical())
    for g in (9, 25, 225):
        add(f"eq45.series.g{g}", ("conjectures", "series-exact"), ("eq44", "eq45"),
            "exact", _check_eq45_series(g, 200))
    add("eq45.lambert-reading.g25.r2", CJ, ("eq45",), "recorded",
        _check_eq45_lambert_reading(25, Fraction(2)))

    # series-exact
    add("eq25.series.t3", SE, ("eq20", "eq22", "eq23", "eq24", "eq25", "thm"), "exact",
        _check_eq25_series((1, 1, 0), 100))
    add("eq25.series.t5-rrcf", SE, ("eq25", "ex1"), "exact",
        _check_eq25_series((1, -1, -1, 1, 0), 100))
    add("eq25.series.t4-middle", SE, ("eq25",), "exact",
        _check_eq25_series((0, 1, 0, 0), 100))
    add("eq25.series.t8-jacobi", SE, ("eq25", "eq44"), "exact",
        _check_eq25_series((1, 0, -1, 0, -1, 0, 1, 0), 100))
    for a, p in ((1, 3), (1, 4), (1, 5), (2, 5), (3, 7), (3, 8)):
        add(f"eq33.series.a{a}p{p}", SE, ("eq26", "eq32", "eq33"), "exact",
            _check_eq33_series(a, p, 100))
    add("eq39.series", SE, ("eq39",), "exact", _check_eq39_series(120))
    add("eq09.series", SE, ("eq09",), "exact", _check_eq09_series(40))

    return {c.id: c for c in checks}


REGISTRY: dict[str, IdentityCheck] = _build_registry()

SUITES = ("paper-core", "conjectures", "series-exact", "all")

DEFAULT_DIGITS = {"paper-core": 120, "conjectures": 300, "series-exact": 50, "all": 120}

# anchors each suite is required to exercise (registry self-test)
REQUIRED_ANCHORS = {
    "paper-core": {
        "eq03", "eq04", "eq05", "eq06", "eq08", "eq09", "eq10", "eq17",
        "eq33", "eq35", "eq36", "eq39", "eq40", "eq43", "eq46", "eq47",
        "eq48", "eq53", "eq54", "thm4", "ex2", "ex3",
    },
    "conjectures": {"eq19", "eq45", "eq55", "eq56", "eq57", "eq58", "eq59"},
    "series-exact": {"eq25", "eq33", "eq39", "eq45"},
}


def checks_for_suite(suite: str) -> list[IdentityCheck]:
    if suite == "all":
        return list(REGISTRY.values())
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    return [c for c in REGISTRY.values() if suite in c.suites]


def _execute_check(check_id: str, digits: int) -> IdentityReport:
    check = REGISTRY[check_id]
    ctx = PrecisionContext(max(digits, check.min_digits))
    start = time.monotonic()
    try:
        outcome = check.run(ctx)
        if check.kind == "recorded":
            verdict = "recorded"
        else:
            verdict = "pass" if outcome.diff < outcome.tolerance else "fail"
        report = IdentityReport(
            id=check.id, lhs=outcome.lhs, rhs=outcome.rhs,
            abs_difference=_num(outcome.diff), tolerance=_num(outcome.tolerance),
            verdict=verdict,
            wall_time_ms=int((time.monotonic() - start) * 1000),
            note=outcome.note)
    except Exception as exc:  # a failing check must not abort the suite
        report = IdentityReport(
            id=check.id, lhs="(error)", rhs="(error)", abs_difference="inf",
            tolerance="0", verdict="recorded" if check.kind == "recorded" else "fail",
            wall_time_ms=int((time.monotonic() - start) * 1000),
            note=f"{type(exc).__name__}: {exc}")
    return report


def _execute_check_tuple(args) -> tuple[str, dict]:
    check_id, digits = args
    return check_id, _execute_check(check_id, digits).to_dict()


def run_suite(name: str, digits: Optional[int] = None,
              parallelism: int = 1) -> list[IdentityReport]:
    """Run every check registered for the suite; returns reports in
    registry order.  Individual check errors become fail verdicts, the
    runner itself never aborts."""
    digits = digits or DEFAULT_DIGITS.get(name, 120)
    if digits < 50:
        raise ValueError("suite runs need digits >= 50")
    checks = checks_for_suite(name)
    ids = [c.id for c in checks]
    if parallelism and parallelism > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            results = dict(pool.map(_execute_check_tuple,
                                    [(i, digits) for i in ids]))
        return [IdentityReport(**results[i]) for i in ids]
    return [_execute_check(i, digits) for i in ids]


def summarize(reports: list[IdentityReport]) -> dict:
    return {
        "pass": sum(1 for r in reports if r.verdict == "pass"),
        "fail": sum(1 for r in reports if r.verdict == "fail"),
        "recorded": sum(1 for r in reports if r.verdict == "recorded"),
    }


def emit_report(reports: list[IdentityReport], fmt: str = "text",
                suite: str = "", digits: int = 0) -> str:
    if fmt == "json":
        return json.dumps({
            "suite": suite,
            "digits": digits,
            "checks": [r.to_dict() for r in reports],
            "summary": summarize(reports),
        }, indent=2)
    if fmt == "text":
        lines = []
        width = max([len(r.id) for r in reports], default=10)
        for r in reports:
            lines.append(
                f"{r.id:<{width}}  {r.verdict:<8}  diff={r.abs_difference:<12} "
                f"tol={r.tolerance:<12} {r.wall_time_ms:>7}ms  {r.note}")
        s = summarize(reports)
        lines.append(
            f"{'summary':<{width}}  pass={s['pass']} fail={s['fail']} recorded={s['recorded']}")
        return "\n".join(lines)
    raise ValueError(f"unknown format {fmt!r}")


def registry_self_test() -> list[str]:
    """Anchors required per suite that no registered check covers."""
    missing = []
    for suite, required in REQUIRED_ANCHORS.items():
        have = set()
        for c in checks_for_suite(suite):
            have.update(c.anchors)
        for anchor in sorted(required - have):
            missing.append(f"{suite}:{anchor}")
    return missing
