"""Moebius inversion, period detection, representations, Lambert series."""

import random
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qalg import (
    DomainError,
    FormalSeries,
    InsufficientData,
    JacobiCharacter,
    PrecisionContext,
    TaylorInput,
    agile_qexpansion,
    detect_period,
    exponent_A,
    extract_X,
    jacobi_symbol,
    lambert_series,
    logderiv_representation,
    make_nome,
    moebius_mu,
    normalized_value,
    represent_product,
    represent_theta,
    square_character_eta_identity,
)
from qalg.moebius import PeriodicCoeffs, coeffs_from_X, product_value, theta_value

from oracles import close

CTX = PrecisionContext(60)


class TestMu:
    def test_known_values(self):
        assert moebius_mu(1) == 1
        assert moebius_mu(3) == -1
        assert moebius_mu(15) == 1
        assert moebius_mu(12) == 0

    def test_divisor_sum_is_unit_indicator(self):
        for n in range(1, 1001):
            total = sum(moebius_mu(d) for d in range(1, n + 1) if n % d == 0)
            assert total == (1 if n == 1 else 0)


class TestJacobiSymbol:
    def test_mod5_pattern(self):
        assert [jacobi_symbol(n, 5) for n in range(1, 6)] == [1, -1, -1, 1, 0]

    def test_mod25_gcd_rule(self):
        for n in range(1, 51):
            expected = 0 if n % 5 == 0 else 1
            assert jacobi_symbol(n, 25) == expected

    def test_complete_multiplicativity(self):
        rng = random.Random(5)
        for G in (5, 13, 25, 8, 16, 65):
            for _ in range(200):
                m = rng.randint(1, 400)
                n = rng.randint(1, 400)
                assert jacobi_symbol(m * n, G) == jacobi_symbol(m, G) * jacobi_symbol(n, G)

    def test_single_factor_of_two_rejected(self):
        with pytest.raises(DomainError):
            jacobi_symbol(3, 10)

    def test_character_admissibility(self):
        JacobiCharacter(5)
        JacobiCharacter(8)
        JacobiCharacter(9)
        JacobiCharacter(1)
        with pytest.raises(DomainError):
            JacobiCharacter(2)
        with pytest.raises(DomainError):
            JacobiCharacter(15)  # odd part 3 mod 4: not mirror-symmetric

    def test_character_period_detection(self):
        pc = JacobiCharacter(5).as_periodic()
        assert pc.period == 5 and pc.catoptric and pc.A == Fraction(1, 5)
        pc8 = JacobiCharacter(8).as_periodic()
        assert pc8.period == 8
        assert list(pc8.values) == [1, 0, -1, 0, -1, 0, 1, 0]


class TestInversion:
    def test_log_series(self):
        # f = -log(1-x): c_n = 1/n inverts to the unit-support sequence
        inp = TaylorInput([Fraction(1, n) for n in range(1, 21)])
        X = extract_X(inp)
        assert X[0] == 1
        assert all(v == 0 for v in X[1:])

    def test_jacobi_forward_backward(self):
        # coefficients built from X = (n/5), then inverted back
        n = 30
        X = [Fraction(jacobi_symbol(k, 5)) for k in range(1, n + 1)]
        coeffs = coeffs_from_X(X, n)
        assert extract_X(TaylorInput(coeffs)) == X

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.fractions(min_value=Fraction(-3), max_value=Fraction(3),
                                 max_denominator=8),
                    min_size=40, max_size=40))
    def test_roundtrip_random(self, cs):
        inp = TaylorInput(cs)
        X = extract_X(inp)
        assert coeffs_from_X(X, 40) == list(inp.coeffs)

    def test_linearity(self):
        a = TaylorInput([Fraction(1, n) for n in range(1, 15)])
        b = TaylorInput([Fraction(n, n + 1) for n in range(1, 15)])
        combo = TaylorInput([2 * x + 3 * y for x, y in zip(a.coeffs, b.coeffs)])
        Xa, Xb, Xc = extract_X(a), extract_X(b), extract_X(combo)
        assert Xc == [2 * x + 3 * y for x, y in zip(Xa, Xb)]

    def test_json_roundtrip(self):
        inp = TaylorInput([Fraction(1, 2), Fraction(-3, 7)])
        assert TaylorInput.from_json(inp.to_json()) == inp


class TestDetectPeriod:
    def test_t3(self):
        pc = detect_period([Fraction(v) for v in (1, 1, 0) * 5], 3)
        assert pc.period == 3 and pc.catoptric
        assert pc.A == Fraction(-1, 12)

    def test_t5_all_ones(self):
        pc = detect_period([Fraction(v) for v in (1, 1, 1, 1, 0) * 3], 5)
        assert pc.period == 5 and pc.A == Fraction(-1, 6)

    def test_t5_jacobi(self):
        pc = detect_period([Fraction(v) for v in (1, -1, -1, 1, 0) * 3], 5)
        assert pc.period == 5 and pc.A == Fraction(1, 5)

    def test_smallest_period_wins(self):
        pc = detect_period([Fraction(v) for v in (1, 0) * 9], 6)
        assert pc.period == 2

    def test_not_periodic(self):
        xs = [Fraction(n) for n in range(1, 19)]
        assert detect_period(xs, 6) is None

    def test_periodic_but_last_nonzero(self):
        assert detect_period([Fraction(1)] * 18, 6) is None

    def test_insufficient_data(self):
        with pytest.raises(InsufficientData):
            detect_period([Fraction(1), Fraction(0)], 6)


class TestExponent:
    def test_all_zero(self):
        pc = detect_period([Fraction(0)] * 9, 3)
        assert pc is not None and pc.A == 0

    def test_even_period_middle_term(self):
        # X supported on n = 2 mod 4: exp(-f) = prod(1 - q^(4n+2)),
        # the square root of the (2,4) product, so A = -1/12
        pc = detect_period([Fraction(v) for v in (0, 1, 0, 0) * 3], 4)
        assert pc.period == 4
        assert pc.A == Fraction(-1, 12)

    def test_exponent_requires_catoptric(self):
        bad = PeriodicCoeffs(3, (Fraction(1), Fraction(0), Fraction(0)), False,
                             Fraction(0))
        with pytest.raises(DomainError):
            exponent_A(bad)


class TestRepresentations:
    def test_rrcf_product(self):
        pc = detect_period([Fraction(v) for v in (1, -1, -1, 1, 0) * 3], 5)
        rep = represent_product(pc)
        assert [(int(s.a), int(s.p), w) for s, w in rep] == [
            (1, 5, Fraction(1)), (2, 5, Fraction(-1))]

    def test_t3_product(self):
        pc = detect_period([Fraction(v) for v in (1, 1, 0) * 4], 3)
        rep = represent_product(pc)
        assert [(int(s.a), int(s.p), w) for s, w in rep] == [(1, 3, Fraction(1))]

    def test_product_expansion_matches_taylor(self):
        n = 60
        pc = detect_period([Fraction(v) for v in (1, -1, -1, 1, 0) * 3], 5)
        xs = [pc.value(k) for k in range(1, n + 1)]
        coeffs = coeffs_from_X(xs, n)
        target = FormalSeries([Fraction(0)] + [-c for c in coeffs]).exp()
        prod = FormalSeries.one(n)
        for spec, w in represent_product(pc):
            prod = prod * agile_qexpansion(int(spec.a), int(spec.p), n).pow_rational(w)
        assert prod == target

    def test_middle_term_expansion(self):
        # the even-period middle product enters with half weight
        n = 60
        pc = detect_period([Fraction(v) for v in (0, 1, 0, 0) * 3], 4)
        xs = [pc.value(k) for k in range(1, n + 1)]
        coeffs = coeffs_from_X(xs, n)
        target = FormalSeries([Fraction(0)] + [-c for c in coeffs]).exp()
        prod = FormalSeries.one(n)
        for spec, w in represent_product(pc):
            prod = prod * agile_qexpansion(int(spec.a), int(spec.p), n).pow_rational(w)
        assert prod == target

    def test_theta_vs_product_numeric(self):
        pc = detect_period([Fraction(v) for v in (1, -1, -1, 1, 0) * 3], 5)
        nome = make_nome(2, CTX)
        assert close(product_value(pc, nome), theta_value(pc, nome), 40, dps=CTX.dps)

    def test_zero_sequence_value_is_one(self):
        pc = detect_period([Fraction(0)] * 9, 3)
        nome = make_nome(1, CTX)
        assert theta_value(pc, nome) == 1
        assert product_value(pc, nome) == 1

    def test_example_closed_form_t3(self):
        ctx = PrecisionContext(120)
        pc = detect_period([Fraction(v) for v in (1, 1, 0) * 4], 3)
        nome = make_nome(1, ctx)
        with ctx.workdps():
            lhs = mp.power(nome.q, mp.mpf(-1) / 12) * theta_value(pc, nome)
            inner = 81 * (885 + 511 * mp.sqrt(mp.mpf(3))
                          - 3 * mp.sqrt(174033 + 100478 * mp.sqrt(mp.mpf(3))))
            assert close(lhs, mp.root(inner, 12), 100, dps=ctx.dps)

    def test_eta_exponent(self):
        pc = detect_period([Fraction(v) for v in (1, 1, 1, 1, 0) * 3], 5)
        rep = represent_theta(pc)
        assert rep.eta_exponent == Fraction(-2)
        assert len(rep.factors) == 2


class TestLambert:
    def test_zero_sequence(self):
        pc = detect_period([Fraction(0)] * 9, 3)
        assert lambert_series(pc, make_nome(1, CTX)) == 0

    def test_rrcf_logderiv_match(self):
        pc = detect_period([Fraction(v) for v in (1, -1, -1, 1, 0) * 3], 5)
        nome = make_nome(2, CTX)
        assert close(lambert_series(pc, nome), logderiv_representation(pc, nome),
                     40, dps=CTX.dps)

    @pytest.mark.parametrize("pattern,max_p", [
        ((1, 1, 0), 3),
        ((1, 1, 1, 1, 0), 5),
        ((1, 0, -1, 0, -1, 0, 1, 0), 8),
    ])
    @pytest.mark.parametrize("r", [1, 2])
    def test_theorem_pair_grid(self, pattern, max_p, r):
        pc = detect_period([Fraction(v) for v in pattern * 3], max_p)
        nome = make_nome(r, CTX)
        assert close(lambert_series(pc, nome), logderiv_representation(pc, nome),
                     40, dps=CTX.dps)

    def test_brute_force_sum(self):
        nome = make_nome(1, CTX)
        with CTX.workdps():
            q = nome.q
            oracle = mp.mpf(0)
            for n in range(1, 300):
                c = jacobi_symbol(n, 5)
                if c:
                    oracle += c * n * q ** n / (1 - q ** n)
            assert close(lambert_series(JacobiCharacter(5), nome), oracle, 55,
                         dps=CTX.dps)

    def test_non_unit_rational_weights(self):
        # weights outside {0, +-1} flow through the representation too
        pattern = (Fraction(3, 2), Fraction(-1, 4), Fraction(-1, 4),
                   Fraction(3, 2), Fraction(0))
        pc = detect_period(list(pattern) * 3, 5)
        nome = make_nome(2, CTX)
        assert close(lambert_series(pc, nome), logderiv_representation(pc, nome),
                     40, dps=CTX.dps)

    def test_theta_logderiv_finite_difference_oracle(self):
        from qalg.moebius import theta_qdlog
        from qalg import ThetaSpec, theta_general
        ctx = PrecisionContext(60)
        nome = make_nome(2, ctx)
        spec = ThetaSpec(Fraction(5, 2), Fraction(3, 2))
        with ctx.workdps():
            q = nome.q
            h = mp.mpf(10) ** -20

            def theta_at(qv):
                s = mp.mpf(1)
                for n in range(1, 60):
                    e1 = mp.mpf(5) * n * n / 2 + mp.mpf(3) * n / 2
                    e2 = mp.mpf(5) * n * n / 2 - mp.mpf(3) * n / 2
                    s += (-1) ** n * (qv ** e1 + qv ** e2)
                return s

            numeric = q * (theta_at(q + h) - theta_at(q - h)) / (2 * h) / theta_at(q)
            assert close(theta_qdlog(spec, nome), numeric, 35, dps=ctx.dps)


class TestSquareCharacterIdentity:
    @pytest.mark.parametrize("g", [9, 25, 225])
    def test_exact(self, g):
        rep = square_character_eta_identity(g, 200)
        assert rep.identical

    def test_non_square_rejected(self):
        with pytest.raises(DomainError):
            square_character_eta_identity(5, 50)


class TestAlgebraicitySmoke:
    @pytest.mark.parametrize("r", [1, 4])
    def test_normalized_value_recognized(self, r):
        # the 5-periodic symbol pattern at 300 digits: q^A exp(-f) is the
        # continued-fraction value, algebraic of degree <= 24, and the
        # doubled-precision re-verification must hold
        from qalg import recognize
        ctx = PrecisionContext(300)
        pc = detect_period([Fraction(v) for v in (1, -1, -1, 1, 0) * 3], 5)

        def compute(c):
            return normalized_value(pc, make_nome(r, c))

        rec = recognize(compute(ctx), 24, 4, ctx, recompute=compute)
        assert rec.status == "recognized"
        assert rec.poly.degree <= 24
        if r == 4:
            assert rec.poly.coefficients == (1, -2, -6, 2, 1)
