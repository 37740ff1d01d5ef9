"""Exact-integer lattice reduction and algebraic recognition."""

import random
from fractions import Fraction

import mpmath as mp
import pytest

from qalg import (
    DegenerateBasis,
    DomainError,
    InsufficientPrecision,
    IntegerPolynomial,
    PrecisionContext,
    lattice_reduce,
    probe_Q_function,
    recognize,
    recognize_expression,
)

from oracles import close, newton_refine_root, poly_divides, random_planted_poly


def gram_det(rows):
    n = len(rows)
    g = [[sum(x * y for x, y in zip(rows[i], rows[j])) for j in range(n)]
         for i in range(n)]
    # integer-preserving Bareiss elimination
    m = [row[:] for row in g]
    denom = 1
    for k in range(n - 1):
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // denom
        denom = m[k][k]
    return m[n - 1][n - 1]


class TestLatticeReduce:
    def test_identity(self):
        assert lattice_reduce([[1, 0], [0, 1]]) == [[1, 0], [0, 1]]

    def test_simple_2x2(self):
        red = lattice_reduce([[1, 0], [1, 1]])
        # still a basis of Z^2 (determinant +-1), vectors size-reduced
        assert abs(red[0][0] * red[1][1] - red[0][1] * red[1][0]) == 1
        assert all(sum(c * c for c in row) <= 2 for row in red)

    def test_sqrt2_knapsack(self):
        with mp.workdps(60):
            x = mp.sqrt(2)
            scale = mp.mpf(10) ** 40
            rows = []
            pw = mp.mpf(1)
            for i in range(3):
                row = [0] * 3 + [int(mp.nint(scale * pw))]
                row[i] = 1
                rows.append(row)
                pw *= x
        red = lattice_reduce(rows)
        short = red[0]
        assert short[:3] in ([-2, 0, 1], [2, 0, -1])

    def test_dependent_rows(self):
        with pytest.raises(DegenerateBasis):
            lattice_reduce([[1, 2], [2, 4]])

    def test_gram_determinant_preserved(self):
        rng = random.Random(11)
        for _ in range(20):
            rows = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)]
            try:
                red = lattice_reduce(rows)
            except DegenerateBasis:
                continue
            assert gram_det(rows) == gram_det(red)

    def test_delta_domain(self):
        with pytest.raises(DomainError):
            lattice_reduce([[1, 0], [0, 1]], delta=Fraction(2))


class TestIntegerPolynomial:
    def test_normalization(self):
        p = IntegerPolynomial((4, 0, -8))
        assert p.coefficients == (-1, 0, 2)  # content 1, positive leading

    def test_trailing_zero_degree(self):
        p = IntegerPolynomial((3, 1, 0))
        assert p.degree == 1

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            IntegerPolynomial((0, 0))


class TestRecognize:
    def test_sqrt2_raw_value(self):
        ctx = PrecisionContext(60)
        with ctx.workdps():
            x = mp.sqrt(2)
        rec = recognize(x, 4, 4, ctx)
        assert rec.status == "recognized"
        assert rec.poly.coefficients == (-2, 0, 1)

    def test_rational(self):
        ctx = PrecisionContext(60)
        with ctx.workdps():
            rec = recognize(mp.mpf(3) / 4, 4, 4, ctx)
        assert rec.status == "recognized"
        assert rec.poly.coefficients == (-3, 4)
        assert rec.poly.degree == 1

    def test_insufficient_precision(self):
        ctx = PrecisionContext(50)
        with pytest.raises(InsufficientPrecision):
            recognize(mp.mpf(2), 10, 6, ctx)

    def test_stability_across_digits(self):
        for digits in (120, 170):
            ctx = PrecisionContext(digits)

            def compute(c):
                with c.workdps():
                    return mp.sqrt(mp.mpf(3)) + 1

            rec = recognize(compute(ctx), 6, 4, ctx, recompute=compute)
            assert rec.status == "recognized"
            assert rec.poly.coefficients == (-2, -2, 1)


class TestPlantedPolynomials:
    def test_fifty_planted_trials(self):
        rng = random.Random(20240801)
        ctx = PrecisionContext(200)
        recovered = 0
        for trial in range(50):
            coeffs, root = random_planted_poly(rng)

            def compute(c, coeffs=coeffs, root=root):
                return newton_refine_root(coeffs, root, c.dps)

            rec = recognize(compute(ctx), 6, 6, ctx, recompute=compute)
            assert rec.status == "recognized", f"trial {trial}: {rec.status}"
            assert poly_divides(rec.poly.coefficients, tuple(coeffs)), \
                f"trial {trial}: {rec.poly.coefficients} does not divide {coeffs}"
            recovered += 1
        assert recovered == 50

    def test_twenty_transcendental_controls(self):
        ctx = PrecisionContext(200)
        controls = []
        with mp.workdps(ctx.dps + 10):
            for i in range(1, 11):
                controls.append(mp.pi * i / 7 + i)
                controls.append(mp.log(mp.mpf(2)) * i + mp.e / i)
        for i, value in enumerate(controls[:20]):
            def compute(c, v=value):
                # rebuild at the requested precision
                with mp.workdps(c.dps + 10):
                    j = i // 2 + 1
                    if i % 2 == 0:
                        return mp.pi * j / 7 + j
                    return mp.log(mp.mpf(2)) * j + mp.e / j
            rec = recognize(value, 6, 6, ctx, recompute=compute)
            assert rec.status != "recognized", \
                f"control {i} spuriously recognized as {rec.poly}"


class TestExpressions:
    def test_quartic_reproduction(self):
        ctx = PrecisionContext(300)
        rec = recognize_expression(
            "agile_star_ki", {"a": "1", "p": "3", "x": "1/5", "power": 6},
            max_degree=6, height_digits=7, ctx=ctx)
        assert rec.status == "recognized"
        assert rec.poly.coefficients == (-885735, 0, -21870, 364, 45)

    def test_agile_star_r2(self):
        ctx = PrecisionContext(120)
        rec = recognize_expression("agile_star", {"a": "1", "p": "4", "r": "2"},
                                   max_degree=8, height_digits=4, ctx=ctx)
        assert rec.status == "recognized"
        assert rec.poly.coefficients == (-2, 0, 0, 0, 1)  # fourth root of 2

    def test_rrcf_r4(self):
        ctx = PrecisionContext(120)
        rec = recognize_expression("rrcf", {"r": "4"}, max_degree=6,
                                   height_digits=4, ctx=ctx)
        assert rec.status == "recognized"
        assert rec.poly.coefficients == (1, -2, -6, 2, 1)

    def test_unknown_pipeline(self):
        with pytest.raises(DomainError):
            recognize_expression("nope", {}, 4, 4, PrecisionContext(100))

    @pytest.mark.parametrize("params", [
        {"a": "1", "p": "4", "r": "1"},
        {"a": "1", "p": "4", "r": "2"},
        {"a": "1", "p": "2", "r": "2"},
    ])
    def test_stability_across_digits(self, params):
        polys = []
        for digits in (300, 350):
            rec = recognize_expression("agile_star", params, max_degree=24,
                                       height_digits=4,
                                       ctx=PrecisionContext(digits))
            assert rec.status == "recognized"
            polys.append(rec.poly.coefficients)
        assert polys[0] == polys[1]


class TestProbe:
    def test_q14_closed_form_at_half(self):
        ctx = PrecisionContext(120)
        out = probe_Q_function(Fraction(1), Fraction(4), [Fraction(1, 2)],
                               max_degree=12, height_digits=4, ctx=ctx)
        probe = out[0]
        assert probe.recognition.status == "recognized"
        assert probe.closed_form is not None
        with ctx.workdps():
            # value^12 = 4(1 - x^2)/x = 6 at x = 1/2
            assert close(probe.closed_form.lhs, 6, 90, dps=ctx.dps)
            assert probe.closed_form.diff < ctx.eps_check

    def test_q12_4_closed_form_at_half(self):
        # the closed form is the point here; the star value itself can
        # exceed any small degree bound, which probe reports honestly
        ctx = PrecisionContext(120)
        out = probe_Q_function(Fraction(1, 2), Fraction(4), [Fraction(1, 2)],
                               max_degree=8, height_digits=4, ctx=ctx)
        probe = out[0]
        assert probe.closed_form is not None
        with ctx.workdps():
            assert probe.closed_form.diff < ctx.eps_check

    def test_x_domain(self):
        with pytest.raises(DomainError):
            probe_Q_function(Fraction(1), Fraction(4), [Fraction(2)],
                             max_degree=4, height_digits=4,
                             ctx=PrecisionContext(100))
