"""Q_p arithmetic: precision propagation, Iwasawa log, root enumeration."""

import random
from fractions import Fraction

import pytest

from biqc.errors import DomainError, PrecisionError
from biqc.padic import PadicNumber, hensel_certify, padic_val, roots_mod_pk


def Q(x, p, n):
    return PadicNumber.coerce(Fraction(x), p, n)


class TestBasics:
    def test_construction_normalises_units(self):
        x = PadicNumber.from_int(50, 5, 10)
        assert x.val == 2 and x.unit == 2

    def test_exact_zero_is_distinct_from_inexact(self):
        z = PadicNumber.zero(7)
        o = Q(49, 7, 2)  # 49 = O(7^2): no known digits
        assert z.is_exact_zero() and z.is_zero_to_precision()
        assert not o.is_exact_zero() and o.is_zero_to_precision()

    def test_add_min_absprec(self):
        a = Q(1, 5, 8)
        b = Q(2, 5, 3)
        assert (a + b).absprec == 3

    def test_mul_precision_rule(self):
        a = Q(5, 5, 8)       # val 1, abs 8
        b = Q(35, 5, 4)      # val 1, abs 4
        c = a * b
        # min(val(a)+abs(b), val(b)+abs(a)) = min(1+4, 1+8) = 5
        assert c.absprec == 5 and c.val == 2

    def test_add_negative_valuations(self):
        a = Q(Fraction(1, 5), 5, 6)
        b = Q(Fraction(-1, 5), 5, 6)
        assert (a + b).is_zero_to_precision()
        c = Q(Fraction(2, 25), 5, 6) + Q(3, 5, 6)
        assert c.val == -2

    def test_div(self):
        a = Q(6, 7, 8) / Q(2, 7, 8)
        assert a.agrees_with(Q(3, 7, 8))

    def test_fraction_roundtrip(self):
        x = Q(Fraction(22, 7), 3, 12)
        y = Q(22, 3, 12) / Q(7, 3, 12)
        assert x.agrees_with(y)

    def test_sqrt(self):
        x = Q(Fraction(9, 49), 5, 10).sqrt()
        assert (x * x).agrees_with(Q(Fraction(9, 49), 5, 10))
        with pytest.raises(DomainError):
            Q(5, 5, 8).sqrt()       # odd valuation
        with pytest.raises(DomainError):
            Q(2, 5, 8).sqrt()       # non-residue mod 5

    def test_sqrt_2adic(self):
        x = Q(17, 2, 12).sqrt()
        assert (x * x).agrees_with(Q(17, 2, 10), 10)
        with pytest.raises(DomainError):
            Q(3, 2, 12).sqrt()

    def test_truncation_consistency(self):
        # recompute a pipeline value at higher precision: the low-precision
        # value must be the truncation of the high-precision one
        def pipeline(n):
            x = Q(Fraction(7, 3), 5, n)
            y = Q(Fraction(-2, 11), 5, n)
            return ((x * y + 3) / (x - y)) * x + y ** 3

        lo, hi = pipeline(8), pipeline(20)
        assert lo.agrees_with(hi, lo.absprec)


class TestIwasawaLog:
    def test_log_one_is_zero(self):
        assert Q(1, 5, 10).iwasawa_log().is_zero_to_precision()

    def test_log_p_is_zero(self):
        # the branch with log(p) = 0
        assert Q(5, 5, 10).iwasawa_log().is_zero_to_precision()

    def test_log_6_in_Q5(self):
        # independent oracle: partial sum 5 - 25/2 + 125/3 of log(1+5);
        # the remainder terms all have valuation >= 4
        partial = Fraction(5) - Fraction(25, 2) + Fraction(125, 3)
        expected = Q(partial, 5, 4)
        got = Q(6, 5, 12).iwasawa_log()
        assert got.agrees_with(expected, 4)
        assert got.lift(4) == 555  # frozen from the oracle above

    def test_homomorphism(self):
        rng = random.Random(7)
        for p in (3, 5, 7):
            for _ in range(8):
                u = rng.randrange(1, p ** 6)
                v = rng.randrange(1, p ** 6)
                if u % p == 0 or v % p == 0:
                    continue
                lu = Q(u, p, 12).iwasawa_log()
                lv = Q(v, p, 12).iwasawa_log()
                luv = Q(u * v, p, 12).iwasawa_log()
                assert luv.agrees_with(lu + lv, 11)

    def test_log_respects_valuation_stripping(self):
        # log(p^k * u) = log(u)
        a = Q(Fraction(18, 25), 5, 12).iwasawa_log()
        b = Q(18, 5, 12).iwasawa_log()
        assert a.agrees_with(b, 11)

    def test_rejects_zero_and_p2(self):
        with pytest.raises(DomainError):
            PadicNumber.zero(5).iwasawa_log()
        with pytest.raises(DomainError):
            Q(3, 2, 10).iwasawa_log()


class TestRoots:
    def test_linear(self):
        assert roots_mod_pk([0, 1], 5, 3) == [0]

    def test_square_minus_one_mod_9(self):
        # brute force over 9 residues: 1 and 8
        assert roots_mod_pk([-1, 0, 1], 3, 2) == [1, 8]

    def test_nonresidue_empty(self):
        assert roots_mod_pk([-3, 0, 1], 5, 2) == []

    def test_agrees_with_exhaustive(self):
        rng = random.Random(3)
        for _ in range(50):
            p = rng.choice([3, 5, 7])
            k = rng.randrange(1, 5)
            if p ** k > 10 ** 5:
                continue
            deg = rng.randrange(1, 5)
            coeffs = [rng.randrange(-20, 20) for _ in range(deg + 1)]
            if all(c == 0 for c in coeffs):
                continue
            try:
                got = roots_mod_pk(coeffs, p, k)
            except PrecisionError:
                continue
            # oracle: evaluate at every residue after content normalisation
            kmin = min(padic_val(c, p) for c in coeffs if c)
            scaled = [c // p ** kmin for c in coeffs]
            m = p ** k
            want = [r for r in range(m)
                    if sum(c * r ** i for i, c in enumerate(scaled)) % m == 0]
            assert got == want

    def test_padic_coefficients(self):
        coeffs = [Q(-1, 3, 8), Q(0, 3, 8), Q(1, 3, 8)]
        assert roots_mod_pk(coeffs, 3, 2) == [1, 8]

    def test_insufficient_precision(self):
        with pytest.raises(PrecisionError):
            roots_mod_pk([Q(9, 3, 6), Q(27, 3, 6)], 3, 5)


class TestHensel:
    def test_unit_derivative(self):
        res = hensel_certify([-1, 0, 1], 1, 3, 4)
        assert res.certified and res.residue == 1

    def test_double_root_uncertified(self):
        res = hensel_certify([0, 0, 1], 0, 5, 4)
        assert not res.certified

    def test_newton_oracle(self):
        # f = t^2 + t + 5 at r = 4 mod 5: f(4) = 25, f'(4) = 9 is a unit
        res = hensel_certify([5, 1, 1], 4, 5, 2)
        assert res.certified
        # Newton iteration oracle for the true root
        r = 4
        for _ in range(5):
            m = 5 ** 10
            fr = (r * r + r + 5) % m
            fpr = (2 * r + 1) % m
            r = (r - fr * pow(fpr, -1, m)) % m
        assert (r - res.residue) % 5 ** res.modulus_exponent == 0
