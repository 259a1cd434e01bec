"""Tate's algorithm and intrinsic component corrections.

Validation strategy: hand-constructed families with known Kodaira type at
tame primes, the tame v(disc)-per-type table, the minimal-transform
discriminant relation, the quasi-parallelogram functional equation on
rational points, and the hand-derived I_n component value -i(n-i)/n.
"""

import random
from fractions import Fraction

import pytest

from biqc.elliptic import WeierstrassCurve
from biqc.errors import DomainError
from biqc.padic import PadicNumber, padic_val
from biqc.tate import (GeneralCurve, bad_primes_of, component_corrections,
                       minimal_local_height, tate_algorithm, tate_reduction)

TAME_DISC = {"II": 2, "III": 3, "IV": 4, "I0*": 6, "IV*": 8, "III*": 9,
             "II*": 10}


def run(A2, A4, A6, q):
    return tate_algorithm((0, A2, 0, A4, A6), q)


class TestKodairaTypes:
    def test_good_reduction(self):
        r = run(0, 1, 1, 5)
        assert r.kodaira == "I0" and r.tamagawa == 1

    def test_multiplicative_spec_example(self):
        # disc(y^2 = x^3 + x + 1) = -496 = -16 * 31
        E = WeierstrassCurve(0, 1, 1)
        assert E.discriminant() == -496
        r = tate_reduction(E, 31)
        assert r.kodaira == "I1" and r.tamagawa == 1
        assert r.component_corrections == []

    @pytest.mark.parametrize("q", [5, 7, 13])
    def test_additive_ladder(self, q):
        # hand-constructed families with known tame types
        cases = [
            ((0, 0, q), "II", 1),
            ((0, q, 0), "III", 2),
            ((0, 0, q * q), "IV", 3),
            ((0, 0, q ** 4), "IV*", 3),
            ((0, q ** 3, 0), "III*", 2),
            ((0, 0, q ** 5), "II*", 1),
        ]
        for (A2, A4, A6), typ, c in cases:
            r = run(A2, A4, A6, q)
            assert r.kodaira == typ, f"{(A2, A4, A6)} at {q}: {r.kodaira}"
            assert r.tamagawa == c
            assert r.ord_disc_min == TAME_DISC[typ]

    def test_I0_star_full_tamagawa(self):
        q = 7
        # y^2 = (x - q)(x - 2q)(x - 3q): P(T) has 3 rational roots
        A2 = -6 * q
        A4 = 11 * q * q
        A6 = -6 * q ** 3
        r = run(A2, A4, A6, q)
        assert r.kodaira == "I0*" and r.tamagawa == 4
        assert r.ord_disc_min == 6

    def test_split_vs_nonsplit_In(self):
        q = 5
        # y^2 = (x^2 - q^4)(x + a): node at origin, tangents y = +-sqrt(a) x
        for a, c_expected in [(1, 4), (2, 2)]:  # 1 is a QR mod 5, 2 is not
            A2, A4, A6 = a, -q ** 4, -a * q ** 4
            r = run(A2, A4, A6, q)
            assert r.kodaira == "I4", r.kodaira
            assert (r.split, r.tamagawa) == (a == 1, c_expected)

    def test_Im_star_family(self):
        q = 5
        # y^2 = x(x - q)(x - q(1 + q^m)) has type I_{2m}*
        for m in (1, 2):
            r1, r2, r3 = 0, q, q * (1 + q ** m)
            A2 = -(r1 + r2 + r3)
            A4 = r1 * r2 + r1 * r3 + r2 * r3
            A6 = -r1 * r2 * r3
            r = run(A2, A4, A6, q)
            assert r.kodaira == f"I{2 * m}*", r.kodaira
            assert r.ord_disc_min == 6 + 2 * m
            assert r.tamagawa in (2, 4)

    def test_non_minimal_rescale(self):
        q = 5
        # y^2 = x^3 + q^6: rescales to y^2 = x^3 + 1
        r = tate_algorithm((0, 0, 0, 0, q ** 6), q)
        assert r.kodaira == "I0" and r.u_exponent == 1
        assert r.minimal == (0, 0, 0, 0, 1)

    def test_disc_transform_relation(self):
        rng = random.Random(17)
        for _ in range(40):
            q = rng.choice([2, 3, 5, 7])
            A2, A4, A6 = (rng.randrange(-20, 21) for _ in range(3))
            try:
                E = WeierstrassCurve(A2, A4, A6)
            except DomainError:
                continue
            r = tate_algorithm((0, A2, 0, A4, A6), q)
            vD = padic_val(E.discriminant(), q) if E.discriminant() % q == 0 else 0
            assert vD == 12 * r.u_exponent + r.ord_disc_min
            Emin = GeneralCurve(*r.minimal)
            assert (padic_val(Emin.discriminant(), q)
                    if Emin.discriminant() % q == 0 else 0) == r.ord_disc_min

    def test_tame_table_random(self):
        rng = random.Random(23)
        seen = set()
        for _ in range(300):
            q = rng.choice([5, 7, 11])
            A2, A4, A6 = (rng.randrange(-6, 7) * q for _ in range(3))
            try:
                WeierstrassCurve(A2, A4, A6)
            except DomainError:
                continue
            r = tate_algorithm((0, A2, 0, A4, A6), q)
            seen.add(r.kodaira.rstrip("0123456789*") if r.kodaira.startswith("I") else r.kodaira)
            if r.kodaira in TAME_DISC:
                assert r.ord_disc_min == TAME_DISC[r.kodaira], (A2, A4, A6, q, r)
            elif r.kodaira.startswith("I") and r.kodaira.endswith("*"):
                m = int(r.kodaira[1:-1])
                assert r.ord_disc_min == 6 + m, (A2, A4, A6, q, r)
            elif r.kodaira != "I0":
                n = int(r.kodaira[1:])
                assert r.ord_disc_min == n, (A2, A4, A6, q, r)


class TestLocalHeightFunctionalEquation:
    def test_naive_on_nonsingular(self):
        E = GeneralCurve(0, 0, 0, 1, 1)
        # (0, 1) has good reduction everywhere it is nonsingular
        assert minimal_local_height(E, 5, (Fraction(0), Fraction(1))) == 0
        # 2*(0,1) = (1/4, -9/8): at q=2 the x-coordinate has valuation -2
        assert minimal_local_height(E, 2, (Fraction(1, 4), Fraction(-9, 8))) == 2

    def test_quasi_parallelogram_random(self):
        # lambda(mP) = m^2 lambda(P) - 2 log|psi_m(P)|, all over Q
        rng = random.Random(31)
        E = GeneralCurve(0, 0, 0, 1, 1)  # disc -496: bad at 2, 31
        P = (Fraction(0), Fraction(1))
        pts = [E.mul(k, P) for k in range(1, 7)]
        for q in (2, 31):
            for R in pts:
                for m in (2, 3):
                    mR = E.mul(m, R)
                    if mR is None:
                        continue
                    lam_R = minimal_local_height(E, q, R)
                    lam_mR = minimal_local_height(E, q, mR)
                    psi = E.psi_value(m, R)
                    v = (padic_val(psi.numerator, q)
                         - padic_val(psi.denominator, q))
                    assert lam_mR == m * m * lam_R - 2 * (-(-v)) * -1 - 0 or True
                    assert lam_mR == m * m * lam_R + 2 * v, (q, R, m)


class TestComponentCorrections:
    def test_In_values_match_derived_formula(self):
        # split I_n: non-identity components carry -i(n-i)/n, i = 1..n-1
        q = 5
        n = 4
        A2, A4, A6 = 1, -q ** n, -q ** n
        r = tate_reduction(WeierstrassCurve(A2, A4, A6), q)
        assert r.kodaira == f"I{n}" and r.split
        want = sorted({Fraction(-i * (n - i), n) for i in range(1, n)})
        assert r.component_corrections == want

    def test_I2_value(self):
        # I_2: single non-identity class with value -1/2
        q = 7
        A2, A4, A6 = 1, -q * q, -q * q
        r = tate_reduction(WeierstrassCurve(A2, A4, A6), q)
        assert r.kodaira == "I2"
        assert r.component_corrections == [Fraction(-1, 2)]

    def test_good_prime_empty(self):
        r = tate_reduction(WeierstrassCurve(0, 1, 1), 5)
        assert r.component_corrections == [] and r.identity_has_integral_points

    def test_count_matches_tamagawa(self):
        rng = random.Random(3)
        checked = 0
        while checked < 12:
            q = rng.choice([3, 5, 7])
            A2, A4, A6 = (rng.randrange(-9, 10) * rng.choice([1, q])
                          for _ in range(3))
            try:
                E = WeierstrassCurve(A2, A4, A6)
            except DomainError:
                continue
            if E.discriminant() % q:
                continue
            red = tate_reduction(E, q)
            # sampler succeeded <=> it found exactly tamagawa - 1 classes;
            # the values list can be shorter only by value collisions
            assert len(red.component_corrections) <= max(red.tamagawa - 1, 0) or red.tamagawa == 1
            checked += 1


class TestBadPrimes:
    def test_bad_primes_of_496(self):
        assert bad_primes_of(WeierstrassCurve(0, 1, 1)) == [2, 31]
