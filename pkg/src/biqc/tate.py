"""Tate's algorithm and local data at bad primes.

Works with general integral quintuple models (a1,a2,a3,a4,a6) so that
minimalisation is correct at q = 2 and 3.  Outputs Kodaira type, Tamagawa
number, the minimalising transform, and per-component local-height
correction values.  Corrections are not copied from tables: each non-identity
component class of E(Q_q) is sampled and its value derived from the
quasi-parallelogram functional equation, with the Tamagawa number telling
the sampler how many classes exist.
"""

from __future__ import annotations

import random
from fractions import Fraction

import sympy

from .errors import DomainError, PrecisionError
from .padic import PadicNumber, padic_val, _sqrt_mod_p
from .elliptic import WeierstrassCurve, _padd, _pmul, _pscale, _psub


# ---------------------------------------------------------------------------
# general quintuple curves
# ---------------------------------------------------------------------------


class GeneralCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer a_i."""

    __slots__ = ("a1", "a2", "a3", "a4", "a6", "_psi_cache")

    def __init__(self, a1, a2, a3, a4, a6):
        self.a1, self.a2, self.a3, self.a4, self.a6 = (
            int(a1), int(a2), int(a3), int(a4), int(a6))
        self._psi_cache = {}

    @staticmethod
    def from_short(curve: WeierstrassCurve) -> "GeneralCurve":
        return GeneralCurve(0, curve.A2, 0, curve.A4, curve.A6)

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = (a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3
              - a4 * a4)
        return b2, b4, b6, b8

    def c_invariants(self):
        b2, b4, b6, _ = self.b_invariants()
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
        return c4, c6

    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    # -- point arithmetic over a field of characteristic 0 ------------------

    def neg(self, P):
        if P is None:
            return None
        x, y = P
        return (x, -y - self.a1 * x - self.a3)

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = P
        x2, y2 = Q
        a1, a2, a3, a4 = self.a1, self.a2, self.a3, self.a4
        if _eqz(x1 - x2):
            if _eqz(y1 + y2 + a1 * x1 + a3):
                return None
            num = 3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1
            den = 2 * y1 + a1 * x1 + a3
            lam = num / den
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = lam * (x1 - x3) - y1 - a1 * x3 - self.a3
        return (x3, y3)

    def mul(self, n, P):
        if n < 0:
            return self.mul(-n, self.neg(P))
        R, A = None, P
        while n:
            if n & 1:
                R = self.add(R, A)
            n >>= 1
            if n:
                A = self.add(A, A)
        return R

    def equation_value(self, x, y):
        return (y * y + self.a1 * x * y + self.a3 * y
                - (((x + self.a2) * x + self.a4) * x + self.a6))

    def is_singular_residue(self, q, xr, yr) -> bool:
        """Is (xr, yr) in E(F_q) a singular point of the reduced curve?"""
        a1, a2, a3, a4 = self.a1, self.a2, self.a3, self.a4
        fy = (2 * yr + a1 * xr + a3) % q
        fx = (a1 * yr - (3 * xr * xr + 2 * a2 * xr + a4)) % q
        return fy == 0 and fx == 0

    def reduce_point(self, P, q):
        """Residue of a point with Fraction or PadicNumber coordinates;
        None when it reduces to infinity."""
        if P is None:
            return None
        x, y = P
        if isinstance(x, PadicNumber):
            if not x.is_zero_to_precision() and x.known_valuation() < 0:
                return None
            return (x.lift(1) % q if not x.is_zero_to_precision() else 0,
                    y.lift(1) % q if not y.is_zero_to_precision() else 0)
        x, y = Fraction(x), Fraction(y)
        if x.denominator % q == 0:
            return None
        return (x.numerator * pow(x.denominator, -1, q) % q,
                y.numerator * pow(y.denominator, -1, q) % q)

    def has_nonsingular_reduction(self, P, q) -> bool:
        r = self.reduce_point(P, q)
        if r is None:
            return True
        return not self.is_singular_residue(q, *r)

    # -- division polynomials (z-representation) ----------------------------
    # psi_m = A_m(x) * z^(m+1 mod 2) with z = 2y + a1 x + a3,
    # z^2 = B(x) = 4x^3 + b2 x^2 + 2 b4 x + b6.

    def _B(self):
        b2, b4, b6, _ = self.b_invariants()
        return [b6, 2 * b4, b2, 4]

    def division_polynomial(self, m):
        if m < 0:
            a, par = self.division_polynomial(-m)
            return _pscale(a, -1), par
        if m in self._psi_cache:
            return self._psi_cache[m]
        b2, b4, b6, b8 = self.b_invariants()
        B = self._B()
        if m == 0:
            res = ([], 1)
        elif m == 1:
            res = ([1], 0)
        elif m == 2:
            res = ([1], 1)
        elif m == 3:
            res = ([b8, 3 * b6, 3 * b4, b2, 3], 0)
        elif m == 4:
            res = ([b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8,
                    10 * b6, 5 * b4, b2, 2], 1)
        elif m % 2 == 1:
            k = (m - 1) // 2
            ak2 = self.division_polynomial(k + 2)[0]
            ak = self.division_polynomial(k)[0]
            ak1 = self.division_polynomial(k + 1)[0]
            akm1 = self.division_polynomial(k - 1)[0]
            t1 = _pmul(ak2, _pmul(ak, _pmul(ak, ak)))
            t2 = _pmul(akm1, _pmul(ak1, _pmul(ak1, ak1)))
            B2 = _pmul(B, B)
            a = _psub(_pmul(B2, t1), t2) if k % 2 == 0 else _psub(t1, _pmul(B2, t2))
            res = (a, 0)
        else:
            k = m // 2
            ak = self.division_polynomial(k)[0]
            ak2 = self.division_polynomial(k + 2)[0]
            akm1 = self.division_polynomial(k - 1)[0]
            akm2 = self.division_polynomial(k - 2)[0]
            ak1 = self.division_polynomial(k + 1)[0]
            inner = _psub(_pmul(ak2, _pmul(akm1, akm1)),
                          _pmul(akm2, _pmul(ak1, ak1)))
            res = (_pmul(ak, inner), 1)
        self._psi_cache[m] = res
        return res

    def psi_value(self, m, P):
        x, y = P
        a, parity = self.division_polynomial(m)
        v = _eval(a, x)
        if parity:
            v = v * (2 * y + self.a1 * x + self.a3)
        return v


def _eqz(v):
    if isinstance(v, PadicNumber):
        return v.is_zero_to_precision()
    return v == 0


def _eval(coeffs, x):
    acc = None
    for c in reversed(coeffs):
        acc = c if acc is None else acc * x + c
    return acc if acc is not None else 0 * x


def transform_quintuple(ai, u, r, s, t):
    """a-invariants after x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
    Returns exact Fractions; integrality is the caller's concern."""
    a1, a2, a3, a4, a6 = (Fraction(a) for a in ai)
    u, r, s, t = Fraction(u), Fraction(r), Fraction(s), Fraction(t)
    b1 = (a1 + 2 * s) / u
    b2 = (a2 - s * a1 + 3 * r - s * s) / u ** 2
    b3 = (a3 + r * a1 + 2 * t) / u ** 3
    b4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r
          - 2 * s * t) / u ** 4
    b6 = (a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t
          - r * t * a1) / u ** 6
    return (b1, b2, b3, b4, b6)


class Transform:
    """Composite change of coordinates x = u^2 x' + r, y = u^3 y' + s u^2 x' + t
    from the original model to the current one."""

    __slots__ = ("u", "r", "s", "t")

    def __init__(self, u=1, r=0, s=0, t=0):
        self.u, self.r, self.s, self.t = u, r, s, t

    def compose(self, u2, r2, s2, t2) -> "Transform":
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        return Transform(u1 * u2,
                         r1 + u1 * u1 * r2,
                         s1 + u1 * s2,
                         t1 + u1 ** 3 * t2 + s1 * u1 * u1 * r2)

    def push_point(self, P):
        """Coordinates on the transformed (minimal) model of a point given
        on the original model."""
        if P is None:
            return None
        x, y = P
        u, r, s, t = self.u, self.r, self.s, self.t
        x2 = (x - r) / (u * u) if u != 1 or r != 0 else x
        y2 = (y - s * u * u * x2 - t) / (u ** 3)
        return (x2, y2)


class ReductionData:
    __slots__ = ("q", "kodaira", "tamagawa", "ord_disc_min", "u_exponent",
                 "transform", "minimal", "component_corrections",
                 "identity_has_integral_points", "split")

    def __init__(self, **kw):
        for k in self.__slots__:
            setattr(self, k, kw.get(k))

    @property
    def good(self):
        return self.kodaira == "I0"

    def __repr__(self):
        return (f"q={self.q}: {self.kodaira}, c={self.tamagawa}, "
                f"v(D_min)={self.ord_disc_min}, u=q^{self.u_exponent}")


def _vq(n, q):
    if n == 0:
        return 10 ** 9  # effectively infinite for the algorithm's tests
    return padic_val(n, q)


def _quad_roots_mod_q(a, b, c, q):
    """Roots of a T^2 + b T + c modulo q (a may be 0 mod q)."""
    a, b, c = a % q, b % q, c % q
    if q <= 50:
        return [t for t in range(q) if (a * t * t + b * t + c) % q == 0]
    if a == 0:
        if b == 0:
            return [] if c else list(range(q))
        return [(-c) * pow(b, -1, q) % q]
    disc = (b * b - 4 * a * c) % q
    if disc == 0:
        return [(-b) * pow(2 * a, -1, q) % q]
    r = _sqrt_mod_p(disc, q)
    if r is None:
        return []
    inv = pow(2 * a, -1, q)
    return sorted({(-b + r) * inv % q, (-b - r) * inv % q})


def _cubic_roots_mod_q(coeffs, q):
    """Roots in F_q of a cubic given by ascending coefficients."""
    if q <= 3000:
        return [t for t in range(q) if _eval_mod(coeffs, t, q) == 0]
    # gcd with T^q - T isolates the split part; degree <= 3 so finish by
    # quadratic/linear solving after deflation by each root found
    roots = []
    work = [c % q for c in coeffs]
    # find roots via derandomised search on the split part
    split = _poly_gcd_mod(work, _powmod_T(work, q), q)
    deg = len(split) - 1
    if deg == 0:
        return []
    # brute-force the split part by factoring out roots with CZ splitting
    roots = _split_roots(split, q)
    return sorted(set(roots))


def _eval_mod(coeffs, x, q):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % q
    return acc


def _poly_mod(f, g, q):
    f = [c % q for c in f]
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    g = [c % q for c in g]
    while len(g) > 1 and g[-1] == 0:
        g.pop()
    if g == [0]:
        raise ZeroDivisionError
    inv = pow(g[-1], -1, q)
    f = f[:]
    while len(f) >= len(g) and f != [0]:
        k = len(f) - len(g)
        c = f[-1] * inv % q
        for i, gc in enumerate(g):
            f[i + k] = (f[i + k] - c * gc) % q
        while len(f) > 1 and f[-1] == 0:
            f.pop()
    return f


def _poly_gcd_mod(f, g, q):
    f = [c % q for c in f]
    g = [c % q for c in g]
    while any(g) if g else False:
        f, g = g, _poly_mod(f, g, q)
        if g == [0]:
            break
    inv = pow(f[-1], -1, q)
    return [c * inv % q for c in f]


def _powmod_T(modpoly, q):
    """T^q - T modulo modpoly over F_q."""
    result = [1]
    base = [0, 1]
    e = q
    while e:
        if e & 1:
            result = _poly_mod(_pmul(result, base), modpoly, q)
        e >>= 1
        if e:
            base = _poly_mod(_pmul(base, base), modpoly, q)
    return _padd(result, [0, q - 1])


def _split_roots(split, q, rng=None):
    """Roots of a totally-split squarefree polynomial of degree <= 3."""
    deg = len(split) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [(-split[0]) * pow(split[1], -1, q) % q]
    if deg == 2:
        return _quad_roots_mod_q(split[2], split[1], split[0], q)
    rng = rng or random.Random(q)
    for _ in range(64):
        a = rng.randrange(q)
        # gcd((T+a)^((q-1)/2) - 1, split)
        base = [a, 1]
        acc = [1]
        e = (q - 1) // 2
        b = base
        while e:
            if e & 1:
                acc = _poly_mod(_pmul(acc, b), split, q)
            e >>= 1
            if e:
                b = _poly_mod(_pmul(b, b), split, q)
        g = _poly_gcd_mod(split, _padd(acc, [q - 1]), q)
        if 1 <= len(g) - 1 <= 2:
            r1 = _split_roots(g, q, rng)
            rest = _poly_mod_div(split, g, q)
            return r1 + _split_roots(rest, q, rng)
    raise RuntimeError("root splitting failed")


def _poly_mod_div(f, g, q):
    """Exact quotient f/g over F_q."""
    f = [c % q for c in f]
    out = [0] * (len(f) - len(g) + 1)
    inv = pow(g[-1], -1, q)
    while len(f) >= len(g) and any(f):
        k = len(f) - len(g)
        c = f[-1] * inv % q
        out[k] = c
        for i, gc in enumerate(g):
            f[i + k] = (f[i + k] - c * gc) % q
        while len(f) > 1 and f[-1] == 0:
            f.pop()
    return out


def _singular_point(ai, q):
    """Singular point of the reduced curve (exists when v(disc) > 0)."""
    a1, a2, a3, a4, a6 = ai
    if q <= 3000:
        for xr in range(q):
            if q == 2:
                ys = [yr for yr in (0, 1) if (2 * yr + a1 * xr + a3) % 2 == 0]
            else:
                ys = [(-(a1 * xr + a3)) * pow(2, -1, q) % q]
            for yr in ys:
                if (a1 * yr - (3 * xr * xr + 2 * a2 * xr + a4)) % q:
                    continue
                if (yr * yr + a1 * xr * yr + a3 * yr
                        - (xr ** 3 + a2 * xr * xr + a4 * xr + a6)) % q == 0:
                    return xr, yr
        raise RuntimeError("no singular point found")
    # odd q: complete the square; singular x is a multiple root of
    # g = x^3 + b2/4 x^2 + b4/2 x + b6/4
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    inv4 = pow(4, -1, q)
    inv2 = pow(2, -1, q)
    g = [b6 * inv4 % q, b4 * inv2 % q, b2 * inv4 % q, 1]
    gp = [g[1], 2 * g[2] % q, 3]
    h = _poly_gcd_mod(g, gp, q)
    if len(h) - 1 == 1:
        xr = (-h[0]) % q
    elif len(h) - 1 == 2:
        rr = _quad_roots_mod_q(h[2], h[1], h[0], q)
        xr = rr[0]
    else:
        raise RuntimeError("no multiple root")
    yr = (-(a1 * xr + a3)) * inv2 % q
    return xr, yr


def tate_algorithm(curve_ai, q):
    """Kodaira type, Tamagawa number and minimalising transform at q.

    curve_ai: integer quintuple (a1, a2, a3, a4, a6).
    """
    ai = tuple(int(a) for a in curve_ai)
    tr = Transform()

    while True:
        a1, a2, a3, a4, a6 = ai
        E = GeneralCurve(*ai)
        b2, b4, b6, b8 = E.b_invariants()
        disc = E.discriminant()
        n = _vq(disc, q)
        if disc == 0:
            raise DomainError("singular curve")
        if n == 0:
            return ReductionData(q=q, kodaira="I0", tamagawa=1,
                                 ord_disc_min=0, u_exponent=_u_exp(tr, q),
                                 transform=tr, minimal=ai, split=None)

        # move the singular point to the origin
        xr, yr = _singular_point(ai, q)
        ai = _int_transform(ai, 1, xr, 0, yr)
        tr = tr.compose(1, xr, 0, yr)
        a1, a2, a3, a4, a6 = ai
        E = GeneralCurve(*ai)
        b2, b4, b6, b8 = E.b_invariants()

        if _vq(b2, q) == 0:
            # multiplicative: I_n; split iff the tangent directions at the
            # node are rational, i.e. T^2 + a1 T - a2 splits over F_q
            roots = _quad_roots_mod_q(1, a1, -a2, q)
            split = len(roots) == 2
            c = n if split else (2 if n % 2 == 0 else 1)
            return ReductionData(q=q, kodaira=f"I{n}", tamagawa=c,
                                 ord_disc_min=n, u_exponent=_u_exp(tr, q),
                                 transform=tr, minimal=ai, split=split)

        if _vq(a6, q) < 2:
            return ReductionData(q=q, kodaira="II", tamagawa=1,
                                 ord_disc_min=n, u_exponent=_u_exp(tr, q),
                                 transform=tr, minimal=ai, split=None)
        if _vq(b8, q) < 3:
            return ReductionData(q=q, kodaira="III", tamagawa=2,
                                 ord_disc_min=n, u_exponent=_u_exp(tr, q),
                                 transform=tr, minimal=ai, split=None)
        if _vq(b6, q) < 3:
            roots = _quad_roots_mod_q(1, a3 // q, -(a6 // (q * q)), q)
            c = 3 if len(roots) == 2 else 1
            return ReductionData(q=q, kodaira="IV", tamagawa=c,
                                 ord_disc_min=n, u_exponent=_u_exp(tr, q),
                                 transform=tr, minimal=ai, split=None)

        # normalise to q|a1,a2; q^2|a3,a4; q^3|a6
        if q == 2:
            s = a2 % 2
        else:
            s = (-a1) * pow(2, -1, q) % q
        ai = _int_transform(ai, 1, 0, s, 0)
        tr = tr.compose(1, 0, s, 0)
        a1, a2, a3, a4, a6 = ai
        if q == 2:
            # need 4 | a3 + 2t and 8 | a6 - t*a3 - t^2 simultaneously
            assert a3 % 2 == 0
            t0 = (-(a3 // 2)) % 2
            for t in (t0, t0 + 2, t0 + 4, t0 + 6):
                trial = transform_quintuple(ai, 1, 0, 0, t)
                if (int(trial[2]) % 4 == 0 and int(trial[4]) % 8 == 0):
                    break
            else:
                raise AssertionError("2-adic normalisation failed")
        else:
            t = (-a3) * pow(2, -1, q * q) % (q * q)
        ai = _int_transform(ai, 1, 0, 0, t)
        tr = tr.compose(1, 0, 0, t)
        a1, a2, a3, a4, a6 = ai
        assert _vq(a1, q) >= 1 and _vq(a2, q) >= 1, "normalisation failed"
        assert _vq(a3, q) >= 2 and _vq(a4, q) >= 2 and _vq(a6, q) >= 3, \
            "normalisation failed"

        # P(T) = T^3 + a2/q T^2 + a4/q^2 T + a6/q^3 mod q
        P = [a6 // q ** 3 % q, a4 // q ** 2 % q, a2 // q % q, 1]
        mult = _multiple_root(P, q)

        if mult is None:
            # P separable: I0*
            Proots = _cubic_roots_mod_q(P, q)
            return ReductionData(q=q, kodaira="I0*", tamagawa=1 + len(Proots),
                                 ord_disc_min=n, u_exponent=_u_exp(tr, q),
                                 transform=tr, minimal=ai, split=None)

        r0, multiplicity = mult

        if multiplicity == 2:
            # I_m*: shift the double root to the origin and loop
            ai = _int_transform(ai, 1, q * r0, 0, 0)
            tr = tr.compose(1, q * r0, 0, 0)
            m, mx, my = 1, q * q, q * q
            while True:
                a1, a2, a3, a4, a6 = ai
                # quadratic in Y: Y^2 + (a3/my) Y - a6/(mx*my)
                assert a3 % my == 0 and a6 % (mx * my) == 0, "I_m* invariant"
                A3t = a3 // my
                A6t = a6 // (mx * my)
                if (A3t * A3t + 4 * A6t) % q:
                    roots = _quad_roots_mod_q(1, A3t, -A6t, q)
                    c = 4 if len(roots) == 2 else 2
                    return ReductionData(
                        q=q, kodaira=f"I{m}*", tamagawa=c, ord_disc_min=n,
                        u_exponent=_u_exp(tr, q), transform=tr, minimal=ai,
                        split=None)
                r = _quad_roots_mod_q(1, A3t, -A6t, q)[0]
                ai = _int_transform(ai, 1, 0, 0, my * r)
                tr = tr.compose(1, 0, 0, my * r)
                my *= q
                m += 1
                a1, a2, a3, a4, a6 = ai
                # quadratic in X: (a2/q) X^2 + (a4/(q*mx)) X + a6/(mx*my)
                assert a4 % (q * mx) == 0 and a6 % (mx * my) == 0, "I_m* invariant"
                A2t = a2 // q
                A4t = a4 // (q * mx)
                A6t = a6 // (mx * my)
                if (A4t * A4t - 4 * A2t * A6t) % q:
                    roots = _quad_roots_mod_q(A2t, A4t, A6t, q)
                    c = 4 if len(roots) == 2 else 2
                    return ReductionData(
                        q=q, kodaira=f"I{m}*", tamagawa=c, ord_disc_min=n,
                        u_exponent=_u_exp(tr, q), transform=tr, minimal=ai,
                        split=None)
                r = _quad_roots_mod_q(A2t, A4t, A6t, q)[0]
                ai = _int_transform(ai, 1, mx * r, 0, 0)
                tr = tr.compose(1, mx * r, 0, 0)
                mx *= q
                m += 1

        # triple root: move it to the origin
        ai = _int_transform(ai, 1, q * r0, 0, 0)
        tr = tr.compose(1, q * r0, 0, 0)
        a1, a2, a3, a4, a6 = ai

        # Y^2 + (a3/q^2) Y - a6/q^4
        A3t = a3 // q ** 2
        A6t = a6 // q ** 4
        if (A3t * A3t + 4 * A6t) % q:
            roots = _quad_roots_mod_q(1, A3t, -A6t, q)
            c = 3 if len(roots) == 2 else 1
            return ReductionData(q=q, kodaira="IV*", tamagawa=c,
                                 ord_disc_min=n, u_exponent=_u_exp(tr, q),
                                 transform=tr, minimal=ai, split=None)
        r = _quad_roots_mod_q(1, A3t, -A6t, q)[0]
        t = q * q * (r if 2 * r < 2 * q else r - q)
        ai = _int_transform(ai, 1, 0, 0, t)
        tr = tr.compose(1, 0, 0, t)
        a1, a2, a3, a4, a6 = ai

        if _vq(a4, q) < 4:
            return ReductionData(q=q, kodaira="III*", tamagawa=2,
                                 ord_disc_min=n, u_exponent=_u_exp(tr, q),
                                 transform=tr, minimal=ai, split=None)
        if _vq(a6, q) < 6:
            return ReductionData(q=q, kodaira="II*", tamagawa=1,
                                 ord_disc_min=n, u_exponent=_u_exp(tr, q),
                                 transform=tr, minimal=ai, split=None)

        # non-minimal: scale and restart
        ai = _int_transform(ai, q, 0, 0, 0)
        tr = tr.compose(q, 0, 0, 0)


def _u_exp(tr: Transform, q) -> int:
    return 0 if tr.u == 1 else padic_val(tr.u, q)


def _int_transform(ai, u, r, s, t):
    out = transform_quintuple(ai, u, r, s, t)
    res = []
    for v in out:
        if v.denominator != 1:
            raise ArithmeticError("non-integral transform")
        res.append(int(v))
    return tuple(res)


def _multiple_root(P, q):
    """(root, multiplicity) of the repeated root of a monic cubic over F_q,
    or None when P is separable.  A repeated root of a cubic with
    coefficients in F_q always lies in F_q."""
    b, c, d = P[2] % q, P[1] % q, P[0] % q
    disc = (18 * b * c * d - 4 * b ** 3 * d + b * b * c * c
            - 4 * c ** 3 - 27 * d * d) % q
    if disc != 0:
        return None
    if q == 3 and b == 0 and c == 0:
        # T^3 + d = (T + d)^3 over F_3: triple root -d = 2d
        return (-d) % 3, 3
    # repeated roots are common roots of P and P' = 3T^2 + 2bT + c
    for r in _quad_roots_mod_q(3, 2 * b, c, q):
        if _eval_mod([d, c, b, 1], r, q) == 0:
            sh = _shift_cubic([d, c, b, 1], r, q)
            multiplicity = 3 if (sh[1] == 0 and sh[2] == 0) else 2
            return r, multiplicity
    return None


def _shift_cubic(P, r, q):
    """Coefficients of P(T + r) mod q."""
    d, c, b, a = P[0], P[1], P[2], P[3]
    nd = (a * r ** 3 + b * r * r + c * r + d) % q
    nc = (3 * a * r * r + 2 * b * r + c) % q
    nb = (3 * a * r + b) % q
    return [nd, nc, nb, a % q]


# ---------------------------------------------------------------------------
# local heights on the minimal model, and per-component corrections
# ---------------------------------------------------------------------------


def _ord_of(v, q):
    """q-adic valuation of a Fraction or PadicNumber, known-exactly."""
    if isinstance(v, PadicNumber):
        return v.known_valuation()
    v = Fraction(v)
    if v == 0:
        raise ZeroDivisionError("valuation of zero")
    return padic_val(v.numerator, q) - padic_val(v.denominator, q)


def minimal_local_height(E: GeneralCurve, q: int, P, cap: int = 40) -> Fraction:
    """lambda_q(P) / log(q) for P != O on the given quintuple model.

    Characterised by: naive value on nonsingular reduction, and the
    quasi-parallelogram rule lambda(mP) = m^2 lambda(P) - 2 log|psi_m(P)|_q.
    """
    x = P[0]
    if not _eqz(x):
        ordx = _ord_of(x, q)
        if ordx < 0:
            return Fraction(-ordx)
    if E.has_nonsingular_reduction(P, q):
        return Fraction(0)
    for m in range(2, cap):
        mP = E.mul(m, P)
        if mP is None:
            # P is m-torsion; (m+1)P = P gives
            # lambda(P) = 2 log|psi_{m+1}(P)|_q / ((m+1)^2 - 1)
            m1 = m + 1
            v = _ord_of(E.psi_value(m1, P), q)
            return Fraction(-2 * v, m1 * m1 - 1)
        if E.has_nonsingular_reduction(mP, q):
            w_m = Fraction(max(0, -_ord_of(mP[0], q)))
            v = _ord_of(E.psi_value(m, P), q)
            return (w_m - 2 * v) / (m * m)
    raise RuntimeError(f"no nonsingular multiple found below {cap}")


def _padic_sqrt_or_none(v: PadicNumber):
    try:
        return v.sqrt()
    except DomainError:
        return None


def _sample_point_near(E: GeneralCurve, q, x0, depth, prec, rng):
    """A point of E(Q_q) with x = x0 + q^depth * unit, or None."""
    u = rng.randrange(1, q ** max(prec - depth, 2))
    if u % q == 0:
        u += 1
    x = PadicNumber.coerce(x0 + u * q ** depth, q, prec)
    A = x * E.a1 + E.a3
    F = ((x + E.a2) * x + E.a4) * x + E.a6
    D = A * A + 4 * F
    if D.is_zero_to_precision():
        return None
    r = _padic_sqrt_or_none(D)
    if r is None:
        return None
    sign = 1 if rng.random() < 0.5 else -1
    y = (-A + sign * r) / 2
    return (x, y)


def component_corrections(red: ReductionData, max_trials: int = 4000):
    """Values of the local height (as Fractions, coefficients of log q) on
    the non-identity component classes of E(Q_q)/E0(Q_q) for the minimal
    model, found by sampling; plus whether the identity component carries
    integral points.

    The Tamagawa number says exactly how many classes must be found.
    """
    q = red.q
    E = GeneralCurve(*red.minimal)
    c = red.tamagawa

    if q <= 3000:
        has_affine_smooth = any(
            not E.is_singular_residue(q, xr, yr)
            for xr in range(q) for yr in range(q)
            if (yr * yr + E.a1 * xr * yr + E.a3 * yr
                - (xr ** 3 + E.a2 * xr * xr + E.a4 * xr + E.a6)) % q == 0)
    else:
        has_affine_smooth = True  # q - O(sqrt q) smooth affine points

    if c == 1:
        return [], has_affine_smooth

    x0, y0 = _singular_point(red.minimal, q)
    prec = 2 * max(red.ord_disc_min, 4) + 28
    rng = random.Random(f"wq:{q}:{red.minimal}")
    reps = []
    values = []
    depth_hi = red.ord_disc_min + 2
    trials = 0
    while len(reps) < c - 1 and trials < max_trials:
        trials += 1
        depth = 1 + (trials % depth_hi) if trials % 3 else rng.randrange(1, depth_hi + 1)
        P = _sample_point_near(E, q, x0, depth, prec, rng)
        if P is None:
            continue
        try:
            if E.has_nonsingular_reduction(P, q):
                continue
            new = True
            for R in reps:
                diff = E.add(P, E.neg(R))
                if diff is None or E.has_nonsingular_reduction(diff, q):
                    new = False
                    break
            if not new:
                continue
            w = minimal_local_height(E, q, P, cap=c + 3)
        except (PrecisionError, ZeroDivisionError):
            continue
        reps.append(P)
        values.append(w)
    if len(reps) != c - 1:
        raise RuntimeError(
            f"found {len(reps)} of {c - 1} component classes at q={q}; "
            "raise sampling budget")
    return sorted(set(values)), has_affine_smooth


def tate_reduction(curve: WeierstrassCurve, q: int,
                   with_corrections: bool = True) -> ReductionData:
    """Full local data of a short-model curve at q."""
    red = tate_algorithm((0, curve.A2, 0, curve.A4, curve.A6), q)
    if with_corrections:
        vals, has0 = component_corrections(red) if not red.good else ([], True)
        red.component_corrections = vals
        red.identity_has_integral_points = has0
    return red


def bad_primes_of(curve: WeierstrassCurve):
    """Primes dividing the discriminant of the given model, ascending."""
    d = abs(curve.discriminant())
    return sorted(sympy.factorint(d).keys())
