"""Elliptic curves y^2 = x^3 + A2 x^2 + A4 x + A6 over Q, Q_p, F_l and
truncated-series rings: group law, division polynomials, formal-group
expansions, point counting with group structure, reduction orders."""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, RecenterRequired
from .padic import PadicNumber, _sqrt_mod_p, padic_val
from .series import LogLaurent, TruncatedSeries


class WeierstrassCurve:
    """Integral short-form model (no xy or y terms)."""

    __slots__ = ("A2", "A4", "A6", "_psi_cache")

    def __init__(self, A2, A4, A6):
        self.A2, self.A4, self.A6 = int(A2), int(A4), int(A6)
        if self.discriminant() == 0:
            raise DomainError("singular cubic")
        self._psi_cache = {}

    def b_invariants(self):
        b2 = 4 * self.A2
        b4 = 2 * self.A4
        b6 = 4 * self.A6
        b8 = 4 * self.A2 * self.A6 - self.A4 ** 2
        return b2, b4, b6, b8

    def discriminant(self) -> int:
        b2, b4, b6, b8 = (4 * self.A2, 2 * self.A4, 4 * self.A6,
                          4 * self.A2 * self.A6 - self.A4 ** 2)
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def rhs(self, x):
        return ((x + self.A2) * x + self.A4) * x + self.A6

    def rhs_derivative(self, x):
        return (3 * x + 2 * self.A2) * x + self.A4

    def is_on_curve(self, P) -> bool:
        if P.infinity:
            return True
        d = P.y * P.y - self.rhs(P.x)
        return _is_zeroish(d)

    def __repr__(self):
        return f"y^2 = x^3 + {self.A2}*x^2 + {self.A4}*x + {self.A6}"

    def __eq__(self, other):
        return (isinstance(other, WeierstrassCurve)
                and (self.A2, self.A4, self.A6) == (other.A2, other.A4, other.A6))

    def __hash__(self):
        return hash((self.A2, self.A4, self.A6))


class CurvePoint:
    __slots__ = ("infinity", "x", "y")

    def __init__(self, x=None, y=None, infinity=False):
        self.infinity = infinity
        self.x = x
        self.y = y

    @staticmethod
    def at_infinity():
        return CurvePoint(infinity=True)

    def __repr__(self):
        return "O" if self.infinity else f"({self.x}, {self.y})"


INFTY = CurvePoint.at_infinity()


def _is_zeroish(v) -> bool:
    if isinstance(v, PadicNumber):
        return v.is_zero_to_precision()
    if isinstance(v, TruncatedSeries):
        return all(c.is_zero_to_precision() for c in v.coeffs)
    return v == 0


def ec_neg(P: CurvePoint) -> CurvePoint:
    if P.infinity:
        return P
    return CurvePoint(P.x, -P.y)


def ec_add(curve: WeierstrassCurve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    if P.infinity:
        return Q
    if Q.infinity:
        return P
    same_x = _is_zeroish(P.x - Q.x)
    try:
        if same_x:
            if _is_zeroish(P.y + Q.y):
                return INFTY
            num = (3 * P.x + 2 * curve.A2) * P.x + curve.A4
            slope = num / (2 * P.y)
        else:
            slope = (Q.y - P.y) / (Q.x - P.x)
    except DomainError as e:
        raise RecenterRequired(f"non-unit denominator in series group law: {e}")
    x3 = slope * slope - curve.A2 - P.x - Q.x
    y3 = slope * (P.x - x3) - P.y
    return CurvePoint(x3, y3)


def ec_mul(curve: WeierstrassCurve, n: int, P: CurvePoint) -> CurvePoint:
    if n < 0:
        return ec_mul(curve, -n, ec_neg(P))
    R = INFTY
    add = P
    while n:
        if n & 1:
            R = ec_add(curve, R, add)
        n >>= 1
        if n:
            add = ec_add(curve, add, add)
    return R


def rational_point(x, y) -> CurvePoint:
    return CurvePoint(Fraction(x), Fraction(y))


def padic_point(curve: WeierstrassCurve, x, y, p, absprec) -> CurvePoint:
    return CurvePoint(PadicNumber.coerce(x, p, absprec),
                      PadicNumber.coerce(y, p, absprec))


# ---------------------------------------------------------------------------
# division polynomials
# ---------------------------------------------------------------------------
# Representation: psi_m = a_m(x) * y^(1 if m even else 0), with a_m an
# integer polynomial (ascending coefficient lists).


def _padd(f, g):
    n = max(len(f), len(g))
    return [(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
            for i in range(n)]


def _psub(f, g):
    return _padd(f, [-c for c in g])


def _pmul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] += a * b
    return out


def _pscale(f, c):
    return [c * a for a in f]


def _pdiv_exact_int(f, d):
    assert all(a % d == 0 for a in f)
    return [a // d for a in f]


def division_polynomial(curve: WeierstrassCurve, m: int):
    """(a_m, parity): psi_m = a_m(x) * y^parity, parity = m+1 mod 2."""
    if m < 0:
        a, par = division_polynomial(curve, -m)
        return _pscale(a, -1), par
    cache = curve._psi_cache
    if m in cache:
        return cache[m]
    b2, b4, b6, b8 = curve.b_invariants()
    R = [curve.A6, curve.A4, curve.A2, 1]  # rhs(x)
    if m == 0:
        res = ([], 1)
    elif m == 1:
        res = ([1], 0)
    elif m == 2:
        res = ([2], 1)
    elif m == 3:
        res = ([b8, 3 * b6, 3 * b4, b2, 3], 0)
    elif m == 4:
        res = (_pscale([b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8,
                        10 * b6, 5 * b4, b2, 2], 2), 1)
    elif m % 2 == 1:
        k = (m - 1) // 2
        ak2, _ = division_polynomial(curve, k + 2)
        ak, _ = division_polynomial(curve, k)
        ak1, _ = division_polynomial(curve, k + 1)
        akm1, _ = division_polynomial(curve, k - 1)
        t1 = _pmul(ak2, _pmul(ak, _pmul(ak, ak)))
        t2 = _pmul(akm1, _pmul(ak1, _pmul(ak1, ak1)))
        R2 = _pmul(R, R)
        if k % 2 == 0:
            a = _psub(_pmul(R2, t1), t2)
        else:
            a = _psub(t1, _pmul(R2, t2))
        res = (a, 0)
    else:
        k = m // 2
        ak, _ = division_polynomial(curve, k)
        ak2, _ = division_polynomial(curve, k + 2)
        akm1, _ = division_polynomial(curve, k - 1)
        akm2, _ = division_polynomial(curve, k - 2)
        ak1, _ = division_polynomial(curve, k + 1)
        inner = _psub(_pmul(ak2, _pmul(akm1, akm1)),
                      _pmul(akm2, _pmul(ak1, ak1)))
        res = (_pdiv_exact_int(_pmul(ak, inner), 2), 1)
    cache[m] = res
    return res


def psi_squared_x_poly(curve: WeierstrassCurve, m: int):
    """psi_m^2 as a polynomial in x only."""
    a, parity = division_polynomial(curve, m)
    sq = _pmul(a, a)
    if parity:
        sq = _pmul(sq, [curve.A6, curve.A4, curve.A2, 1])
    return sq


def _eval_poly(coeffs, x):
    acc = None
    for c in reversed(coeffs):
        acc = c if acc is None else acc * x + c
    if acc is None:
        return 0 * x if not isinstance(x, (int, Fraction)) else 0
    return acc


def psi_eval(curve: WeierstrassCurve, m: int, P: CurvePoint):
    """psi_m(P) in the coordinate ring of P."""
    a, parity = division_polynomial(curve, m)
    v = _eval_poly(a, P.x)
    if parity:
        v = v * P.y
    return v


def psi_log_derivative(curve: WeierstrassCurve, m: int, P: CurvePoint):
    """(D psi_m / psi_m)(P) where D = 2y d/dx + (3x^2+2A2x+A4) d/dy."""
    a, parity = division_polynomial(curve, m)
    ap = [i * c for i, c in enumerate(a)][1:]
    x, y = P.x, P.y
    av = _eval_poly(a, x)
    apv = _eval_poly(ap, x)
    if parity == 0:
        return (2 * y * apv) / av
    # psi = y*a: D psi = 2y^2 a' + R'(x) a = 2 R a' + R' a
    Rv = curve.rhs(x)
    Rpv = curve.rhs_derivative(x)
    return (2 * Rv * apv + Rpv * av) / (y * av)


# ---------------------------------------------------------------------------
# formal group
# ---------------------------------------------------------------------------


class FormalGroupData:
    """Expansions in t = -x/y: x(t), y(t), omega = f(t) dt, Log = integral."""

    __slots__ = ("curve", "p", "prec", "x", "y", "f", "log_series")

    def __init__(self, curve, p, prec, x, y, f, log_series):
        self.curve = curve
        self.p = p
        self.prec = prec
        self.x = x            # LogLaurent, pole order 2
        self.y = y            # LogLaurent, pole order 3
        self.f = f            # TruncatedSeries, unit constant term
        self.log_series = log_series  # TruncatedSeries, t + O(t^2)


def formal_expansion(curve: WeierstrassCurve, p: int, prec: int,
                     absprec: int) -> FormalGroupData:
    """Solve w = t^3 + A2 t^2 w + A4 t w^2 + A6 w^3 by fixed-point iteration
    (w = -1/y, t = -x/y), then x = t/w, y = -1/w."""
    if prec < 5:
        raise DomainError("need truncation order >= 5")
    wprec = prec + 4
    A2 = TruncatedSeries.from_exact(p, [curve.A2], wprec, absprec)
    A4 = TruncatedSeries.from_exact(p, [curve.A4], wprec, absprec)
    A6 = TruncatedSeries.from_exact(p, [curve.A6], wprec, absprec)
    t3 = TruncatedSeries.from_exact(p, [0, 0, 0, 1], wprec, absprec)
    t2 = TruncatedSeries.from_exact(p, [0, 0, 1], wprec, absprec)
    t1 = TruncatedSeries.from_exact(p, [0, 1], wprec, absprec)
    w = t3
    for _ in range(wprec):
        w2 = (w * w).truncate(wprec)
        w3 = (w2 * w).truncate(wprec)
        w = (t3 + (A2 * t2 * w).truncate(wprec)
             + (A4 * t1 * w2).truncate(wprec) + (A6 * w3).truncate(wprec))
        w = w.truncate(wprec)
    u = w.unshift(3)                      # unit series w/t^3
    uinv = u.inverse()
    x = LogLaurent(p, -2, uinv.truncate(prec + 2))
    y = LogLaurent(p, -3, -uinv.truncate(prec + 3))
    xp = laurent_derivative(x)
    f_laurent = laurent_ratio(xp, y * 2)
    f = f_laurent.to_series().truncate(prec)
    log_series = f.integrate().truncate(prec + 1)
    return FormalGroupData(curve, p, prec, x, y, f, log_series)


def laurent_derivative(L: LogLaurent) -> LogLaurent:
    if L.log_coeff != 0:
        raise DomainError("derivative of log term not supported here")
    coeffs = [(L.shift + n) * c for n, c in enumerate(L.series.coeffs)]
    return LogLaurent(L.p, L.shift - 1, TruncatedSeries(L.p, coeffs, L.series.prec))


def laurent_ratio(num: LogLaurent, den: LogLaurent) -> LogLaurent:
    if num.log_coeff != 0 or den.log_coeff != 0:
        raise DomainError("ratio of log-bearing expansions")
    den = den.normalised()
    v = den.series.t_valuation()
    if v > 0:
        den = LogLaurent(den.p, den.shift + v, den.series.unshift(v))
    inv = LogLaurent(den.p, -den.shift, den.series.inverse())
    return num * inv


# ---------------------------------------------------------------------------
# finite-field side
# ---------------------------------------------------------------------------


class FiniteCurveGroup:
    """E(F_l) with explicit coordinates: order n = d1*d2, structure
    Z/d1 x Z/d2 (d1 | d2), a verified basis, and O(1) discrete logs."""

    def __init__(self, curve: WeierstrassCurve, ell: int):
        if curve.discriminant() % ell == 0:
            raise DomainError(f"bad reduction at {ell}")
        self.curve = curve
        self.ell = ell
        self.points = self._enumerate()
        self.n = len(self.points)
        self._build_structure()

    # points are tuples (x, y) with 0 <= x, y < ell, or None for infinity

    def _enumerate(self):
        ell, c = self.ell, self.curve
        pts = [None]
        for x in range(ell):
            r = c.rhs(x) % ell
            if r == 0:
                pts.append((x, 0))
            elif pow(r, (ell - 1) // 2, ell) == 1:
                y = _sqrt_mod_p(r, ell)
                pts.append((x, y))
                pts.append((x, ell - y))
        return pts

    def add(self, P, Q):
        ell, c = self.ell, self.curve
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2) % ell == 0:
                return None
            num = (3 * x1 * x1 + 2 * c.A2 * x1 + c.A4) % ell
            slope = num * pow(2 * y1 % ell, -1, ell) % ell
        else:
            slope = (y2 - y1) * pow((x2 - x1) % ell, -1, ell) % ell
        x3 = (slope * slope - c.A2 - x1 - x2) % ell
        y3 = (slope * (x1 - x3) - y1) % ell
        return (x3, y3)

    def neg(self, P):
        if P is None:
            return None
        return (P[0], (self.ell - P[1]) % self.ell)

    def mul(self, k, P):
        if k < 0:
            return self.mul(-k, self.neg(P))
        R, add = None, P
        while k:
            if k & 1:
                R = self.add(R, add)
            k >>= 1
            if k:
                add = self.add(add, add)
        return R

    def order_of(self, P):
        n = self.n
        o = n
        for q in _prime_factors(n):
            while o % q == 0 and self.mul(o // q, P) is None:
                o //= q
        return o

    def _build_structure(self):
        n = self.n
        # exponent d2 = lcm of element orders; scan points (group is tiny)
        d2 = 1
        best = None
        for P in self.points:
            o = self.order_of(P)
            d2 = d2 * o // _gcd(d2, o)
            if o == d2:
                best = P
            if d2 == n:
                break
        # a point of exact order d2 exists; find one
        if best is None or self.order_of(best) != d2:
            for P in self.points:
                if self.order_of(P) == d2:
                    best = P
                    break
        self.d2 = d2
        self.d1 = n // d2
        self.g2 = best
        if self.d1 == 1:
            self.g1 = None
            self._coords = {}
            acc = None
            for j in range(d2):
                self._coords[acc] = (0, j)
                acc = self.add(acc, self.g2)
            return
        # find g1 whose class mod <g2> has order d1, with trivial intersection
        H = {}
        acc = None
        for j in range(d2):
            H[acc] = j
            acc = self.add(acc, self.g2)
        for P in self.points:
            if P in H:
                continue
            k = 1
            Q = P
            while Q not in H:
                Q = self.add(Q, P)
                k += 1
            if k != self.d1:
                continue
            s = H[Q]  # d1 * P = s * g2
            if s % self.d1 != 0:
                continue
            G1 = self.add(P, self.mul(-(s // self.d1), self.g2))
            coords = {}
            ok = True
            accI = None
            for i in range(self.d1):
                accJ = accI
                for j in range(d2):
                    if accJ in coords:
                        ok = False
                        break
                    coords[accJ] = (i, j)
                    accJ = self.add(accJ, self.g2)
                if not ok:
                    break
                accI = self.add(accI, G1)
            if ok and len(coords) == n:
                self.g1 = G1
                self._coords = coords
                return
        raise RuntimeError("could not find a basis for E(F_l)")  # unreachable

    def dlog(self, P):
        """(i, j) with P = i*g1 + j*g2."""
        return self._coords[P]

    def reduce_point(self, P: CurvePoint):
        """Reduction of a rational point; None (infinity) when a denominator
        is divisible by l."""
        if P.infinity:
            return None
        x, y = Fraction(P.x), Fraction(P.y)
        if x.denominator % self.ell == 0 or y.denominator % self.ell == 0:
            return None
        ell = self.ell
        xr = x.numerator * pow(x.denominator, -1, ell) % ell
        yr = y.numerator * pow(y.denominator, -1, ell) % ell
        return (xr, yr)


def count_points(curve: WeierstrassCurve, ell: int):
    """(#E(F_l), (d1, d2)) with Z/d1 x Z/d2 structure, d1 | d2."""
    G = FiniteCurveGroup(curve, ell)
    return G.n, (G.d1, G.d2)


def trace_of_frobenius(curve: WeierstrassCurve, ell: int) -> int:
    n, _ = count_points(curve, ell)
    return ell + 1 - n


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# reduction order
# ---------------------------------------------------------------------------


def reduce_mod_p(P: CurvePoint, p: int):
    """Image in E(F_p) for a point over Q or Q_p; None for the disc of
    infinity."""
    if P.infinity:
        return None
    x, y = P.x, P.y
    if isinstance(x, PadicNumber):
        if x.is_zero_to_precision():
            xr = 0
        elif x.known_valuation() < 0:
            return None
        else:
            xr = x.lift(1)
        yr = 0 if y.is_zero_to_precision() else y.lift(1)
        return (xr % p, yr % p)
    x, y = Fraction(x), Fraction(y)
    if x.denominator % p == 0:
        return None
    return (x.numerator * pow(x.denominator, -1, p) % p,
            y.numerator * pow(y.denominator, -1, p) % p)


def order_of_reduction(curve: WeierstrassCurve, P: CurvePoint, p: int) -> int:
    """Smallest m >= 1 with mP in the formal group at p (good reduction)."""
    if curve.discriminant() % p == 0:
        raise DomainError(f"bad reduction at {p}")
    Pbar = reduce_mod_p(P, p)
    if Pbar is None:
        return 1
    G = FiniteCurveGroup(curve, p)
    return G.order_of(Pbar)
