"""Precision-tracked arithmetic in Q_p.

Elements carry an explicit absolute precision: x is known modulo p^absprec.
Propagation is never optimistic (add: min of absprecs; mul: min of
val(a)+absprec(b), val(b)+absprec(a)).  An exact zero is a distinct state
from "indistinguishable from zero at this precision".
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError, PrecisionError

INF = float("inf")


def padic_val(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicNumber:
    """An element of Q_p known modulo p^absprec.

    Stored as p^val * unit with unit reduced modulo p^(absprec - val) and
    coprime to p.  unit == 0 encodes "zero modulo p^absprec" (valuation is
    only known to be >= absprec); exact zeros use the dedicated flag.
    """

    __slots__ = ("p", "_val", "unit", "absprec", "exact_zero")

    def __init__(self, p, val, unit, absprec, exact_zero=False):
        self.p = p
        self.exact_zero = exact_zero
        if exact_zero:
            self._val = 0
            self.unit = 0
            self.absprec = absprec if absprec is not None else 0
            return
        absprec = int(absprec)
        if unit == 0:
            self._val = absprec
            self.unit = 0
            self.absprec = absprec
            return
        relprec = absprec - val
        if relprec <= 0:
            # all information truncated away: an inexact zero
            self._val = absprec
            self.unit = 0
            self.absprec = absprec
            return
        unit %= p ** relprec
        if unit == 0:
            self._val = absprec
            self.unit = 0
            self.absprec = absprec
            return
        if unit % p == 0:
            # normalise: absorb p-powers into val
            shift = padic_val(unit, p)
            val += shift
            unit //= p ** shift
            relprec = absprec - val
            unit %= p ** relprec
        self._val = val
        self.unit = unit
        self.absprec = absprec

    # ----- constructors -------------------------------------------------

    @staticmethod
    def zero(p) -> "PadicNumber":
        return PadicNumber(p, 0, 0, 0, exact_zero=True)

    @staticmethod
    def from_int(n, p, absprec) -> "PadicNumber":
        if n == 0:
            return PadicNumber.zero(p)
        v = padic_val(n, p)
        return PadicNumber(p, v, n // p ** v, absprec)

    @staticmethod
    def from_fraction(x, p, absprec) -> "PadicNumber":
        x = Fraction(x)
        if x == 0:
            return PadicNumber.zero(p)
        num, den = x.numerator, x.denominator
        v = 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        relprec = absprec - v
        if relprec <= 0:
            return PadicNumber(p, absprec, 0, absprec)
        m = p ** relprec
        unit = num * pow(den, -1, m) % m
        return PadicNumber(p, v, unit, absprec)

    @staticmethod
    def coerce(x, p, absprec) -> "PadicNumber":
        if isinstance(x, PadicNumber):
            if x.p != p:
                raise ValueError("prime mismatch")
            return x
        if isinstance(x, int):
            return PadicNumber.from_int(x, p, absprec)
        if isinstance(x, Fraction):
            return PadicNumber.from_fraction(x, p, absprec)
        raise TypeError(f"cannot coerce {type(x)} to PadicNumber")

    # ----- basic queries ------------------------------------------------

    @property
    def val(self):
        """Valuation: INF for an exact zero, absprec for an inexact zero
        (the true valuation is only known to be >= absprec)."""
        if self.exact_zero:
            return INF
        return self._val

    def relprec(self) -> int:
        if self.exact_zero:
            return 0
        return self.absprec - self._val

    def is_exact_zero(self) -> bool:
        return self.exact_zero

    def is_zero_to_precision(self) -> bool:
        """True when nothing distinguishes this element from zero."""
        return self.exact_zero or self.unit == 0

    def is_unit(self) -> bool:
        return (not self.is_zero_to_precision()) and self._val == 0

    def known_valuation(self) -> int:
        """Valuation, raising if the element could be zero."""
        if self.is_zero_to_precision():
            raise PrecisionError("valuation of (possible) zero requested")
        return self._val

    def lift(self, k=None) -> int:
        """Integer congruent to self modulo p^k (k defaults to absprec).

        Requires val >= 0 and absprec >= k.
        """
        if k is None:
            k = self.absprec if not self.exact_zero else 0
        if self.exact_zero:
            return 0
        if self._val < 0:
            raise DomainError("lift of a non-integral element")
        if self.absprec < k:
            raise PrecisionError(f"known mod p^{self.absprec}, need mod p^{k}")
        return self.unit * self.p ** self._val % self.p ** k if self.unit else 0

    def as_fraction_approx(self) -> Fraction:
        """Smallest-height representative of the known residue (diagnostics)."""
        if self.is_zero_to_precision():
            return Fraction(0)
        return Fraction(self.unit * Fraction(self.p) ** self._val)

    # ----- arithmetic ---------------------------------------------------

    def _coerce_other(self, other):
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError("prime mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            # exact inputs: give them enough precision to be harmless
            target = (self.absprec if not self.exact_zero else 0) + 2
            if isinstance(other, int):
                if other == 0:
                    return PadicNumber.zero(self.p)
                v = padic_val(other, self.p)
                return PadicNumber.from_int(other, self.p, v + max(self.relprec(), target, 1))
            if other == 0:
                return PadicNumber.zero(self.p)
            v = padic_val(other.numerator, self.p) - padic_val(other.denominator, self.p)
            return PadicNumber.from_fraction(other, self.p, v + max(self.relprec(), target, 1))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return NotImplemented
        if self.exact_zero:
            return other
        if other.exact_zero:
            return self
        n = min(self.absprec, other.absprec)
        m = min(self._val, other._val)
        if n <= m:
            return PadicNumber(self.p, n, 0, n)
        # scale by p^-m so both sides are integral, add, scale back
        mod = self.p ** (n - m)
        a = self.unit * self.p ** (self._val - m) % mod if self.unit else 0
        b = other.unit * self.p ** (other._val - m) % mod if other.unit else 0
        s = (a + b) % mod
        if s == 0:
            return PadicNumber(self.p, n, 0, n)
        v = padic_val(s, self.p)
        return PadicNumber(self.p, m + v, s // self.p ** v, n)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        if self.exact_zero:
            return self
        if self.unit == 0:
            return self
        rel = self.relprec()
        return PadicNumber(self.p, self._val, (-self.unit) % self.p ** rel, self.absprec)

    def __sub__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return NotImplemented
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return NotImplemented
        if self.exact_zero or other.exact_zero:
            return PadicNumber.zero(self.p)
        val = self._val + other._val
        rel = min(self.relprec(), other.relprec())
        if rel <= 0 or self.unit == 0 or other.unit == 0:
            return PadicNumber(self.p, val, 0, val)
        unit = self.unit * other.unit % self.p ** rel
        return PadicNumber(self.p, val, unit, val + rel)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return NotImplemented
        if other.exact_zero:
            raise ZeroDivisionError("division by exact zero")
        if other.unit == 0:
            raise PrecisionError("division by an element indistinguishable from 0")
        if self.exact_zero:
            return self
        val = self._val - other._val
        rel = min(self.relprec(), other.relprec())
        if rel <= 0 or self.unit == 0:
            return PadicNumber(self.p, val, 0, val)
        m = self.p ** rel
        unit = self.unit * pow(other.unit, -1, m) % m
        return PadicNumber(self.p, val, unit, val + rel)

    def __rtruediv__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__truediv__(self)

    def __pow__(self, e: int):
        if e == 0:
            return PadicNumber.from_int(1, self.p, self.relprec() or 1)
        if e < 0:
            inv = PadicNumber.from_int(1, self.p, self.relprec() or 1) / self
            return inv ** (-e)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # ----- predicates on pairs -------------------------------------------

    def agrees_with(self, other, k=None) -> bool:
        """True when self - other is zero modulo p^k (default: joint precision)."""
        other = self._coerce_other(other)
        d = self - other
        if d.is_zero_to_precision():
            return True if k is None else d.absprec >= k or d.exact_zero
        if k is None:
            return False
        return d._val >= k

    # ----- functions -----------------------------------------------------

    def sqrt(self) -> "PadicNumber":
        """A square root (Hensel), DomainError if none exists in Q_p."""
        p = self.p
        if self.exact_zero:
            return self
        if self.unit == 0:
            raise PrecisionError("sqrt of an element indistinguishable from 0")
        if self._val % 2 != 0:
            raise DomainError("odd valuation: no square root in Q_p")
        rel = self.relprec()
        u = self.unit % p ** rel
        if p != 2:
            r = pow(u, (p + 1) // 4, p) if p % 4 == 3 else _sqrt_mod_p(u % p, p)
            if r is None or r * r % p != u % p:
                raise DomainError("unit part is not a quadratic residue")
            # Newton lift to p^rel
            m = p
            while m < p ** rel:
                m = min(m * m, p ** rel)
                r = (r + u * pow(r, -1, m)) * pow(2, -1, m) % m
            return PadicNumber(p, self._val // 2, r, self._val // 2 + rel)
        # p = 2: unit square roots exist iff u = 1 mod 8; one bit of precision lost
        if rel < 3:
            raise PrecisionError("need at least 3 known bits for a 2-adic sqrt")
        if u % 8 != 1:
            raise DomainError("unit part is not a 2-adic square")
        out_rel = rel - 1
        m = 2 ** (out_rel + 1)
        r = 1
        k = 3
        while k <= out_rel + 1:
            # maintain r^2 = u mod 2^k, adjust bit by bit
            if (r * r - u) % 2 ** (k + 1):
                r = (r + 2 ** (k - 1)) % m
            k += 1
        r %= 2 ** out_rel
        if r % 2 == 0:
            r = (2 ** out_rel - r) % 2 ** out_rel
        return PadicNumber(2, self._val // 2, r, self._val // 2 + out_rel)

    def iwasawa_log(self) -> "PadicNumber":
        """p-adic logarithm of the unit part; the branch with log(p) = 0."""
        p = self.p
        if p == 2:
            raise DomainError("Iwasawa log unsupported at p = 2")
        if self.is_zero_to_precision():
            if self.exact_zero:
                raise DomainError("log of zero")
            raise PrecisionError("log of an element indistinguishable from 0")
        rel = self.relprec()
        if rel <= 0:
            raise PrecisionError("no known digits")
        # log depends only on the unit; reduce to 1 + (p-adically small)
        u = PadicNumber(p, 0, self.unit, rel)
        w = u ** (p - 1) - 1
        if w.is_zero_to_precision():
            return PadicNumber(p, w.absprec, 0, w.absprec)
        acc = PadicNumber(p, rel, 0, rel)
        term = PadicNumber.from_int(1, p, rel + _log_slack(rel, p))
        n = 1
        # ord(w^n/n) >= n - floor(log_p n), increasing: safe cutoff
        while n - _ilog(n, p) < rel + 1:
            term = term * w
            contrib = term / n
            acc = acc + (contrib if n % 2 else -contrib)
            n += 1
        return acc / (p - 1)

    # ----- dunder plumbing ------------------------------------------------

    def __repr__(self):
        if self.exact_zero:
            return f"0 (exact, p={self.p})"
        if self.unit == 0:
            return f"O({self.p}^{self.absprec})"
        return f"{self.p}^{self._val}*{self.unit} + O({self.p}^{self.absprec})"


def _ilog(n: int, p: int) -> int:
    """floor(log_p(n)) for n >= 1, exactly."""
    e = 0
    q = p
    while q <= n:
        q *= p
        e += 1
    return e


def _log_slack(rel: int, p: int) -> int:
    return _ilog(max(rel, 1), p) + 3


def _sqrt_mod_p(a: int, p: int):
    """Tonelli-Shanks; None if a is a non-residue."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q*2^s
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return r


# ---------------------------------------------------------------------------
# polynomial root enumeration modulo p^k and Hensel certification
# ---------------------------------------------------------------------------


def _poly_to_int_mod(coeffs, p: int, k: int):
    """Scale a PadicNumber polynomial by its content and reduce mod p^k.

    Returns (int coefficient list, content valuation).  Raises
    PrecisionError when a coefficient's precision cannot support the
    reduction, per the normalisation rule: divide out the minimal
    coefficient valuation first.
    """
    vals = []
    for c in coeffs:
        if isinstance(c, PadicNumber):
            if c.exact_zero:
                vals.append(INF)
            elif c.unit == 0:
                vals.append(("unknown", c.absprec))
            else:
                vals.append(c._val)
        else:
            c = Fraction(c)
            vals.append(INF if c == 0 else
                        padic_val(c.numerator, p) - padic_val(c.denominator, p))
    known = [v for v in vals if not isinstance(v, tuple) and v != INF]
    if not known:
        raise PrecisionError("polynomial is indistinguishable from 0")
    kmin = min(known)
    for v in vals:
        if isinstance(v, tuple) and v[1] < kmin:
            raise PrecisionError(
                "cannot determine polynomial content: a coefficient is only "
                f"known to be O(p^{v[1]}) with p^{kmin} content candidate")
    m = p ** k
    out = []
    for c in coeffs:
        if isinstance(c, PadicNumber):
            if c.is_zero_to_precision():
                if not c.exact_zero and c.absprec - kmin < k:
                    raise PrecisionError("coefficient too imprecise after normalisation")
                out.append(0)
            else:
                if c.absprec - kmin < k:
                    raise PrecisionError("coefficient too imprecise after normalisation")
                out.append(c.unit * p ** (c._val - kmin) % m)
        else:
            c = Fraction(c)
            if c == 0:
                out.append(0)
            else:
                scaled = c / Fraction(p) ** kmin
                out.append(scaled.numerator * pow(scaled.denominator, -1, m) % m)
    if all(v == 0 for v in out):
        raise PrecisionError(
            f"polynomial vanishes modulo p^{k} after normalisation; "
            "raise the truncation order or working precision")
    return out, kmin


def _eval_int_poly(coeffs, x: int, m: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % m
    return acc


def roots_mod_pk(coeffs, p: int, k: int):
    """All residues r in Z/p^k with f(r) = 0 mod p^k, ascending.

    The polynomial is first normalised by its content.  Exhaustive
    branch-and-lift; exact, no Hensel assumptions.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    ints, _ = _poly_to_int_mod(coeffs, p, k)
    level = [r for r in range(p) if _eval_int_poly(ints, r, p) == 0]
    mod = p
    for j in range(1, k):
        mod *= p
        nxt = []
        for r in level:
            for s in range(p):
                cand = r + s * (mod // p)
                if _eval_int_poly(ints, cand, mod) == 0:
                    nxt.append(cand)
        level = nxt
    return sorted(level)


class HenselResult:
    """Outcome of the unique-lifting test for a residue root."""

    __slots__ = ("certified", "residue", "modulus_exponent")

    def __init__(self, certified, residue, modulus_exponent):
        self.certified = certified
        self.residue = residue
        self.modulus_exponent = modulus_exponent

    def __repr__(self):
        if self.certified:
            return f"unique lift = {self.residue} mod p^{self.modulus_exponent}"
        return f"uncertified root {self.residue}"


def hensel_certify(coeffs, r: int, p: int, s: int) -> HenselResult:
    """Certify that a root r of f modulo p^s lifts uniquely to Z_p.

    Criterion: f'(r) is a unit modulo p^ceil(s/2) (equivalently
    2*ord(f'(r)) < s), in which case the lift is unique and congruent to
    r modulo p^(s - ord(f'(r))).
    """
    ints, _ = _poly_to_int_mod(coeffs, p, s)
    m = p ** s
    if _eval_int_poly(ints, r, m) != 0:
        raise ValueError("r is not a root modulo p^s")
    deriv = [(i * c) % m for i, c in enumerate(ints)][1:]
    fpr = _eval_int_poly(deriv, r, m)
    half = -(-s // 2)  # ceil(s/2)
    if fpr % p ** half == 0:
        return HenselResult(False, r, s)
    e = padic_val(fpr % m, p)
    return HenselResult(True, r % p ** (s - e), s - e)
