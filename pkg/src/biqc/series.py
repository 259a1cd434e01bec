"""Truncated power series over Q_p, with optional poles and log terms.

TruncatedSeries is exact modulo (t^prec, coefficient precision).  LogLaurent
adds a bounded pole order and a rational multiple of log(t); the log
coefficients of the quadratic Chabauty terms are tracked exactly as
Fractions so their cancellation can be asserted, never floating through
p-adic approximation.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, PrecisionError
from .padic import PadicNumber, _ilog

INF = float("inf")


def _coerce_coeff(x, p, absprec):
    if isinstance(x, PadicNumber):
        return x
    return PadicNumber.coerce(Fraction(x) if not isinstance(x, int) else x, p, absprec)


class TruncatedSeries:
    """Power series sum c_n t^n, n < prec, coefficients in Q_p."""

    __slots__ = ("p", "prec", "coeffs")

    def __init__(self, p, coeffs, prec=None):
        self.p = p
        if prec is None:
            prec = len(coeffs)
        self.prec = prec
        cs = list(coeffs)[:prec]
        while len(cs) < prec:
            cs.append(PadicNumber.zero(p))
        self.coeffs = cs

    @staticmethod
    def from_exact(p, values, prec, absprec):
        return TruncatedSeries(p, [_coerce_coeff(v, p, absprec) for v in values], prec)

    @staticmethod
    def zero(p, prec):
        return TruncatedSeries(p, [], prec)

    @staticmethod
    def one(p, prec, absprec):
        return TruncatedSeries.from_exact(p, [1], prec, absprec)

    @staticmethod
    def identity(p, prec, absprec):
        """The series t."""
        return TruncatedSeries.from_exact(p, [0, 1], prec, absprec)

    def __len__(self):
        return self.prec

    def __getitem__(self, n):
        if 0 <= n < self.prec:
            return self.coeffs[n]
        raise IndexError(f"coefficient {n} beyond truncation order {self.prec}")

    def t_valuation(self) -> int:
        """Index of the first coefficient not known to be exactly zero."""
        for i, c in enumerate(self.coeffs):
            if not c.is_exact_zero():
                return i
        return self.prec

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return TruncatedSeries(self.p, self.coeffs[:prec], prec)

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, Fraction, PadicNumber)):
            absprec = max((c.absprec for c in self.coeffs if not c.is_exact_zero()),
                          default=1)
            return TruncatedSeries(self.p, [_coerce_coeff(other, self.p, absprec)],
                                   self.prec)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = min(self.prec, other.prec)
        return TruncatedSeries(
            self.p,
            [self.coeffs[i] + other.coeffs[i] if i < other.prec else self.coeffs[i]
             for i in range(prec)],
            prec)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.p, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, a):
        """Multiply every coefficient by a scalar."""
        a = _coerce_coeff(a, self.p, max((c.absprec for c in self.coeffs
                                          if not c.is_exact_zero()), default=1) + 2)
        return TruncatedSeries(self.p, [c * a for c in self.coeffs], self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicNumber)):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        v1, v2 = self.t_valuation(), other.t_valuation()
        prec = min(self.prec + v2, other.prec + v1, self.prec + other.prec)
        out = [PadicNumber.zero(self.p) for _ in range(prec)]
        for i in range(v1, min(self.prec, prec)):
            ci = self.coeffs[i]
            if ci.is_exact_zero():
                continue
            for j in range(v2, min(other.prec, prec - i)):
                cj = other.coeffs[j]
                if cj.is_exact_zero():
                    continue
                out[i + j] = out[i + j] + ci * cj
        return TruncatedSeries(self.p, out, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, PadicNumber)):
            inv = 1 / _coerce_coeff(other, self.p,
                                    max((c.absprec for c in self.coeffs
                                         if not c.is_exact_zero()), default=1) + 2)
            return self.scale(inv)
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        return NotImplemented

    def shift(self, k):
        """Multiply by t^k (k >= 0)."""
        if k == 0:
            return self
        return TruncatedSeries(self.p,
                               [PadicNumber.zero(self.p)] * k + self.coeffs,
                               self.prec + k)

    def unshift(self, k):
        """Divide by t^k; the first k coefficients must be exact zeros or
        indistinguishable from zero."""
        for c in self.coeffs[:k]:
            if not c.is_zero_to_precision():
                raise DomainError("t-division with nonzero low-order coefficient")
        return TruncatedSeries(self.p, self.coeffs[k:], self.prec - k)

    def derivative(self):
        return TruncatedSeries(self.p,
                               [self.coeffs[n] * n for n in range(1, self.prec)],
                               self.prec - 1)

    def integrate(self):
        """Formal antiderivative with zero constant term; divisions by n
        lose ord_p(n) digits, tracked honestly."""
        out = [PadicNumber.zero(self.p)]
        for n, c in enumerate(self.coeffs, start=1):
            out.append(c / n if not c.is_exact_zero() else c)
        return TruncatedSeries(self.p, out, self.prec + 1)

    def inverse(self):
        a0 = self.coeffs[0]
        if a0.is_zero_to_precision():
            raise DomainError("inverse of a series with non-unit constant term")
        b = [1 / a0]
        for n in range(1, self.prec):
            s = PadicNumber.zero(self.p)
            for k in range(1, n + 1):
                if k < self.prec and not self.coeffs[k].is_exact_zero():
                    s = s + self.coeffs[k] * b[n - k]
            b.append(-s / a0)
        return TruncatedSeries(self.p, b, self.prec)

    def sqrt(self, branch_hint=None):
        """Square root with unit constant term.  branch_hint, when given,
        must square to the constant term and selects the sign."""
        a0 = self.coeffs[0]
        s0 = branch_hint if branch_hint is not None else a0.sqrt()
        if not (s0 * s0).agrees_with(a0):
            raise DomainError("branch hint does not square to the constant term")
        s = [s0]
        for n in range(1, self.prec):
            acc = self.coeffs[n]
            for k in range(1, n):
                acc = acc - s[k] * s[n - k]
            s.append(acc / (2 * s0))
        return TruncatedSeries(self.p, s, self.prec)

    def compose(self, g):
        """self(g(t)); g must have constant term of positive valuation."""
        if not isinstance(g, TruncatedSeries):
            raise TypeError("compose expects a TruncatedSeries")
        g0 = g.coeffs[0]
        if not g0.is_zero_to_precision() and g0.known_valuation() < 1:
            raise DomainError("composition requires ord_p(g(0)) >= 1 or g(0) = 0")
        prec = min(self.prec, g.prec)
        gg = g.truncate(prec)
        result = TruncatedSeries(self.p, [self.coeffs[prec - 1]], prec)
        for i in range(prec - 2, -1, -1):
            result = result * gg + TruncatedSeries(self.p, [self.coeffs[i]], prec)
        return result

    def evaluate(self, x, tail_valuation=None):
        """Horner evaluation at x (ord_p(x) >= 1 expected).  tail_valuation,
        when given, caps the result's precision to account for the truncated
        tail of the underlying function."""
        x = _coerce_coeff(x, self.p, max((c.absprec for c in self.coeffs
                                          if not c.is_exact_zero()), default=1) + 2)
        acc = PadicNumber.zero(self.p)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        if tail_valuation is not None and tail_valuation != INF:
            cap = PadicNumber(self.p, int(tail_valuation), 0, int(tail_valuation))
            acc = acc + cap
        return acc

    def log_unit(self):
        """log of a series with unit constant term: log(c0) + log(1 + w),
        Iwasawa branch on the constant."""
        a0 = self.coeffs[0]
        if a0.is_zero_to_precision():
            raise DomainError("log of a series with non-unit constant term")
        w = self / a0  # 1 + w
        body = w.derivative() * w.inverse()
        out = body.integrate().truncate(self.prec)
        const = a0.iwasawa_log()
        return TruncatedSeries(self.p, [out.coeffs[0] + const] + out.coeffs[1:],
                               self.prec)

    def exp_zero_constant(self):
        """exp of a series with zero constant term (solves E' = w'E)."""
        w0 = self.coeffs[0]
        if not w0.is_zero_to_precision():
            raise DomainError("exp requires zero constant term")
        wp = self.derivative()
        one = _coerce_coeff(1, self.p, max((c.absprec for c in self.coeffs
                                            if not c.is_exact_zero()), default=4) + 4)
        e = [one]
        for n in range(1, self.prec):
            s = PadicNumber.zero(self.p)
            for k in range(1, n + 1):
                if k - 1 < wp.prec and not wp.coeffs[k - 1].is_exact_zero():
                    s = s + wp.coeffs[k - 1] * e[n - k]
            e.append(s / n)
        return TruncatedSeries(self.p, e, self.prec)

    def is_odd(self, strict=False):
        for n in range(0, self.prec, 2):
            c = self.coeffs[n]
            if strict and not c.is_exact_zero():
                return False
            if not c.is_zero_to_precision():
                return False
        return True

    def __repr__(self):
        parts = []
        for n, c in enumerate(self.coeffs[:8]):
            if not c.is_zero_to_precision():
                parts.append(f"({c})*t^{n}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(t^{self.prec})"


class LogLaurent:
    """pole_order k, a series starting at t^(-k), and a rational log(t)
    coefficient.  Sums track log coefficients exactly."""

    __slots__ = ("p", "shift", "series", "log_coeff")

    def __init__(self, p, shift, series, log_coeff=Fraction(0)):
        self.p = p
        self.shift = shift          # lowest exponent; negative = pole
        self.series = series        # coefficient of t^(shift + n) is series[n]
        self.log_coeff = Fraction(log_coeff)

    @property
    def pole_order(self):
        v = self.series.t_valuation()
        return max(0, -(self.shift + v))

    @property
    def order(self):
        """Exponent up to which coefficients are known (exclusive)."""
        return self.shift + self.series.prec

    @staticmethod
    def from_series(s: TruncatedSeries):
        return LogLaurent(s.p, 0, s)

    @staticmethod
    def log_t(p, prec, coeff=Fraction(1)):
        return LogLaurent(p, 0, TruncatedSeries.zero(p, prec), coeff)

    def coefficient(self, n):
        """Coefficient of t^n."""
        i = n - self.shift
        if i < 0:
            return PadicNumber.zero(self.p)
        return self.series[i]

    def normalised(self):
        """Strip leading exact zeros into the shift."""
        v = self.series.t_valuation()
        if v == 0:
            return self
        return LogLaurent(self.p, self.shift + v, self.series.unshift(v)
                          if all(c.is_zero_to_precision() for c in self.series.coeffs[:v])
                          else self.series, self.log_coeff)

    def _aligned(self, other):
        s = min(self.shift, other.shift)
        o = min(self.order, other.order)
        a = self.series.shift(self.shift - s).truncate(o - s)
        b = other.series.shift(other.shift - s).truncate(o - s)
        return s, a, b

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            other = LogLaurent.from_series(other)
        if isinstance(other, (int, Fraction, PadicNumber)):
            other = LogLaurent.from_series(TruncatedSeries(
                self.p, [_coerce_coeff(other, self.p, 2 + max(
                    (c.absprec for c in self.series.coeffs if not c.is_exact_zero()),
                    default=4))], self.series.prec))
        if not isinstance(other, LogLaurent):
            return NotImplemented
        s, a, b = self._aligned(other)
        return LogLaurent(self.p, s, a + b, self.log_coeff + other.log_coeff)

    __radd__ = __add__

    def __neg__(self):
        return LogLaurent(self.p, self.shift, -self.series, -self.log_coeff)

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            other = LogLaurent.from_series(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LogLaurent(self.p, self.shift, self.series * other,
                              self.log_coeff * Fraction(other))
        if isinstance(other, PadicNumber):
            if self.log_coeff != 0:
                raise DomainError("cannot scale a log term by an inexact scalar")
            return LogLaurent(self.p, self.shift, self.series * other)
        if isinstance(other, TruncatedSeries):
            other = LogLaurent.from_series(other)
        if not isinstance(other, LogLaurent):
            return NotImplemented
        if self.log_coeff != 0 or other.log_coeff != 0:
            raise DomainError("product of log-bearing expansions not supported")
        return LogLaurent(self.p, self.shift + other.shift,
                          self.series * other.series)

    def to_series(self) -> TruncatedSeries:
        """Lossless downgrade; requires no pole and no log term."""
        if self.log_coeff != 0:
            raise DomainError("expansion carries a log term")
        me = self.normalised()
        if me.shift < 0:
            for c in me.series.coeffs[:-me.shift]:
                if not c.is_zero_to_precision():
                    raise DomainError("expansion carries a pole")
            return TruncatedSeries(self.p, me.series.coeffs[-me.shift:],
                                   me.series.prec + me.shift)
        return me.series.shift(me.shift)

    def log(self):
        """log of t^shift * (unit series): shift * log(t) + log(series)."""
        if self.log_coeff != 0:
            raise DomainError("log of a log-bearing expansion")
        me = self.normalised()
        body = me.series.log_unit()
        return LogLaurent(self.p, 0, body, Fraction(me.shift))

    def __repr__(self):
        lead = f"{self.log_coeff}*log(t) + " if self.log_coeff else ""
        return f"{lead}t^{self.shift}*({self.series!r})"


class ValuationProfile:
    """Assigns each coefficient index a certified lower bound for ord_p."""

    def __init__(self, p, epsilon, rule, name="custom"):
        self.p = p
        self.epsilon = Fraction(epsilon)
        self._rule = rule
        self.name = name

    def bound(self, n) -> Fraction:
        return self._rule(n)

    @staticmethod
    def rho(p, epsilon, constant_bonus=False):
        """Bounds for the quadratic Chabauty expansion: C_0, C_1 >= eps
        (C_0 >= 1 + eps when both point counts are prime to p) and
        C_n >= -floor(log_p(n-1)) - ord_p(n) + eps for n >= 2."""
        eps = Fraction(epsilon)

        def rule(n):
            if n == 0:
                return eps + (1 if constant_bonus else 0)
            if n == 1:
                return eps
            return -_ilog(n - 1, p) - _ord_int(n, p) + eps

        return ValuationProfile(p, eps, rule, "rho")

    @staticmethod
    def log_sq(p, strong=False):
        """Bounds for a squared elliptic-log expansion."""

        def rule(n):
            if n == 0:
                return Fraction(2 if strong else 0)
            if n == 1:
                return Fraction(1 if strong else 0)
            return Fraction(-_ilog(n - 1, p) - _ord_int(n, p))

        return ValuationProfile(p, Fraction(0), rule, "log_sq")

    @staticmethod
    def local_height(p, ord_m):
        """Bounds for a local-height expansion off infinity:
        C_0 >= 1 - 2 ord_p(m), C_n >= -ord_p(n) - 2 ord_p(m)."""

        def rule(n):
            if n == 0:
                return Fraction(1 - 2 * ord_m)
            return Fraction(-_ord_int(n, p) - 2 * ord_m)

        return ValuationProfile(p, Fraction(0), rule, "local_height")

    @staticmethod
    def log_x(p):
        """Bounds for log of a unit x-coordinate: C_0 >= 1, C_n >= -ord_p(n)."""

        def rule(n):
            return Fraction(1) if n == 0 else Fraction(-_ord_int(n, p))

        return ValuationProfile(p, Fraction(0), rule, "log_x")

    @staticmethod
    def composed(p, alpha):
        """ord(C_n) >= -ord_p(n) + alpha(n) with alpha non-increasing."""

        def rule(n):
            return Fraction(alpha(n)) - (_ord_int(n, p) if n >= 1 else 0)

        return ValuationProfile(p, Fraction(0), rule, "composed")


def _ord_int(n, p):
    if n == 0:
        return 0
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def check_profile(s, profile: ValuationProfile):
    """Certify every computed coefficient against the profile.

    Returns (ok, first_violating_index).  An inexact-zero coefficient
    certifies a bound only up to its absolute precision.
    """
    if isinstance(s, LogLaurent):
        if s.pole_order > 0:
            return False, -s.shift - s.series.t_valuation()
        base = s.shift
        coeffs = s.series.coeffs
    else:
        base = 0
        coeffs = s.coeffs
    for i, c in enumerate(coeffs):
        n = base + i
        if n < 0:
            if not c.is_zero_to_precision():
                return False, n
            continue
        b = profile.bound(n)
        if c.is_exact_zero():
            continue
        if c.unit == 0:
            if c.absprec < b:
                return False, n
            continue
        if c.val < b:
            return False, n
    return True, None
