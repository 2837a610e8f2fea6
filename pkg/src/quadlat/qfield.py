"""Exact arithmetic in a real quadratic field F = Q(sqrt d) and its ring of integers.

Two element types live here:

* :class:`QElem` -- an arbitrary element ``(p + q*sqrt(d)) / den`` of F in
  canonical form. Used for Gram entries, remainders and determinants.
* :class:`OInt` -- an algebraic integer ``a + b*omega`` written in the
  integral basis ``{1, omega}``.

Signs under both real embeddings are decided with integer arithmetic only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational

from .errors import FieldMismatchError, InvalidFieldError, NotIntegralError

_TRIAL_DIVISION_LIMIT = 10**12


def _sign(n):
    return (n > 0) - (n < 0)


def sign_p_q_sqrt(p, q, d):
    """Sign of ``p + q*sqrt(d)`` for integers p, q and a non-square d > 0."""
    sp, sq = _sign(p), _sign(q)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    return sp if p * p > q * q * d else sq


def floor_sqrt_mul(q, d):
    """floor(q * sqrt(d)) exactly."""
    s = q * q * d
    r = isqrt(s)
    if q >= 0:
        return r
    return -r if r * r == s else -r - 1


def is_squarefree(n):
    if n < 1:
        return False
    if n > _TRIAL_DIVISION_LIMIT:
        from sympy import factorint

        return all(e == 1 for e in factorint(n).values())
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return False
        p += 1 if p == 2 else 2
    return True


class QElem:
    """Exact element ``(p + q*sqrt(d)) / den`` of Q(sqrt d).

    Canonical form: ``den > 0`` and ``gcd(p, q, den) == 1``. Comparisons use
    the first (identity) real embedding.
    """

    __slots__ = ("p", "q", "den", "d")

    def __init__(self, p, q=0, den=1, *, d):
        if den == 0:
            raise ZeroDivisionError("QElem with zero denominator")
        if den < 0:
            p, q, den = -p, -q, -den
        g = gcd(gcd(p, q), den)
        if g > 1:
            p, q, den = p // g, q // g, den // g
        self.p = p
        self.q = q
        self.den = den
        self.d = d

    @classmethod
    def from_rational(cls, r, d):
        r = Fraction(r)
        return cls(r.numerator, 0, r.denominator, d=d)

    def _coerce(self, other):
        if isinstance(other, QElem):
            if other.d != self.d:
                if other.q == 0:
                    return QElem(other.p, 0, other.den, d=self.d)
                raise FieldMismatchError(f"cannot mix Q(sqrt {self.d}) and Q(sqrt {other.d})")
            return other
        if isinstance(other, OInt):
            if other.field.d != self.d:
                raise FieldMismatchError(f"cannot mix Q(sqrt {self.d}) and Q(sqrt {other.field.d})")
            return other.to_qelem()
        if isinstance(other, (int, Rational)):
            r = Fraction(other)
            return QElem(r.numerator, 0, r.denominator, d=self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QElem(
            self.p * o.den + o.p * self.den,
            self.q * o.den + o.q * self.den,
            self.den * o.den,
            d=self.d,
        )

    __radd__ = __add__

    def __neg__(self):
        return QElem(-self.p, -self.q, self.den, d=self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QElem(
            self.p * o.p + self.q * o.q * self.d,
            self.p * o.q + self.q * o.p,
            self.den * o.den,
            d=self.d,
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.p * self.p - self.q * self.q * self.d
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt d)")
        # 1/((p + q r)/den) = den (p - q r) / (p^2 - q^2 d)
        return QElem(self.den * self.p, -self.den * self.q, n, d=self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QElem(1, d=self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self):
        return QElem(self.p, -self.q, self.den, d=self.d)

    def trace(self):
        return Fraction(2 * self.p, self.den)

    def norm(self):
        return Fraction(self.p * self.p - self.q * self.q * self.d, self.den * self.den)

    def sign(self):
        """Sign under the identity embedding sqrt(d) > 0."""
        return sign_p_q_sqrt(self.p, self.q, self.d)

    def conj_sign(self):
        return sign_p_q_sqrt(self.p, -self.q, self.d)

    def signs(self):
        return self.sign(), self.conj_sign()

    def is_totally_positive(self):
        return self.sign() > 0 and self.conj_sign() > 0

    def is_rational(self):
        return self.q == 0

    def to_fraction(self):
        if self.q:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.p, self.den)

    def floor(self):
        return (self.p + floor_sqrt_mul(self.q, self.d)) // self.den

    def ceil(self):
        return -(-self).floor()

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return bool(self.p or self.q)

    def __eq__(self, other):
        if isinstance(other, QElem):
            if other.d != self.d and (self.q or other.q):
                return False
            return (self.p, self.q, self.den) == (other.p, other.q, other.den)
        if isinstance(other, (int, Rational)):
            return self.q == 0 and Fraction(self.p, self.den) == other
        if isinstance(other, OInt):
            return other.field.d == self.d and self == other.to_qelem()
        return NotImplemented

    def __hash__(self):
        if self.q == 0:
            return hash(Fraction(self.p, self.den))
        return hash((self.p, self.q, self.den, self.d))

    def _cmp(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __float__(self):
        return (self.p + self.q * self.d**0.5) / self.den

    def __repr__(self):
        return f"QElem({self.p}, {self.q}, {self.den}, d={self.d})"

    def __str__(self):
        if self.q == 0:
            s = str(self.p)
        elif self.p == 0:
            s = f"{self.q}√{self.d}"
        else:
            s = f"{self.p}{self.q:+}√{self.d}"
        if self.den != 1:
            s = f"({s})/{self.den}"
        return s


@dataclass(frozen=True)
class FieldCtx:
    """A real quadratic field Q(sqrt d), d squarefree and > 1."""

    d: int
    delta: int = field(init=False)
    branch: str = field(init=False)

    def __post_init__(self):
        d = self.d
        if not isinstance(d, int) or d <= 1:
            raise InvalidFieldError(f"d must be an integer > 1, got {d!r}")
        if not is_squarefree(d):
            raise InvalidFieldError(f"d = {d} is not squarefree")
        if d % 4 == 1:
            object.__setattr__(self, "delta", d)
            object.__setattr__(self, "branch", "1")
        else:
            object.__setattr__(self, "delta", 4 * d)
            object.__setattr__(self, "branch", "2,3")

    # omega^2 = e*omega + c
    @property
    def _e(self):
        return 1 if self.branch == "1" else 0

    @property
    def _c(self):
        return (self.d - 1) // 4 if self.branch == "1" else self.d

    @property
    def omega(self):
        if self.branch == "1":
            return QElem(1, 1, 2, d=self.d)
        return QElem(0, 1, 1, d=self.d)

    @property
    def omega_conj(self):
        return self.omega.conj()

    @property
    def sqrt_delta(self):
        """sqrt(Delta_d) as an element of F; equals omega - conj(omega)."""
        return QElem(0, 1 if self.branch == "1" else 2, 1, d=self.d)

    def __call__(self, a, b=0):
        return OInt(a, b, self)

    def qelem(self, p, q=0, den=1):
        return QElem(p, q, den, d=self.d)

    def lift(self, v):
        """Coerce int, Fraction, OInt or QElem into a QElem of this field."""
        if isinstance(v, QElem):
            if v.d != self.d and v.q:
                raise FieldMismatchError(f"element of Q(sqrt {v.d}) used in Q(sqrt {self.d})")
            return v if v.d == self.d else QElem(v.p, 0, v.den, d=self.d)
        if isinstance(v, OInt):
            if v.field != self:
                raise FieldMismatchError(f"element of Q(sqrt {v.field.d}) used in Q(sqrt {self.d})")
            return v.to_qelem()
        return QElem.from_rational(v, self.d)

    def omega_coords(self, x):
        """Rational coordinates (a, b) with x = a + b*omega."""
        x = self.lift(x)
        if self.branch == "1":
            # sqrt d = 2 omega - 1
            return Fraction(x.p - x.q, x.den), Fraction(2 * x.q, x.den)
        return Fraction(x.p, x.den), Fraction(x.q, x.den)

    def is_integral(self, x):
        a, b = self.omega_coords(x)
        return a.denominator == 1 and b.denominator == 1

    def to_oint(self, x):
        a, b = self.omega_coords(x)
        if a.denominator != 1 or b.denominator != 1:
            raise NotIntegralError(f"{x} is not an algebraic integer of Q(sqrt {self.d})")
        return OInt(a.numerator, b.numerator, self)

    def __repr__(self):
        return f"FieldCtx(d={self.d})"


class OInt:
    """Algebraic integer ``a + b*omega`` of a real quadratic field."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a, b, field):
        self.a = a
        self.b = b
        self.field = field

    def _coerce(self, other):
        if isinstance(other, OInt):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"cannot mix Q(sqrt {self.field.d}) and Q(sqrt {other.field.d})"
                )
            return other
        if isinstance(other, int):
            return OInt(other, 0, self.field)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return OInt(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __neg__(self):
        return OInt(-self.a, -self.b, self.field)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return OInt(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            if isinstance(other, (QElem, Fraction)):
                return self.to_qelem() * other
            return o
        e, c = self.field._e, self.field._c
        bb = self.b * o.b
        return OInt(self.a * o.a + c * bb, self.a * o.b + self.b * o.a + e * bb, self.field)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = OInt(1, 0, self.field)
        for _ in range(n):
            result = result * self
        return result

    def conj(self):
        if self.field.branch == "1":
            return OInt(self.a + self.b, -self.b, self.field)
        return OInt(self.a, -self.b, self.field)

    def trace(self):
        return 2 * self.a + self.field._e * self.b

    def norm(self):
        f = self.field
        return self.a * self.a + f._e * self.a * self.b - f._c * self.b * self.b

    def to_qelem(self):
        if self.field.branch == "1":
            return QElem(2 * self.a + self.b, self.b, 2, d=self.field.d)
        return QElem(self.a, self.b, 1, d=self.field.d)

    def is_totally_positive(self):
        return self.to_qelem().is_totally_positive()

    def is_rational(self):
        return self.b == 0

    def __eq__(self, other):
        if isinstance(other, OInt):
            return self.field == other.field and self.a == other.a and self.b == other.b
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        if isinstance(other, QElem):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.field.d))

    def __bool__(self):
        return bool(self.a or self.b)

    def __float__(self):
        return float(self.to_qelem())

    def __repr__(self):
        return f"OInt({self.a}, {self.b}, d={self.field.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        w = "ω" if self.b in (1, -1) else f"{abs(self.b)}ω"
        if self.a == 0:
            return w if self.b > 0 else f"-{w}"
        return f"{self.a}{'+' if self.b > 0 else '-'}{w}"


def make_field(d):
    return FieldCtx(d)


def conj(x):
    return x.conj()


def trace(x):
    return x.trace()


def norm(x):
    return x.norm()


def is_totally_positive(x):
    return x.is_totally_positive()


def omega_floor(k, F):
    """m_k = -floor(k * conj(omega)); m_k + k*omega is totally positive with conjugate in [0, 1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return -(k * F.omega_conj).floor()


def enumerate_totally_positive(F, tr_max):
    """All totally positive a + b*omega with trace <= tr_max, sorted by (trace, b)."""
    out = []
    for t in range(1, tr_max + 1):
        # x = (t + b' sqrt d)/2 with b' the sqrt-coefficient of 2x; need t^2 > b'^2 d
        if F.branch == "1":
            bmax = isqrt((t * t - 1) // F.d)
            for b in range(-bmax, bmax + 1):
                if (t - b) % 2 == 0 and b * b * F.d < t * t:
                    out.append(OInt((t - b) // 2, b, F))
        else:
            if t % 2:
                continue
            a = t // 2
            bmax = isqrt((a * a - 1) // F.d)
            for b in range(-bmax, bmax + 1):
                out.append(OInt(a, b, F))
    return out
