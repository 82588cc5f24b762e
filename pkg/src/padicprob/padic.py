"""Exact p-adic arithmetic on rationals.

Values are plain ints or fractions.Fraction; nothing here ever rounds in
the real sense. The p-adic valuation, absolute value and distance are
exact, balls and spheres are decided exactly, and PadicApprox carries a
finite window of p-adic digits with explicit precision bookkeeping.

Conventions:
    * v_p(0) = +infinity (math.inf), |0|_p = 0.
    * |x|_p = p**(-v_p(x)); a PadicAbs stores the exponent of p, with a
      -infinity exponent encoding |0|_p = 0.
    * A ball U(center, l) is {x : v_p(x - center) >= l}, radius p**-l.
      A sphere S(center, l) is {x : v_p(x - center) == l}.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from .errors import DomainError, PrecisionExhausted

Rat = Union[int, Fraction]

#: default number of significant p-adic digits carried by approximations
DEFAULT_PRECISION = 32

# composite-free below 3.3e24, hence deterministic for anything < 2**64
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_PRIME_LIMIT = 2**64


def _is_prime_u64(n: int) -> bool:
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n == w:
            return True
        if n % w == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Prime(int):
    """An int certified prime at construction.

    The check is a deterministic Miller-Rabin, valid for any input below
    2**64; larger candidates are rejected outright rather than tested
    probabilistically.

    Examples:
        >>> Prime(3)
        3
        >>> Prime(9)
        Traceback (most recent call last):
            ...
        ValueError: 9 is not prime
    """

    def __new__(cls, value):
        if isinstance(value, Prime):
            return value
        n = int(value)
        if n >= _PRIME_LIMIT:
            raise ValueError(f"primality check limited to inputs < 2**64, got {n}")
        if not _is_prime_u64(n):
            raise ValueError(f"{n} is not prime")
        return super().__new__(cls, n)


def as_fraction(x) -> Fraction:
    """Coerce an int, Fraction or 'num/den' string to an exact Fraction.

    Floats are rejected: they carry binary rounding error and this
    library promises exact arithmetic.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected int, Fraction or rational string, got {type(x).__name__}")


def _int_vp(n: int, p: int) -> int:
    # n != 0
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x, p) -> int | float:
    """p-adic valuation of a rational; math.inf for zero.

    Examples:
        >>> vp(12, 3)
        1
        >>> vp(Fraction(5, 16), 2)
        -4
        >>> vp(0, 5)
        inf
    """
    p = Prime(p)
    x = as_fraction(x)
    if x == 0:
        return math.inf
    return _int_vp(x.numerator, p) - _int_vp(x.denominator, p)


class PadicAbs:
    """A p-adic absolute value p**exponent; exponent -inf encodes 0.

    Instances are totally ordered (same prime required) and multiply by
    adding exponents.
    """

    __slots__ = ("prime", "exponent")

    def __init__(self, prime, exponent):
        self.prime = Prime(prime)
        if exponent != -math.inf and not isinstance(exponent, int):
            raise TypeError("exponent must be an int or -inf")
        self.exponent = exponent

    @classmethod
    def zero(cls, p) -> "PadicAbs":
        return cls(p, -math.inf)

    @classmethod
    def one(cls, p) -> "PadicAbs":
        return cls(p, 0)

    @classmethod
    def from_valuation(cls, p, v) -> "PadicAbs":
        return cls(p, -math.inf) if v == math.inf else cls(p, -v)

    @property
    def is_zero(self) -> bool:
        return self.exponent == -math.inf

    def as_fraction(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if self.exponent >= 0:
            return Fraction(self.prime**self.exponent)
        return Fraction(1, self.prime ** (-self.exponent))

    def _check(self, other) -> "PadicAbs":
        if not isinstance(other, PadicAbs):
            raise TypeError("can only combine PadicAbs with PadicAbs")
        if other.prime != self.prime:
            raise ValueError("mismatched primes")
        return other

    def __mul__(self, other):
        other = self._check(other)
        return PadicAbs(self.prime, self.exponent + other.exponent)

    def __eq__(self, other):
        if not isinstance(other, PadicAbs):
            return NotImplemented
        return self.prime == other.prime and self.exponent == other.exponent

    def __hash__(self):
        return hash((self.prime, self.exponent))

    def __lt__(self, other):
        other = self._check(other)
        return self.exponent < other.exponent

    def __le__(self, other):
        other = self._check(other)
        return self.exponent <= other.exponent

    def __gt__(self, other):
        return self._check(other).__lt__(self)

    def __ge__(self, other):
        return self._check(other).__le__(self)

    def __repr__(self):
        return f"PadicAbs({self.prime}, {self.exponent})"

    def __str__(self):
        return str(self.as_fraction())


def abs_p(x, p) -> PadicAbs:
    """|x|_p as a PadicAbs.

    Examples:
        >>> str(abs_p(Fraction(1, 2), 3))
        '1'
    """
    return PadicAbs.from_valuation(Prime(p), vp(x, p))


def dist_p(x, y, p) -> PadicAbs:
    """p-adic distance |x - y|_p.

    Examples:
        >>> str(dist_p(Fraction(5, 16), Fraction(1, 2), 3))
        '1/3'
    """
    return abs_p(as_fraction(x) - as_fraction(y), p)


class Ball:
    """Closed-open ball U(center, l) = {x : v_p(x - center) >= l}.

    The radius is p**-l; l may be negative (balls larger than Z_p).
    Balls are clopen: membership is an exact valuation comparison.
    """

    __slots__ = ("prime", "center", "radius_exponent")

    def __init__(self, prime, center, radius_exponent: int):
        self.prime = Prime(prime)
        self.center = as_fraction(center)
        self.radius_exponent = int(radius_exponent)

    def contains(self, x) -> bool:
        return vp(as_fraction(x) - self.center, self.prime) >= self.radius_exponent

    def __eq__(self, other):
        if not isinstance(other, Ball):
            return NotImplemented
        return (self.prime, self.center, self.radius_exponent) == (
            other.prime,
            other.center,
            other.radius_exponent,
        )

    def __hash__(self):
        return hash((self.prime, self.center, self.radius_exponent))

    def __repr__(self):
        return f"Ball(p={self.prime}, center={self.center}, radius_exponent={self.radius_exponent})"


class Sphere:
    """Sphere S(center, l) = {x : v_p(x - center) == l}."""

    __slots__ = ("prime", "center", "radius_exponent")

    def __init__(self, prime, center, radius_exponent: int):
        self.prime = Prime(prime)
        self.center = as_fraction(center)
        self.radius_exponent = int(radius_exponent)

    def contains(self, x) -> bool:
        return vp(as_fraction(x) - self.center, self.prime) == self.radius_exponent

    def __repr__(self):
        return f"Sphere(p={self.prime}, center={self.center}, radius_exponent={self.radius_exponent})"


def in_ball(x, ball: Ball) -> bool:
    return ball.contains(x)


def in_sphere(x, sphere: Sphere) -> bool:
    return sphere.contains(x)


def _unit_digits(x: Fraction, p: int, n: int) -> tuple[int, ...]:
    # digits of the unit part of x (both num and den prime to p) mod p**n
    if n <= 0:
        return ()
    mod = p**n
    u = x.numerator % mod * pow(x.denominator, -1, mod) % mod
    digits = []
    for _ in range(n):
        u, d = divmod(u, p)
        digits.append(d)
    return tuple(digits)


class PadicApprox:
    """A p-adic number known modulo p**(valuation + len(digits)).

    Fields:
        prime: the p.
        valuation: v_p of the leading digit; for an inexact zero (all
            digits cancelled) it is the known absolute precision, i.e.
            the value is O(p**valuation) and v_p >= valuation.
        digits: base-p digits (d0, d1, ...), d0 != 0 unless empty.
        exact_zero: True only for the exact zero of Q_p.

    Arithmetic tracks worst-case precision: absolute precision of a sum
    is the min of the operands', of a product min(v1+M2, v2+M1).
    """

    __slots__ = ("prime", "valuation", "digits", "exact_zero")

    def __init__(self, prime, valuation: int, digits: tuple[int, ...], exact_zero: bool = False):
        self.prime = Prime(prime)
        self.valuation = int(valuation)
        self.digits = tuple(int(d) for d in digits)
        self.exact_zero = bool(exact_zero)
        if self.exact_zero and (self.digits or self.valuation != 0):
            raise ValueError("exact zero carries no digits and valuation 0")
        if self.digits:
            if self.digits[0] == 0:
                raise ValueError("leading digit must be nonzero")
            if any(not 0 <= d < self.prime for d in self.digits):
                raise ValueError("digit outside 0..p-1")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, p) -> "PadicApprox":
        return cls(p, 0, (), exact_zero=True)

    @classmethod
    def from_rational(cls, x, p, digits: int = DEFAULT_PRECISION) -> "PadicApprox":
        """Approximate a rational with the given count of significant digits."""
        p = Prime(p)
        x = as_fraction(x)
        if digits < 1:
            raise ValueError("need at least one digit")
        if x == 0:
            return cls.zero(p)
        v = vp(x, p)
        unit = x / Fraction(p) ** v
        return cls(p, v, _unit_digits(unit, p, digits))

    @classmethod
    def from_rational_abs(cls, x, p, abs_precision: int) -> "PadicApprox":
        """Approximate a rational known modulo p**abs_precision.

        A zero representative yields the inexact zero O(p**abs_precision),
        not the exact zero: cancellation to 0 at finite precision only
        proves v_p >= abs_precision.
        """
        p = Prime(p)
        x = as_fraction(x)
        if x == 0:
            return cls(p, abs_precision, ())
        v = vp(x, p)
        n = abs_precision - v
        if n <= 0:
            # nothing survives at this precision: O(p**abs_precision)
            return cls(p, abs_precision, ())
        unit = x / Fraction(p) ** v
        return cls(p, v, _unit_digits(unit, p, n))

    # -- bookkeeping ----------------------------------------------------

    @property
    def precision(self) -> int:
        return len(self.digits)

    @property
    def abs_precision(self) -> int | float:
        """Exponent M such that the value is known modulo p**M."""
        if self.exact_zero:
            return math.inf
        return self.valuation + len(self.digits)

    @property
    def is_zero_to_precision(self) -> bool:
        return self.exact_zero or not self.digits

    def unit_int(self) -> int:
        return sum(d * self.prime**j for j, d in enumerate(self.digits))

    def rational_rep(self) -> Fraction:
        """The canonical rational representative of the known window."""
        if self.is_zero_to_precision:
            return Fraction(0)
        return Fraction(self.prime) ** self.valuation * self.unit_int()

    def abs_p(self) -> PadicAbs:
        if self.exact_zero:
            return PadicAbs.zero(self.prime)
        if not self.digits:
            raise PrecisionExhausted(
                f"value is O({self.prime}^{self.valuation}); absolute value undetermined"
            )
        return PadicAbs(self.prime, -self.valuation)

    def congruent_to(self, x) -> bool:
        """Does the exact rational x lie in this approximation's window?"""
        x = as_fraction(x)
        if self.exact_zero:
            return x == 0
        return vp(x - self.rational_rep(), self.prime) >= self.abs_precision

    def agrees_with(self, other: "PadicApprox") -> bool:
        """Congruence modulo the smaller of the two absolute precisions."""
        if other.prime != self.prime:
            raise ValueError("mismatched primes")
        m = min(self.abs_precision, other.abs_precision)
        if m == math.inf:
            return True
        return vp(self.rational_rep() - other.rational_rep(), self.prime) >= m

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "PadicApprox":
        if isinstance(other, PadicApprox):
            if other.prime != self.prime:
                raise ValueError("mismatched primes")
            return other
        raise TypeError("expected PadicApprox; use mul_rational/add for exact scalars")

    def __neg__(self):
        if self.exact_zero:
            return self
        return PadicApprox.from_rational_abs(-self.rational_rep(), self.prime, self.abs_precision)

    def __add__(self, other):
        other = self._coerce(other)
        if self.exact_zero:
            return other
        if other.exact_zero:
            return self
        m = min(self.abs_precision, other.abs_precision)
        return PadicApprox.from_rational_abs(
            self.rational_rep() + other.rational_rep(), self.prime, m
        )

    def __sub__(self, other):
        return self.__add__(-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        if self.exact_zero or other.exact_zero:
            return PadicApprox.zero(self.prime)
        m = min(self.valuation + other.abs_precision, other.valuation + self.abs_precision)
        return PadicApprox.from_rational_abs(
            self.rational_rep() * other.rational_rep(), self.prime, m
        )

    def mul_rational(self, c) -> "PadicApprox":
        """Multiply by an exact rational (no precision lost beyond shift)."""
        c = as_fraction(c)
        if self.exact_zero or c == 0:
            return PadicApprox.zero(self.prime)
        m = self.abs_precision + vp(c, self.prime)
        return PadicApprox.from_rational_abs(self.rational_rep() * c, self.prime, m)

    def div_rational(self, c) -> "PadicApprox":
        c = as_fraction(c)
        if c == 0:
            raise ZeroDivisionError("division by exact zero")
        return self.mul_rational(1 / c)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        if n == 0:
            return PadicApprox.from_rational(1, self.prime, DEFAULT_PRECISION)
        out = None
        base = self
        while n:
            if n & 1:
                out = base if out is None else out * base
            n >>= 1
            if n:
                base = base * base
        return out

    # -- display ----------------------------------------------------------

    def __repr__(self):
        return f"PadicApprox({self!s})"

    def __str__(self):
        if self.exact_zero:
            return f"0 base {self.prime} (exact)"
        if not self.digits:
            return f"O({self.prime}^{self.valuation}) base {self.prime}"
        ds = ",".join(str(d) for d in self.digits)
        return f"{self.prime}^{self.valuation} * ({ds}) base {self.prime} prec {len(self.digits)}"

    def __eq__(self, other):
        if not isinstance(other, PadicApprox):
            return NotImplemented
        return (
            self.prime == other.prime
            and self.valuation == other.valuation
            and self.digits == other.digits
            and self.exact_zero == other.exact_zero
        )

    def __hash__(self):
        return hash((self.prime, self.valuation, self.digits, self.exact_zero))


def to_approx(x, p, digits: int = DEFAULT_PRECISION) -> PadicApprox:
    """Expand a rational into p-adic digits.

    Examples:
        >>> to_approx(Fraction(1, 2), 3, 4).digits
        (2, 1, 1, 1)
        >>> to_approx(9, 3, 3).valuation
        2
    """
    return PadicApprox.from_rational(x, p, digits)


# -- one-variable analytic functions on their discs of convergence -------

_EXP_KINDS = ("exp", "cosh", "sinh")
SERIES_KINDS = _EXP_KINDS + ("log1p", "binomial")


def _digits_base_p(m: int, p: int) -> int:
    n = 0
    while m:
        m //= p
        n += 1
    return n


def _exp_radius_val(p: int) -> int:
    # v_p(x) >= 1 suffices for odd p; p = 2 needs v_2(x) >= 2
    return 2 if p == 2 else 1


def _exp_like_sum(kind: str, rep: Fraction, v: int, p: int, target: int) -> Fraction:
    # partial sum with remainder below p**-target; term valuation bound
    # m*v - (m-1)/(p-1) is nondecreasing on the disc of convergence
    total = Fraction(0)
    term = Fraction(1)
    m = 0
    while True:
        bound = Fraction(m) * v - Fraction(m - 1, p - 1) if m else Fraction(0)
        if m and bound >= target:
            break
        keep = (
            kind == "exp"
            or (kind == "cosh" and m % 2 == 0)
            or (kind == "sinh" and m % 2 == 1)
        )
        if keep:
            total += term
        m += 1
        term = term * rep / m
    return total


def _log1p_sum(rep: Fraction, v: int, p: int, target: int) -> Fraction:
    total = Fraction(0)
    power = Fraction(1)
    m = 0
    while True:
        m += 1
        power *= rep
        # v_p(term) >= m*v - (digits_p(m) - 1), nondecreasing for v >= 1
        if m > 1 and m * v - (_digits_base_p(m, p) - 1) >= target:
            break
        total += power / m if m % 2 == 1 else -power / m
    return total


def falling_binomial(a: Fraction, m: int) -> Fraction:
    """Exact generalized binomial coefficient a(a-1)...(a-m+1)/m!."""
    a = as_fraction(a)
    out = Fraction(1)
    for j in range(m):
        out = out * (a - j) / (j + 1)
    return out


def series_eval(kind: str, x: PadicApprox, a=None) -> PadicApprox:
    """Evaluate exp/cosh/sinh/log1p or the binomial series (1+x)**a at a
    p-adic argument, to the argument's own absolute precision.

    exp, cosh, sinh need |x|_p <= 1/p (p odd) or |x|_2 <= 1/4; log1p and
    binomial need |x|_p < 1, and binomial additionally a p-adic integer
    exponent a (int, Fraction, or PadicApprox). Outside those discs the
    series diverge and DomainError is raised.

    Examples:
        >>> x = to_approx(3, 3, 6)
        >>> series_eval("exp", x).valuation
        0
    """
    if kind not in SERIES_KINDS:
        raise ValueError(f"unknown series {kind!r}; choose from {SERIES_KINDS}")
    if not isinstance(x, PadicApprox):
        raise TypeError("series_eval expects a PadicApprox argument")
    p = x.prime

    if kind in _EXP_KINDS:
        need = _exp_radius_val(p)
        if x.exact_zero:
            if kind == "sinh":
                return PadicApprox.zero(p)
            return PadicApprox.from_rational(1, p, DEFAULT_PRECISION)
        if x.valuation < need or not x.digits:
            raise DomainError(
                f"{kind} converges only for v_{p}(x) >= {need}; argument has {x!s}"
            )
        m_abs = x.abs_precision
        total = _exp_like_sum(kind, x.rational_rep(), x.valuation, p, m_abs)
        return PadicApprox.from_rational_abs(total, p, m_abs)

    if kind == "log1p":
        if x.exact_zero:
            return PadicApprox.zero(p)
        if x.valuation < 1 or not x.digits:
            raise DomainError(f"log1p converges only for |x|_p < 1; argument has {x!s}")
        m_abs = x.abs_precision
        total = _log1p_sum(x.rational_rep(), x.valuation, p, m_abs)
        return PadicApprox.from_rational_abs(total, p, m_abs)

    # binomial: (1 + x)**a = sum_m C(a, m) x**m
    if a is None:
        raise ValueError("binomial series needs the exponent a")
    if isinstance(a, PadicApprox):
        if a.prime != p:
            raise ValueError("mismatched primes between x and a")
        if a.exact_zero:
            a_rep: Fraction = Fraction(0)
            a_prec: int | float = math.inf
        else:
            if a.valuation < 0:
                raise DomainError("binomial exponent must be a p-adic integer")
            a_rep = a.rational_rep()
            a_prec = a.abs_precision
    else:
        a_rep = as_fraction(a)
        if vp(a_rep, p) < 0:
            raise DomainError("binomial exponent must be a p-adic integer")
        a_prec = math.inf
    if x.exact_zero:
        return PadicApprox.from_rational(1, p, DEFAULT_PRECISION)
    if x.valuation < 1 or not x.digits:
        raise DomainError(f"binomial series converges only for |x|_p < 1; argument has {x!s}")

    m_abs = x.abs_precision
    v = x.valuation
    rep = x.rational_rep()
    total = Fraction(0)
    coeff = Fraction(1)
    power = Fraction(1)
    m = 0
    a_err = math.inf
    while m * v < m_abs:
        total += coeff * power
        # C(a, m) differs from C(a_rep, m) by at most p**-(a_prec - v_p(m!)),
        # so term m contributes uncertainty p**-(a_prec - v_p(m!) + m*v)
        if m >= 1 and a_prec != math.inf:
            a_err = min(a_err, a_prec - factorial_vp(m, p) + m * v)
        coeff = coeff * (a_rep - m) / (m + 1)
        power *= rep
        m += 1
    out_prec = min(m_abs, a_err)
    if out_prec <= 0:
        raise PrecisionExhausted("binomial series result retains no precision")
    return PadicApprox.from_rational_abs(total, p, out_prec)


def factorial_vp(m: int, p: int) -> int:
    # v_p(m!) = (m - s_p(m)) / (p - 1)
    s = 0
    n = m
    while n:
        s += n % p
        n //= p
    return (m - s) // (p - 1)
