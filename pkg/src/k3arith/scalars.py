"""Exact scalars: rationals, multiquadratic numbers and polynomials in ``s``.

Rationals are :class:`fractions.Fraction`.  A :class:`MultiquadraticNumber`
is a finite sum ``sum q_S * sqrt(prod S)`` over square-free sets ``S`` of
primes; since these square roots are linearly independent over the
rationals, equality is equality of coefficient maps.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, Mapping, Tuple, Union

Monomial = Tuple[int, ...]
ONE: Monomial = ()

RationalLike = Union[int, Fraction]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and fraction strings such as ``"-3/4"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if any(c in value for c in ".eE"):
            raise ValueError(f"decimal notation is not accepted: {value!r}")
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def fraction_str(q: Fraction) -> str:
    q = as_fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def _monomial_product(a: Monomial, b: Monomial) -> Tuple[int, Monomial]:
    """sqrt(prod a) * sqrt(prod b) = factor * sqrt(prod key)."""
    sa, sb = set(a), set(b)
    factor = math.prod(sa & sb)
    return factor, tuple(sorted(sa ^ sb))


def radicand(m: Monomial) -> int:
    return math.prod(m)


class MultiquadraticNumber:
    """Immutable element of Q(sqrt p1, ..., sqrt pk).

    ``terms`` maps sorted prime tuples to nonzero Fractions; the empty
    tuple is the rational part.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, RationalLike] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        for key, coef in (terms or {}).items():
            key = tuple(sorted(key))
            if len(set(key)) != len(key) or not all(is_prime(p) for p in key):
                raise ValueError(f"monomial {key} is not a set of distinct primes")
            q = as_fraction(coef)
            if q:
                clean[key] = clean.get(key, Fraction(0)) + q
                if not clean[key]:
                    del clean[key]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "MultiquadraticNumber":
        # trusted constructor: keys canonical, values nonzero
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q: RationalLike) -> "MultiquadraticNumber":
        q = as_fraction(q)
        return cls._raw({ONE: q} if q else {})

    @classmethod
    def sqrt(cls, p: int) -> "MultiquadraticNumber":
        """sqrt(p) for a prime p."""
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return cls._raw({(p,): Fraction(1)})

    @classmethod
    def coerce(cls, value) -> "MultiquadraticNumber":
        if isinstance(value, MultiquadraticNumber):
            return value
        return cls.rational(value)

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: (radicand(kv[0]), kv[0]))

    def coefficient(self, monomial: Monomial = ONE) -> Fraction:
        return self._terms.get(tuple(sorted(monomial)), Fraction(0))

    @property
    def generators(self) -> Tuple[int, ...]:
        return tuple(sorted({p for key in self._terms for p in key}))

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(key == ONE for key in self._terms)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.coefficient(ONE)

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        try:
            other = MultiquadraticNumber.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for key, q in other._terms.items():
            r = out.get(key, 0) + q
            if r:
                out[key] = r
            else:
                out.pop(key, None)
        return MultiquadraticNumber._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiquadraticNumber._raw({k: -q for k, q in self._terms.items()})

    def __sub__(self, other):
        try:
            other = MultiquadraticNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return MultiquadraticNumber.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            q = Fraction(other)
            if not q:
                return ZERO
            return MultiquadraticNumber._raw({k: c * q for k, c in self._terms.items()})
        if not isinstance(other, MultiquadraticNumber):
            return NotImplemented
        out: Dict[Monomial, Fraction] = {}
        for ka, qa in self._terms.items():
            for kb, qb in other._terms.items():
                factor, key = _monomial_product(ka, kb)
                out[key] = out.get(key, 0) + factor * qa * qb
        return MultiquadraticNumber._raw({k: q for k, q in out.items() if q})

    __rmul__ = __mul__

    def inverse(self) -> "MultiquadraticNumber":
        """Multiplicative inverse by repeated conjugation.

        Split ``a = b + c*sqrt(p)`` on the largest generator ``p``; then
        ``1/a = (b - c*sqrt(p)) / (b^2 - p*c^2)`` and the denominator no
        longer involves ``p``.
        """
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        gens = self.generators
        if not gens:
            return MultiquadraticNumber.rational(1 / self.coefficient(ONE))
        p = gens[-1]
        b = {k: q for k, q in self._terms.items() if p not in k}
        c = {tuple(x for x in k if x != p): q for k, q in self._terms.items() if p in k}
        b = MultiquadraticNumber._raw(b)
        c = MultiquadraticNumber._raw(c)
        root = MultiquadraticNumber.sqrt(p)
        norm = b * b - c * c * p
        return (b - c * root) * norm.inverse()

    def __truediv__(self, other):
        other = MultiquadraticNumber.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return MultiquadraticNumber.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE_NUMBER
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -----------------------------------------------------

    def __eq__(self, other):
        try:
            other = MultiquadraticNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def enclosure(self, precision_bits: int) -> Tuple[Fraction, Fraction]:
        """Outward-rounded interval containing the value."""
        scale = 1 << precision_bits
        lo_num = Fraction(0)
        hi_num = Fraction(0)
        for key, q in self._terms.items():
            n = radicand(key)
            if n == 1:
                lo_r = hi_r = Fraction(scale)
            else:
                f = math.isqrt(n << (2 * precision_bits))
                lo_r, hi_r = Fraction(f), Fraction(f + 1)
            if q > 0:
                lo_num += q * lo_r
                hi_num += q * hi_r
            else:
                lo_num += q * hi_r
                hi_num += q * lo_r
        return lo_num / scale, hi_num / scale

    def sign(self) -> int:
        """Exact sign in {-1, 0, 1}, refining the enclosure until it excludes 0."""
        if not self._terms:
            return 0
        if self.is_rational():
            return 1 if self.coefficient(ONE) > 0 else -1
        bits = 16
        while True:
            lo, hi = self.enclosure(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def approx(self, digits: int = 30) -> Fraction:
        """Rational approximation within 2**-(3.33*digits); display only."""
        lo, hi = self.enclosure(int(digits * 3.33) + 8)
        return (lo + hi) / 2

    # -- display / serialization ----------------------------------------

    def __repr__(self):
        return f"MultiquadraticNumber({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for key, q in self.items():
            if key == ONE:
                parts.append(fraction_str(q))
            else:
                root = f"sqrt({radicand(key)})"
                if q == 1:
                    parts.append(root)
                elif q == -1:
                    parts.append(f"-{root}")
                else:
                    parts.append(f"{fraction_str(q)}*{root}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "terms": [
                {"primes": list(key), "coef": fraction_str(q)} for key, q in self.items()
            ]
        }

    @classmethod
    def from_json(cls, data) -> "MultiquadraticNumber":
        if isinstance(data, (int, str)) and not isinstance(data, bool):
            return cls.rational(as_fraction(data))
        if not isinstance(data, dict) or "terms" not in data:
            raise ValueError(f"not a multiquadratic number: {data!r}")
        terms: Dict[Monomial, Fraction] = {}
        for term in data["terms"]:
            key = tuple(sorted(int(p) for p in term["primes"]))
            terms[key] = terms.get(key, Fraction(0)) + as_fraction(term["coef"])
        return cls(terms)


ZERO = MultiquadraticNumber._raw({})
ONE_NUMBER = MultiquadraticNumber._raw({ONE: Fraction(1)})

Mq = MultiquadraticNumber


def mq_sum(values: Iterable[MultiquadraticNumber]) -> MultiquadraticNumber:
    return reduce(lambda a, b: a + b, values, ZERO)


class ScalarPolynomial:
    """Polynomial in the family parameter ``s`` with multiquadratic coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        clean: Dict[int, MultiquadraticNumber] = {}
        for deg, c in (coeffs or {}).items():
            if deg < 0:
                raise ValueError("negative degree")
            c = MultiquadraticNumber.coerce(c)
            if c:
                clean[int(deg)] = c
        self._coeffs = clean

    @classmethod
    def _raw(cls, coeffs: Dict[int, MultiquadraticNumber]) -> "ScalarPolynomial":
        obj = cls.__new__(cls)
        obj._coeffs = coeffs
        return obj

    @classmethod
    def coerce(cls, value) -> "ScalarPolynomial":
        if isinstance(value, ScalarPolynomial):
            return value
        c = MultiquadraticNumber.coerce(value)
        return cls._raw({0: c} if c else {})

    @classmethod
    def variable(cls) -> "ScalarPolynomial":
        return cls._raw({1: ONE_NUMBER})

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return max(self._coeffs, default=-1)

    def coefficient(self, k: int) -> MultiquadraticNumber:
        return self._coeffs.get(k, ZERO)

    def coefficients(self) -> Dict[int, MultiquadraticNumber]:
        return dict(sorted(self._coeffs.items()))

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_constant(self) -> bool:
        return self.degree <= 0

    def constant(self) -> MultiquadraticNumber:
        if not self.is_constant():
            raise ValueError(f"{self} depends on s")
        return self.coefficient(0)

    def __add__(self, other):
        try:
            other = ScalarPolynomial.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            r = out.get(k, ZERO) + c
            if r:
                out[k] = r
            else:
                out.pop(k, None)
        return ScalarPolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return ScalarPolynomial._raw({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        try:
            other = ScalarPolynomial.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return ScalarPolynomial.coerce(other) - self

    def __mul__(self, other):
        try:
            other = ScalarPolynomial.coerce(other)
        except TypeError:
            return NotImplemented
        out: Dict[int, MultiquadraticNumber] = {}
        for i, a in self._coeffs.items():
            for j, b in other._coeffs.items():
                out[i + j] = out.get(i + j, ZERO) + a * b
        return ScalarPolynomial._raw({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            other = ScalarPolynomial.coerce(other)
        except TypeError:
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __bool__(self):
        return bool(self._coeffs)

    def evaluate(self, s) -> MultiquadraticNumber:
        """Horner evaluation at a rational (or multiquadratic) point."""
        s = MultiquadraticNumber.coerce(s if not isinstance(s, str) else as_fraction(s))
        acc = ZERO
        for k in range(self.degree, -1, -1):
            acc = acc * s + self.coefficient(k)
        return acc

    def shift(self, sigma) -> "ScalarPolynomial":
        """The polynomial ``s -> p(s + sigma)``."""
        step = ScalarPolynomial.variable() + ScalarPolynomial.coerce(sigma)
        acc = ScalarPolynomial()
        for k in range(self.degree, -1, -1):
            acc = acc * step + ScalarPolynomial.coerce(self.coefficient(k))
        return acc

    def __repr__(self):
        return f"ScalarPolynomial({self})"

    def __str__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for k, c in sorted(self._coeffs.items()):
            cs = str(c)
            if k == 0:
                parts.append(cs)
                continue
            power = "s" if k == 1 else f"s^{k}"
            if cs == "1":
                parts.append(power)
            elif cs == "-1":
                parts.append(f"-{power}")
            else:
                parts.append(f"({cs})*{power}")
        return " + ".join(parts)

    def to_json(self):
        """Constant rationals serialize as fraction strings, the rest as
        ``{"poly": [{"degree": k, "coef": <number>}, ...]}``."""
        if self.is_constant() and self.constant().is_rational():
            return fraction_str(self.constant().to_fraction())
        if self.is_constant():
            return self.constant().to_json()
        return {
            "poly": [
                {"degree": k, "coef": c.to_json()} for k, c in sorted(self._coeffs.items())
            ]
        }

    @classmethod
    def from_json(cls, data) -> "ScalarPolynomial":
        if isinstance(data, dict) and "poly" in data:
            coeffs: Dict[int, MultiquadraticNumber] = {}
            for term in data["poly"]:
                k = int(term["degree"])
                coeffs[k] = coeffs.get(k, ZERO) + MultiquadraticNumber.from_json(term["coef"])
            return cls(coeffs)
        return cls.coerce(MultiquadraticNumber.from_json(data))


Poly = ScalarPolynomial
S = ScalarPolynomial.variable()
