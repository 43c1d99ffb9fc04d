"""Exact scalars: rationals, the cyclotomic field Q(w) and Laurent polynomials.

Rationals are ``gmpy2.mpq`` values.  A :class:`CyclotomicScalar` is an element
of ``Q(w)`` with ``w = exp(2*pi*i/d)``, stored as its coefficient vector in the
power basis ``1, w, ..., w^(phi(d)-1)`` reduced modulo the d-th cyclotomic
polynomial.  A :class:`LaurentScalar` is a Laurent polynomial in ``u, v, z``
with cyclotomic coefficients.

:class:`ScalarDomain` bundles the constants the algebra engine needs.  With no
evaluation point it produces symbolic Laurent scalars; with a rational point
``(u0, v0, z0)`` it produces plain cyclotomic numbers, which lets the same
engine run on a specialisation and act as an independent cross-check.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Union

import gmpy2

from .errors import ParseError

__all__ = [
    "Rational",
    "to_rational",
    "cyclotomic_polynomial",
    "euler_phi",
    "CyclotomicScalar",
    "LaurentScalar",
    "ScalarDomain",
    "parse_cyclotomic",
    "laurent_substitute",
    "canonical_string",
]

Rational = gmpy2.mpq
_MPQ = type(gmpy2.mpq(0))
_ZERO = gmpy2.mpq(0)
_ONE = gmpy2.mpq(1)

# Exponents of Laurent monomials are kept within machine-word range.
EXPONENT_LIMIT = 2**62

RationalLike = Union[int, Fraction, "gmpy2.mpq"]


def to_rational(value: RationalLike | str) -> gmpy2.mpq:
    """Convert an int, Fraction, mpq or ``"p/q"`` string to an mpq."""
    if isinstance(value, _MPQ):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return gmpy2.mpq(value)
    if isinstance(value, Fraction):
        return gmpy2.mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return gmpy2.mpq(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational literal: {value!r}") from exc
    if type(value).__name__ == "mpz":
        return gmpy2.mpq(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def _is_rational_like(value: object) -> bool:
    return isinstance(value, (int, Fraction, _MPQ)) and not isinstance(value, bool)


# ---------------------------------------------------------------------------
# Cyclotomic polynomials and field tables


def _divisors(d: int) -> list[int]:
    return [e for e in range(1, d + 1) if d % e == 0]


def _poly_exact_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    """Divide integer polynomials (ascending coefficients); den must be monic."""
    num = list(num)
    deg_den = len(den) - 1
    quot = [0] * (len(num) - deg_den)
    for shift in range(len(quot) - 1, -1, -1):
        lead = num[shift + deg_den]
        quot[shift] = lead
        if lead:
            for i, c in enumerate(den):
                num[shift + i] -= lead * c
    if any(num[:deg_den]):
        raise ArithmeticError("division was not exact")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(d: int) -> tuple[int, ...]:
    """Integer coefficients (ascending degree) of the d-th cyclotomic polynomial."""
    if d < 1:
        raise ValueError("d must be a positive integer")
    poly = [-1] + [0] * (d - 1) + [1]
    for e in _divisors(d)[:-1]:
        poly = _poly_exact_div(poly, cyclotomic_polynomial(e))
    return tuple(poly)


def euler_phi(d: int) -> int:
    return len(cyclotomic_polynomial(d)) - 1


@dataclass(frozen=True)
class _FieldTables:
    d: int
    phi: int
    # reduction[k] lists (index, coefficient) pairs of x^k mod Phi_d, k < 2*phi - 1
    reduction: tuple[tuple[tuple[int, int], ...], ...]
    # powers[k] is the coefficient vector of w^k for 0 <= k < d
    powers: tuple[tuple[gmpy2.mpq, ...], ...]


@lru_cache(maxsize=None)
def _tables(d: int) -> _FieldTables:
    phi_poly = cyclotomic_polynomial(d)
    phi = len(phi_poly) - 1
    limit = max(2 * phi - 1, d)
    vec = [1] + [0] * (phi - 1)
    rows: list[tuple[int, ...]] = []
    for _ in range(limit):
        rows.append(tuple(vec))
        # multiply by x and reduce with the monic relation
        top = vec[-1]
        vec = [0] + vec[:-1]
        if top:
            for i in range(phi):
                vec[i] -= top * phi_poly[i]
    reduction = tuple(
        tuple((i, c) for i, c in enumerate(rows[k]) if c) for k in range(2 * phi - 1)
    )
    powers = tuple(tuple(gmpy2.mpq(c) for c in rows[k]) for k in range(d))
    return _FieldTables(d, phi, reduction, powers)


# ---------------------------------------------------------------------------
# Polynomial helpers over Q used for field inversion


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [_ZERO] * max(len(a) - len(b) + 1, 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b) and a:
        coef = a[-1] * inv_lead
        shift = len(a) - len(b)
        q[shift] = coef
        for i, c in enumerate(b):
            a[shift + i] -= coef * c
        _trim(a)
    return _trim(q), a


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else _ZERO) - (b[i] if i < len(b) else _ZERO) for i in range(n)]
    return _trim(out)


# ---------------------------------------------------------------------------


class CyclotomicScalar:
    """An element of Q(w), w a primitive d-th root of unity."""

    __slots__ = ("d", "coeffs", "_hash")

    def __init__(self, d: int, coeffs: Iterable[RationalLike] = ()) -> None:
        tables = _tables(d)
        raw = [to_rational(c) for c in coeffs]
        self.d = d
        self.coeffs = _reduce(tables, raw)
        self._hash = None

    @classmethod
    def _raw(cls, d: int, coeffs: tuple) -> "CyclotomicScalar":
        obj = object.__new__(cls)
        obj.d = d
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, d: int, value: RationalLike) -> "CyclotomicScalar":
        phi = _tables(d).phi
        return cls._raw(d, (to_rational(value),) + (_ZERO,) * (phi - 1))

    @classmethod
    def zero(cls, d: int) -> "CyclotomicScalar":
        return cls.constant(d, 0)

    @classmethod
    def one(cls, d: int) -> "CyclotomicScalar":
        return cls.constant(d, 1)

    @classmethod
    def omega(cls, d: int, k: int = 1) -> "CyclotomicScalar":
        """The power ``w^k`` (k taken modulo d)."""
        tables = _tables(d)
        return cls._raw(d, tables.powers[k % d])

    # -- queries -----------------------------------------------------------

    @property
    def phi(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> gmpy2.mpq:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other: object) -> "CyclotomicScalar | None":
        if isinstance(other, CyclotomicScalar):
            if other.d != self.d:
                raise ValueError(f"mixing Q(w) for d={self.d} and d={other.d}")
            return other
        if _is_rational_like(other):
            return CyclotomicScalar.constant(self.d, other)
        return None

    def __add__(self, other: object):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicScalar._raw(self.d, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other: object):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicScalar._raw(self.d, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other: object):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "CyclotomicScalar":
        return CyclotomicScalar._raw(self.d, tuple(-a for a in self.coeffs))

    def __pos__(self) -> "CyclotomicScalar":
        return self

    def __mul__(self, other: object):
        if _is_rational_like(other):
            r = to_rational(other)
            return CyclotomicScalar._raw(self.d, tuple(a * r for a in self.coeffs))
        if not isinstance(other, CyclotomicScalar):
            return NotImplemented
        if other.d != self.d:
            raise ValueError(f"mixing Q(w) for d={self.d} and d={other.d}")
        a, b = self.coeffs, other.coeffs
        phi = len(a)
        if phi == 1:
            return CyclotomicScalar._raw(self.d, (a[0] * b[0],))
        conv = [_ZERO] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        return CyclotomicScalar._raw(self.d, _fold(_tables(self.d), conv))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicScalar":
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(w)")
        if self.is_rational():
            return CyclotomicScalar.constant(self.d, 1 / self.coeffs[0])
        # extended Euclid: find s with s*a = 1 mod Phi_d
        modulus = [gmpy2.mpq(c) for c in cyclotomic_polynomial(self.d)]
        r0, r1 = modulus, _trim(list(self.coeffs))
        s0, s1 = [], [_ONE]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        inv_c = 1 / r1[0]
        return CyclotomicScalar(self.d, [c * inv_c for c in s1])

    def __truediv__(self, other: object):
        if _is_rational_like(other):
            r = to_rational(other)
            if not r:
                raise ZeroDivisionError("division by zero")
            return self * (1 / r)
        if isinstance(other, CyclotomicScalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other: object):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int) -> "CyclotomicScalar":
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = CyclotomicScalar.one(self.d)
        e = abs(exponent)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> "CyclotomicScalar":
        """Complex conjugation w -> w^-1."""
        total = CyclotomicScalar.zero(self.d)
        for k, c in enumerate(self.coeffs):
            if c:
                total = total + CyclotomicScalar.omega(self.d, -k) * c
        return total

    # -- comparison --------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CyclotomicScalar):
            return self.d == other.d and self.coeffs == other.coeffs
        if _is_rational_like(other):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.d, self.coeffs))
        return self._hash

    # -- text --------------------------------------------------------------

    def __str__(self) -> str:
        return format_cyclotomic(self)

    def __repr__(self) -> str:
        return f"CyclotomicScalar({self.d}, {str(self)!r})"

    def to_complex(self) -> complex:
        """Floating point value, for display only."""
        import cmath

        w = cmath.exp(2j * cmath.pi / self.d)
        return sum(float(c) * w**k for k, c in enumerate(self.coeffs))


def _fold(tables: _FieldTables, conv: list) -> tuple:
    phi = tables.phi
    out = conv[:phi]
    for k in range(phi, len(conv)):
        c = conv[k]
        if c:
            for idx, r in tables.reduction[k]:
                out[idx] += r * c
    return tuple(out)


def _reduce(tables: _FieldTables, raw: list) -> tuple:
    phi = tables.phi
    if len(raw) <= phi:
        return tuple(raw) + (_ZERO,) * (phi - len(raw))
    # x^k = x^(k mod d) for a primitive root, then fold once more
    folded = [_ZERO] * max(tables.d, phi)
    for k, c in enumerate(raw):
        folded[k % tables.d] += c
    out = [_ZERO] * phi
    for k, c in enumerate(folded):
        if c:
            for i, p in enumerate(tables.powers[k] if k < tables.d else ()):
                if p:
                    out[i] += p * c
    return tuple(out)


def format_cyclotomic(value: CyclotomicScalar) -> str:
    """Render as a w-polynomial in ascending degree, e.g. ``1/2+3*w^2-w``."""
    parts: list[str] = []
    for k, c in enumerate(value.coeffs):
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if k == 0:
            body = str(mag)
        else:
            power = "w" if k == 1 else f"w^{k}"
            body = power if mag == 1 else f"{mag}*{power}"
        parts.append(sign + body)
    if not parts:
        return "0"
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?P<num>\d+(?:/\d+)?)?\s*(?P<star>\*)?\s*"
    r"(?P<w>w(?:\s*\^\s*(?P<exp>-?\d+))?)?\s*"
)


def parse_cyclotomic(text: str, d: int) -> CyclotomicScalar:
    """Parse a literal such as ``1/2+3*w^2-w^1`` into Q(w) for the given d."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty cyclotomic literal")
    total = [_ZERO] * d
    pos = 0
    first = True
    stripped = text.strip()
    while pos < len(stripped):
        m = _TERM_RE.match(stripped, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"cannot parse cyclotomic literal {text!r} at offset {pos}")
        if not first and m.group("sign") is None:
            raise ParseError(f"missing operator in {text!r} at offset {pos}")
        num, star, w = m.group("num"), m.group("star"), m.group("w")
        if num is None and w is None:
            raise ParseError(f"empty term in {text!r} at offset {pos}")
        if star and (num is None or w is None):
            raise ParseError(f"dangling '*' in {text!r}")
        if num is not None and w is not None and not star:
            raise ParseError(f"expected '*' between coefficient and w in {text!r}")
        try:
            coef = gmpy2.mpq(num) if num is not None else _ONE
        except ZeroDivisionError as exc:
            raise ParseError(f"zero denominator in {text!r}") from exc
        if m.group("sign") == "-":
            coef = -coef
        exp = 0
        if w is not None:
            exp = int(m.group("exp")) if m.group("exp") is not None else 1
        total[exp % d] += coef
        pos = m.end()
        first = False
    return CyclotomicScalar(d, total)


# ---------------------------------------------------------------------------

Monomial = tuple[int, int, int]  # exponents of (u, v, z)


class LaurentScalar:
    """A Laurent polynomial in u, v, z with coefficients in Q(w)."""

    __slots__ = ("d", "terms", "_hash")

    def __init__(self, d: int, terms: Mapping[Monomial, object] | None = None) -> None:
        clean: dict[Monomial, CyclotomicScalar] = {}
        for mono, coef in (terms or {}).items():
            if len(mono) != 3 or not all(isinstance(e, int) for e in mono):
                raise ValueError(f"bad monomial exponent {mono!r}")
            if isinstance(coef, CyclotomicScalar):
                if coef.d != d:
                    raise ValueError("coefficient lives in a different cyclotomic field")
                c = coef
            else:
                c = CyclotomicScalar.constant(d, coef)
            if c:
                clean[tuple(mono)] = c
        self.d = d
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, d: int, terms: dict) -> "LaurentScalar":
        obj = object.__new__(cls)
        obj.d = d
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, d: int, value: object) -> "LaurentScalar":
        c = value if isinstance(value, CyclotomicScalar) else CyclotomicScalar.constant(d, value)
        return cls._raw(d, {(0, 0, 0): c} if c else {})

    @classmethod
    def monomial(cls, d: int, exponents: Monomial, coef: object = 1) -> "LaurentScalar":
        return cls(d, {tuple(exponents): coef})

    @classmethod
    def var(cls, d: int, name: str, power: int = 1) -> "LaurentScalar":
        slot = {"u": 0, "v": 1, "z": 2}[name]
        exps = [0, 0, 0]
        exps[slot] = power
        return cls.monomial(d, tuple(exps))

    # -- queries -----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0, 0, 0)}

    def constant_term(self) -> CyclotomicScalar:
        return self.terms.get((0, 0, 0), CyclotomicScalar.zero(self.d))

    def coefficient(self, exponents: Monomial) -> CyclotomicScalar:
        return self.terms.get(tuple(exponents), CyclotomicScalar.zero(self.d))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other: object) -> "LaurentScalar | None":
        if isinstance(other, LaurentScalar):
            if other.d != self.d:
                raise ValueError(f"mixing Laurent scalars over d={self.d} and d={other.d}")
            return other
        if isinstance(other, CyclotomicScalar):
            if other.d != self.d:
                raise ValueError("coefficient lives in a different cyclotomic field")
            return LaurentScalar.constant(self.d, other)
        if _is_rational_like(other):
            return LaurentScalar.constant(self.d, other)
        return None

    def __add__(self, other: object):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(o.terms) > len(self.terms):
            big, small = o.terms, self.terms
        else:
            big, small = self.terms, o.terms
        out = dict(big)
        for mono, c in small.items():
            cur = out.get(mono)
            if cur is None:
                out[mono] = c
            else:
                s = cur + c
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return LaurentScalar._raw(self.d, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentScalar":
        return LaurentScalar._raw(self.d, {m: -c for m, c in self.terms.items()})

    def __pos__(self) -> "LaurentScalar":
        return self

    def __sub__(self, other: object):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def _scale(self, c: CyclotomicScalar) -> "LaurentScalar":
        if not c:
            return LaurentScalar._raw(self.d, {})
        return LaurentScalar._raw(self.d, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other: object):
        if isinstance(other, CyclotomicScalar):
            if other.d != self.d:
                raise ValueError("coefficient lives in a different cyclotomic field")
            return self._scale(other)
        if _is_rational_like(other):
            r = to_rational(other)
            if not r:
                return LaurentScalar._raw(self.d, {})
            return LaurentScalar._raw(self.d, {m: v * r for m, v in self.terms.items()})
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        if other.d != self.d:
            raise ValueError(f"mixing Laurent scalars over d={self.d} and d={other.d}")
        out: dict[Monomial, CyclotomicScalar] = {}
        for (a1, b1, c1), x in self.terms.items():
            for (a2, b2, c2), y in other.terms.items():
                mono = (a1 + a2, b1 + b2, c1 + c2)
                p = x * y
                cur = out.get(mono)
                if cur is None:
                    out[mono] = p
                else:
                    s = cur + p
                    if s:
                        out[mono] = s
                    else:
                        del out[mono]
        for mono in out:
            if max(abs(e) for e in mono) > EXPONENT_LIMIT:
                raise OverflowError("Laurent exponent out of range")
        return LaurentScalar._raw(self.d, out)

    __rmul__ = __mul__

    def __truediv__(self, other: object):
        if _is_rational_like(other) or isinstance(other, CyclotomicScalar):
            inv = 1 / to_rational(other) if _is_rational_like(other) else other.inverse()
            return self * inv
        if isinstance(other, LaurentScalar) and len(other.terms) == 1:
            return self * other ** -1
        return NotImplemented

    def __pow__(self, exponent: int) -> "LaurentScalar":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            if len(self.terms) != 1:
                raise ArithmeticError("only monomials are invertible Laurent scalars")
            ((a, b, c), coef), = self.terms.items()
            e = -exponent
            return LaurentScalar._raw(self.d, {(-a * e, -b * e, -c * e): coef.inverse() ** e})
        result = LaurentScalar.constant(self.d, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison --------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentScalar):
            return self.d == other.d and self.terms == other.terms
        if isinstance(other, CyclotomicScalar) or _is_rational_like(other):
            if not self.terms:
                return other == 0
            return self.is_constant() and self.terms[(0, 0, 0)] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_term())
            else:
                self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self) -> str:
        return canonical_string(self)

    def __repr__(self) -> str:
        return f"LaurentScalar({self.d}, {canonical_string(self)!r})"

    def substitute(self, u: RationalLike, v: RationalLike, z: RationalLike) -> CyclotomicScalar:
        return laurent_substitute(self, u, v, z)


def laurent_substitute(
    value: LaurentScalar, u: RationalLike, v: RationalLike, z: RationalLike
) -> CyclotomicScalar:
    """Evaluate at non-zero rationals u, v, z."""
    u0, v0, z0 = to_rational(u), to_rational(v), to_rational(z)
    if not (u0 and v0 and z0):
        raise ZeroDivisionError("Laurent polynomials are evaluated at non-zero points only")
    total = CyclotomicScalar.zero(value.d)
    for (a, b, c), coef in value.terms.items():
        total = total + coef * (u0**a * v0**b * z0**c)
    return total


def _render_monomial(mono: Monomial) -> str:
    factors = []
    for name, exp in (("z", mono[2]), ("u", mono[0]), ("v", mono[1])):
        if exp == 1:
            factors.append(name)
        elif exp:
            factors.append(f"{name}^{exp}")
    return "*".join(factors)


def canonical_string(value: LaurentScalar | CyclotomicScalar | RationalLike) -> str:
    """Deterministic text form used for comparisons and CLI output.

    Monomials are sorted by decreasing (z, u, v) degree, each coefficient is a
    parenthesised w-polynomial, and the zero polynomial renders as ``0``.
    """
    if isinstance(value, CyclotomicScalar):
        return "0" if not value else f"({format_cyclotomic(value)})"
    if _is_rational_like(value):
        r = to_rational(value)
        return "0" if not r else f"({r})"
    if not value.terms:
        return "0"
    order = sorted(value.terms, key=lambda m: (m[2], m[0], m[1]), reverse=True)
    parts = []
    for mono in order:
        coef = f"({format_cyclotomic(value.terms[mono])})"
        mono_text = _render_monomial(mono)
        parts.append(f"{coef}*{mono_text}" if mono_text else coef)
    return " + ".join(parts)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarDomain:
    """The coefficient ring the algebra engine computes in.

    ``point=None`` gives symbolic Laurent scalars; a rational triple
    ``(u0, v0, z0)`` gives the specialisation of every quantity at that point.
    """

    d: int
    point: tuple[gmpy2.mpq, gmpy2.mpq, gmpy2.mpq] | None = None

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("d must be a positive integer")
        if self.point is not None:
            pt = tuple(to_rational(x) for x in self.point)
            if len(pt) != 3 or not all(pt):
                raise ValueError("specialisation point must be three non-zero rationals")
            object.__setattr__(self, "point", pt)

    @classmethod
    def symbolic(cls, d: int) -> "ScalarDomain":
        return cls(d)

    @classmethod
    def at(cls, d: int, u: RationalLike, v: RationalLike, z: RationalLike) -> "ScalarDomain":
        return cls(d, (to_rational(u), to_rational(v), to_rational(z)))

    @property
    def is_symbolic(self) -> bool:
        return self.point is None

    def const(self, value: object):
        """Embed a rational or cyclotomic constant."""
        if self.point is None:
            return LaurentScalar.constant(self.d, value)
        if isinstance(value, CyclotomicScalar):
            return value
        return CyclotomicScalar.constant(self.d, value)

    def specialize(self, value: object):
        """Map a symbolic scalar into this domain."""
        if isinstance(value, LaurentScalar):
            if self.point is None:
                return value
            return laurent_substitute(value, *self.point)
        return self.const(value)

    def _var(self, name: str):
        if self.point is None:
            return LaurentScalar.var(self.d, name)
        return CyclotomicScalar.constant(self.d, self.point["uvz".index(name)])

    @cached_property
    def zero(self):
        return self.const(0)

    @cached_property
    def one(self):
        return self.const(1)

    @cached_property
    def u(self):
        return self._var("u")

    @cached_property
    def v(self):
        return self._var("v")

    @cached_property
    def z(self):
        return self._var("z")

    @cached_property
    def u_minus(self):
        """u - u^-1."""
        return self.u - self.u ** -1

    @cached_property
    def v_minus(self):
        """v - v^-1."""
        return self.v - self.v ** -1

    @cached_property
    def inv_d(self) -> gmpy2.mpq:
        return gmpy2.mpq(1, self.d)

    def omega(self, k: int) -> CyclotomicScalar:
        return CyclotomicScalar.omega(self.d, k)
