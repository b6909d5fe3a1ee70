"""Exact arithmetic in real quadratic fields.

A :class:`QuadIrr` is the number ``(p + q*sqrt(D))/r`` held in canonical form.
Rationals are plain :class:`fractions.Fraction` values; every operation that
would produce a vanishing ``sqrt(D)`` coefficient demotes its result to a
``Fraction``.  Nothing in this module touches floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import total_ordering
from math import gcd, isqrt
from typing import Iterator, Union

from .errors import (
    DivisionByZero,
    MixedDiscriminant,
    NotUnimodular,
    ParseError,
    RationalInput,
    RationalValue,
    ZeroDenominator,
)

Rational = Fraction
Number = Union["QuadIrr", Fraction]

__all__ = [
    "CFExpansion",
    "Mat2Z",
    "Number",
    "QuadIrr",
    "Rational",
    "cf_expand",
    "complete_quotient",
    "convergent_matrix",
    "convergent_matrices",
    "coords",
    "discriminant_of",
    "from_coords",
    "mobius_apply",
    "parse_number",
    "parse_quad",
    "quad_arith",
    "quad_normalize",
    "squarefree_part",
]


def squarefree_part(n: int) -> tuple[int, int]:
    """Split ``n > 0`` as ``f*f*s`` with ``s`` squarefree; return ``(f, s)``."""
    if n <= 0:
        raise ValueError(f"expected a positive integer, got {n}")
    f, s = 1, n
    p = 2
    while p * p <= s:
        pp = p * p
        while s % pp == 0:
            s //= pp
            f *= p
        p += 1 if p == 2 else 2
    return f, s


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


@total_ordering
@dataclass(frozen=True)
class QuadIrr:
    """``(p + q*sqrt(D))/r`` with ``r > 0``, ``gcd(p, q, r) == 1``, ``q != 0``, ``D`` squarefree > 1.

    Build values with :func:`quad_normalize` or :func:`parse_quad`; the
    constructor only accepts data that is already canonical.
    """

    p: int
    q: int
    r: int
    D: int

    def __post_init__(self):
        if self.r <= 0 or self.q == 0 or self.D <= 1:
            raise ValueError(f"non-canonical QuadIrr data {self.p, self.q, self.r, self.D}")
        if gcd(gcd(self.p, self.q), self.r) != 1 or squarefree_part(self.D)[0] != 1:
            raise ValueError(f"non-canonical QuadIrr data {self.p, self.q, self.r, self.D}")

    # -- coordinates ---------------------------------------------------------

    @property
    def rational_part(self) -> Fraction:
        return Fraction(self.p, self.r)

    @property
    def irrational_part(self) -> Fraction:
        """Coefficient of ``sqrt(D)``."""
        return Fraction(self.q, self.r)

    def conjugate(self) -> QuadIrr:
        return QuadIrr(self.p, -self.q, self.r, self.D)

    def norm(self) -> Fraction:
        return Fraction(self.p * self.p - self.q * self.q * self.D, self.r * self.r)

    def trace(self) -> Fraction:
        return Fraction(2 * self.p, self.r)

    # -- order ---------------------------------------------------------------

    def sign(self) -> int:
        # sign of p + q*sqrt(D); never zero because q != 0 and D is not a square
        p, q, D = self.p, self.q, self.D
        if p >= 0 and q > 0:
            return 1
        if p <= 0 and q < 0:
            return -1
        if p * p > q * q * D:
            return 1 if p > 0 else -1
        return 1 if q > 0 else -1

    def floor(self) -> int:
        # q*sqrt(D) lies strictly between two consecutive integers
        s = isqrt(self.q * self.q * self.D)
        n = s if self.q > 0 else -s - 1
        return (self.p + n) // self.r

    def __lt__(self, other):
        try:
            return _sign(self - other) < 0
        except TypeError:
            return NotImplemented

    def __bool__(self):
        return True

    # -- arithmetic ----------------------------------------------------------

    def __neg__(self):
        return QuadIrr(-self.p, -self.q, self.r, self.D)

    def __pos__(self):
        return self

    def __add__(self, other):
        return _binop(self, "+", other)

    def __radd__(self, other):
        return _binop(other, "+", self)

    def __sub__(self, other):
        return _binop(self, "-", other)

    def __rsub__(self, other):
        return _binop(other, "-", self)

    def __mul__(self, other):
        return _binop(self, "*", other)

    def __rmul__(self, other):
        return _binop(other, "*", self)

    def __truediv__(self, other):
        return _binop(self, "/", other)

    def __rtruediv__(self, other):
        return _binop(other, "/", self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        result: Number = Fraction(1)
        base: Number = self if n >= 0 else 1 / self
        for _ in range(abs(n)):
            result = result * base
        return result

    # -- rendering -----------------------------------------------------------

    def __str__(self):
        p, q, r, D = self.p, self.q, self.r, self.D
        root = f"sqrt({D})"
        if abs(q) != 1:
            root = f"{abs(q)}*{root}"
        if p == 0:
            body = root if q > 0 else f"-{root}"
            return body if r == 1 else f"{body}/{r}"
        body = f"{p} {'+' if q > 0 else '-'} {root}"
        return body if r == 1 else f"({body})/{r}"

    def __repr__(self):
        return f"QuadIrr({self})"

    def decimal_str(self, digits: int = 20) -> str:
        """Display-only decimal rendering, truncated toward minus infinity."""
        scale = 10**digits
        n = self.q * self.q * self.D * scale * scale
        s = isqrt(n)
        root = s if self.q > 0 else -s - 1
        num = (self.p * scale + root) // self.r
        with localcontext() as ctx:
            ctx.prec = digits + len(str(abs(num))) + 2
            return str(Decimal(num).scaleb(-digits))


def _sign(x: Number) -> int:
    if isinstance(x, QuadIrr):
        return x.sign()
    return (x > 0) - (x < 0)


def discriminant_of(x: Number) -> int | None:
    return x.D if isinstance(x, QuadIrr) else None


def coords(x: Number) -> tuple[Fraction, Fraction]:
    """Coordinates ``(a, b)`` of ``x = a + b*sqrt(D)``."""
    if isinstance(x, QuadIrr):
        return x.rational_part, x.irrational_part
    return _as_fraction(x), Fraction(0)


def from_coords(a: Fraction, b: Fraction, D: int | None) -> Number:
    """Assemble ``a + b*sqrt(D)``; demotes to ``Fraction`` when ``b == 0``."""
    a, b = _as_fraction(a), _as_fraction(b)
    if b == 0:
        return a
    if D is None:
        raise ValueError("irrational coordinate without a discriminant")
    r = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    p = a.numerator * (r // a.denominator)
    q = b.numerator * (r // b.denominator)
    g = gcd(gcd(p, q), r)
    return QuadIrr(p // g, q // g, r // g, D)


def quad_normalize(p: int, q: int, r: int, D: int) -> QuadIrr:
    """Canonical form of ``(p + q*sqrt(D))/r``.

    Raises ``ZeroDenominator`` for ``r == 0`` and ``RationalValue`` when the
    value is rational (``q == 0`` or ``D`` a perfect square).
    """
    if r == 0:
        raise ZeroDenominator("denominator is zero")
    if D <= 0:
        raise ValueError(f"D must be positive, got {D}")
    f, s = squarefree_part(D)
    q *= f
    if q == 0 or s == 1:
        raise RationalValue(f"({p} + {q}*sqrt({D}))/{r} is rational")
    if r < 0:
        p, q, r = -p, -q, -r
    g = gcd(gcd(p, q), r)
    return QuadIrr(p // g, q // g, r // g, s)


def _common_D(x: Number, y: Number) -> int | None:
    dx, dy = discriminant_of(x), discriminant_of(y)
    if dx is not None and dy is not None and dx != dy:
        raise MixedDiscriminant(f"sqrt({dx}) and sqrt({dy}) live in different fields")
    return dx if dx is not None else dy


def _triple(x) -> tuple[int, int, int]:
    if isinstance(x, QuadIrr):
        return x.p, x.q, x.r
    if isinstance(x, Fraction):
        return x.numerator, 0, x.denominator
    return x, 0, 1


def _make(p: int, q: int, r: int, D: int | None) -> Number:
    # canonical result from integer data; D is already squarefree here
    if q == 0:
        return Fraction(p, r)
    if r < 0:
        p, q, r = -p, -q, -r
    g = gcd(gcd(p, q), r)
    if g != 1:
        p, q, r = p // g, q // g, r // g
    x = object.__new__(QuadIrr)
    object.__setattr__(x, "p", p)
    object.__setattr__(x, "q", q)
    object.__setattr__(x, "r", r)
    object.__setattr__(x, "D", D)
    return x


def _binop(x, op: str, y) -> Number:
    if not isinstance(x, (QuadIrr, Fraction, int)) or not isinstance(y, (QuadIrr, Fraction, int)):
        return NotImplemented
    D = _common_D(x, y)
    p1, q1, r1 = _triple(x)
    p2, q2, r2 = _triple(y)
    if op == "+":
        return _make(p1 * r2 + p2 * r1, q1 * r2 + q2 * r1, r1 * r2, D)
    if op == "-":
        return _make(p1 * r2 - p2 * r1, q1 * r2 - q2 * r1, r1 * r2, D)
    if op == "*":
        if D is None:
            return Fraction(p1 * p2, r1 * r2)
        return _make(p1 * p2 + q1 * q2 * D, p1 * q2 + q1 * p2, r1 * r2, D)
    if op == "/":
        if p2 == 0 and q2 == 0:
            raise DivisionByZero(f"division of {x} by zero")
        if D is None:
            return Fraction(p1 * r2, r1 * p2)
        # multiply by the conjugate of the divisor
        n = p2 * p2 - q2 * q2 * D
        return _make(
            (p1 * p2 - q1 * q2 * D) * r2, (q1 * p2 - p1 * q2) * r2, r1 * n, D
        )
    raise ValueError(f"unknown operator {op!r}")


def quad_arith(x: Number, op: str, y: Number) -> Number:
    """Exact ``x op y`` for ``op`` in ``+ - * /`` (``×``, ``÷`` and ``−`` accepted too)."""
    op = {"×": "*", "÷": "/", "−": "-"}.get(op, op)
    if op not in ("+", "-", "*", "/"):
        raise ValueError(f"unknown operator {op!r}")
    return _binop(x, op, y)


# ---------------------------------------------------------------------------
# GL2(Z)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Mat2Z:
    """Integer matrix ``[[a, b], [c, d]]`` with determinant +1 or -1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if abs(self.det) != 1:
            raise NotUnimodular(f"|det| of {self.rows()} is {abs(self.det)}, not 1")

    @classmethod
    def identity(cls) -> Mat2Z:
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def entries(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    def __matmul__(self, other: Mat2Z) -> Mat2Z:
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return Mat2Z(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> Mat2Z:
        # adjugate divided by a unit determinant
        s = self.det
        return Mat2Z(s * self.d, -s * self.b, -s * self.c, s * self.a)

    def adjugate(self) -> Mat2Z:
        return Mat2Z(self.d, -self.b, -self.c, self.a)

    def max_abs(self) -> int:
        return max(abs(e) for e in self.entries())

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def mobius_apply(M: Mat2Z, x: Number) -> Number:
    """``(a*x + b)/(c*x + d)`` computed exactly."""
    return (M.a * x + M.b) / (M.c * x + M.d)


# ---------------------------------------------------------------------------
# Continued fractions
# ---------------------------------------------------------------------------


def _least_rotation(seq: tuple[int, ...]) -> int:
    n = len(seq)
    return min(range(n), key=lambda i: seq[i:] + seq[:i])


@dataclass(frozen=True)
class CFExpansion:
    """Eventually periodic simple continued fraction ``[pre...; (period)...]``.

    ``period`` is the lexicographically least rotation of the minimal period;
    ``preperiod`` absorbs whatever the rotation shifted out of the cycle.
    """

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        seq = self.preperiod + self.period
        if any(a < 1 for a in seq[1:]):
            raise ValueError(f"partial quotients after a0 must be >= 1: {seq}")

    def quotient(self, i: int) -> int:
        pre = len(self.preperiod)
        if i < pre:
            return self.preperiod[i]
        return self.period[(i - pre) % len(self.period)]

    def quotients(self) -> Iterator[int]:
        i = 0
        while True:
            yield self.quotient(i)
            i += 1

    def value(self, D: int | None = None) -> QuadIrr:
        """Re-evaluate the expansion exactly.

        The periodic tail ``y`` satisfies ``y = P.y`` for the product matrix
        ``P`` of its period; ``y > 1`` picks the larger root of
        ``c*y^2 + (d - a)*y - b = 0``.  The preperiod is folded on afterwards.
        Passing the field ``D`` avoids factoring the (large) discriminant.
        """
        P = Mat2Z.identity()
        for a in self.period:
            P = P @ Mat2Z(a, 1, 1, 0)
        a, b, c, d = P.entries()
        disc = (d - a) ** 2 + 4 * b * c
        f = isqrt(disc // D) if D else 0
        if D and D * f * f == disc:
            y = quad_normalize(a - d, f, 2 * c, D)
        else:
            y = quad_normalize(a - d, 1, 2 * c, disc)
        return mobius_apply(_quotient_product(self.preperiod), y)

    def __str__(self):
        pre = ", ".join(map(str, self.preperiod))
        per = ", ".join(map(str, self.period))
        return f"[{pre}; ({per})]"


def _quotient_product(quotients) -> Mat2Z:
    M = Mat2Z.identity()
    for a in quotients:
        M = M @ Mat2Z(a, 1, 1, 0)
    return M


def _pqa_start(x: QuadIrr) -> tuple[int, int, int]:
    # x = (P + sqrt(d))/Q with Q | d - P^2
    p, q, r, D = x.p, x.q, x.r, x.D
    P, Q, d = (p, r, q * q * D) if q > 0 else (-p, -r, q * q * D)
    if (d - P * P) % Q:
        P, Q, d = P * abs(Q), Q * abs(Q), d * Q * Q
    return P, Q, d


def cf_expand(x: QuadIrr) -> CFExpansion:
    """Continued fraction of a quadratic irrational via the PQa recurrence."""
    if not isinstance(x, QuadIrr):
        raise RationalInput(f"{x} is rational")
    P, Q, d = _pqa_start(x)
    s = isqrt(d)
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    # a0 always stays in the preperiod, so cycle detection starts at x1
    while not quotients or (P, Q) not in seen:
        if quotients:
            seen[P, Q] = len(quotients)
        # floor((P + sqrt(d))/Q); sqrt(d) is irrational so floor(sqrt(d)) = s suffices
        a = (P + s) // Q if Q > 0 else (P + s + 1) // Q
        quotients.append(a)
        P = a * Q - P
        Q = (d - P * P) // Q
    start = seen[P, Q]
    pre, per = tuple(quotients[:start]), tuple(quotients[start:])
    t = _least_rotation(per)
    return CFExpansion(pre + per[:t], per[t:] + per[:t])


def convergent_matrix(cf: CFExpansion, k: int) -> Mat2Z:
    """Product of the first ``k`` quotient matrices ``[[a_i, 1], [1, 0]]``."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return _quotient_product(cf.quotient(i) for i in range(k))


def convergent_matrices(cf: CFExpansion, count: int) -> Iterator[Mat2Z]:
    """``convergent_matrix(cf, k)`` for ``k = 0 .. count - 1``, built incrementally."""
    M = Mat2Z.identity()
    for k in range(count):
        yield M
        M = M @ Mat2Z(cf.quotient(k), 1, 1, 0)


def complete_quotient(x: QuadIrr, cf: CFExpansion, k: int) -> QuadIrr:
    """The k-th complete quotient ``x_k``, so that ``x = convergent_matrix(cf, k) . x_k``."""
    return mobius_apply(convergent_matrix(cf, k).inverse(), x)


# ---------------------------------------------------------------------------
# Text grammar: (p + q*sqrt(D))/r and friends
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt)|(.))")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        tok = m.group(1) or m.group(2) or m.group(3)
        if tok is None:
            break
        if m.group(3) and tok not in "+-*/()":
            raise ParseError(f"unexpected character {tok!r} in {text!r}")
        tokens.append(tok)
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'a token'} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> Number:
        if not self.tokens:
            raise ParseError("empty expression")
        value = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.peek()!r} in {self.text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary(self):
        if self.peek() in ("+", "-"):
            op = self.take()
            value = self.unary()
            return -value if op == "-" else value
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok == "(":
            self.take("(")
            value = self.expr()
            self.take(")")
            return value
        if tok == "sqrt":
            self.take()
            self.take("(")
            arg = self.take()
            if not arg.isdigit():
                raise ParseError(f"sqrt takes an integer literal in {self.text!r}")
            self.take(")")
            n = int(arg)
            if n == 0:
                return Fraction(0)
            f, s = squarefree_part(n)
            return Fraction(f) if s == 1 else QuadIrr(0, f, 1, s)
        if tok is not None and tok.isdigit():
            self.take()
            return Fraction(int(tok))
        raise ParseError(f"unexpected {tok!r} in {self.text!r}")


def parse_number(text: str) -> Number:
    """Parse a rational or quadratic irrational, e.g. ``(1+sqrt(5))/2`` or ``3/4``."""
    try:
        return _Parser(text).parse()
    except (ZeroDivisionError, MixedDiscriminant) as exc:
        raise ParseError(f"{text!r}: {exc}") from exc


def parse_quad(text: str) -> QuadIrr:
    """Like :func:`parse_number` but rejects rational values with ``RationalInput``."""
    value = parse_number(text)
    if not isinstance(value, QuadIrr):
        raise RationalInput(f"{text!r} is rational")
    return value
