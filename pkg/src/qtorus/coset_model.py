"""Exponent-level model of the unit circle.

A point ``exp(2*pi*i*alpha)`` is stored as its exponent ``alpha`` in a fixed
real quadratic field.  The subgroup ``Gamma_q`` generated by
``q = exp(2*pi*i*theta)`` becomes, after collapsing the integers that ``exp``
kills, the lattice ``Z*theta + Z``; its cosets and the power relation
``C_theta`` are decided by exact linear algebra over the basis ``{1, sqrt(D)}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalDegeneracy, MixedDiscriminant, RationalInput
from .quad_field import Number, QuadIrr, coords, discriminant_of


def _shared_D(*values: Number) -> int | None:
    found = {discriminant_of(v) for v in values} - {None}
    if len(found) > 1:
        raise MixedDiscriminant(f"values from fields with D in {sorted(found)}")
    return found.pop() if found else None


@dataclass(frozen=True)
class ExpPoint:
    """The unit-circle point ``exp(2*pi*i*alpha)``."""

    alpha: Number

    def __post_init__(self):
        if isinstance(self.alpha, int):
            object.__setattr__(self, "alpha", Fraction(self.alpha))

    def power(self, n: int) -> ExpPoint:
        return ExpPoint(n * self.alpha)

    def __mul__(self, other: ExpPoint) -> ExpPoint:
        return ExpPoint(self.alpha + other.alpha)

    def __str__(self):
        return f"exp(2*pi*i*({self.alpha}))"


@dataclass(frozen=True)
class Lattice:
    """The subgroup ``Z*theta + Z`` of the reals."""

    theta: QuadIrr

    def __post_init__(self):
        if not isinstance(self.theta, QuadIrr):
            raise RationalInput(f"lattice parameter {self.theta} must be irrational")

    def element(self, m: int, n: int) -> Number:
        return m * self.theta + n

    def __str__(self):
        return f"Z*({self.theta}) + Z"


def lattice_coords(xi: Number, L: Lattice) -> tuple[Fraction, Fraction]:
    """The unique rationals ``(m, n)`` with ``xi = m*theta + n``."""
    _shared_D(xi, L.theta)
    x0, x1 = coords(xi)
    t0, t1 = coords(L.theta)
    if t1 == 0:
        raise InternalDegeneracy(f"lattice parameter {L.theta} has no sqrt part")
    m = x1 / t1
    return m, x0 - m * t0


def lattice_member(xi: Number, L: Lattice) -> bool:
    m, n = lattice_coords(xi, L)
    return m.denominator == 1 and n.denominator == 1


def ctheta_witness(x: ExpPoint, y: ExpPoint, theta: Number) -> tuple[int, int] | None:
    """Integers ``(k, n)`` with ``y.alpha = theta*(x.alpha + k) + n``, if any.

    ``theta`` is irrational in every torus parameter; a rational ``theta``
    only shows up as a lattice scaling of +-1 and is handled separately,
    since then ``theta*Z + Z`` has rank one and ``(k, n)`` is not unique.
    """
    _shared_D(x.alpha, y.alpha, theta)
    t = y.alpha - theta * x.alpha
    if not isinstance(theta, QuadIrr):
        return _rational_witness(t, Fraction(theta))
    k, n = lattice_coords(t, Lattice(theta))
    if k.denominator == 1 and n.denominator == 1:
        return int(k), int(n)
    return None


def _rational_witness(t: Number, theta: Fraction) -> tuple[int, int] | None:
    # theta = p/r: k*p/r + n = t  <=>  k*p + n*r = t*r
    if isinstance(t, QuadIrr) or theta == 0:
        return None if isinstance(t, QuadIrr) or t.denominator != 1 else (0, int(t))
    target = t * theta.denominator
    if target.denominator != 1:
        return None
    g, u, w = _egcd(theta.numerator, theta.denominator)
    scale = int(target) // g
    return u * scale, w * scale


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def ctheta_related(x: ExpPoint, y: ExpPoint, theta: Number) -> bool:
    """Whether ``y`` is one of the values of ``x^theta``."""
    return ctheta_witness(x, y, theta) is not None


class CosetId:
    """The coset ``exp(2*pi*i*(rep_alpha + lattice))``; equality is lattice membership of the difference."""

    __slots__ = ("lattice", "rep_alpha")

    def __init__(self, lattice: Lattice, rep_alpha: Number):
        _shared_D(rep_alpha, lattice.theta)
        self.lattice = lattice
        self.rep_alpha = Fraction(rep_alpha) if isinstance(rep_alpha, int) else rep_alpha

    def __eq__(self, other):
        if not isinstance(other, CosetId):
            return NotImplemented
        return self.lattice == other.lattice and lattice_member(
            self.rep_alpha - other.rep_alpha, self.lattice
        )

    def __hash__(self):
        # reduce the representative modulo the lattice: m, n to [0, 1)
        m, n = lattice_coords(self.rep_alpha, self.lattice)
        return hash((self.lattice, m - (m.numerator // m.denominator), n - (n.numerator // n.denominator)))

    def contains(self, point: ExpPoint) -> bool:
        return lattice_member(point.alpha - self.rep_alpha, self.lattice)

    def __repr__(self):
        return f"CosetId({self.rep_alpha} + {self.lattice})"


def scaling_matrix(theta1: QuadIrr, theta2: QuadIrr, theta: Number) -> tuple[Fraction, ...]:
    """Rational ``(a, b, c, d)`` with ``theta*theta1 = a*theta2 + b`` and ``theta = c*theta2 + d``."""
    _shared_D(theta1, theta2, theta)
    L2 = Lattice(theta2)
    a, b = lattice_coords(theta * theta1, L2)
    c, d = lattice_coords(theta, L2)
    return a, b, c, d


def cosets_correspond(theta1: QuadIrr, theta2: QuadIrr, theta: Number) -> bool:
    """Whether multiplication by ``theta`` maps ``Z*theta1 + Z`` onto ``Z*theta2 + Z``."""
    _shared_D(theta1, theta2, theta)
    if theta == 0:
        return False
    L1, L2 = Lattice(theta1), Lattice(theta2)
    forward = lattice_member(theta * theta1, L2) and lattice_member(theta, L2)
    backward = lattice_member(theta2 / theta, L1) and lattice_member(1 / theta, L1)
    return forward and backward


def coset_image(a: CosetId, theta: Number, L2: Lattice) -> CosetId | None:
    """Image coset of ``a`` under ``C_theta``, or ``None`` when cosets do not correspond."""
    if not cosets_correspond(a.lattice.theta, L2.theta, theta):
        return None
    return CosetId(L2, theta * a.rep_alpha)
