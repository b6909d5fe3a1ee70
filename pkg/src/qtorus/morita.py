"""Deciding when two quadratic-irrational tori are Morita equivalent.

``theta1`` and ``theta2`` are equivalent exactly when they lie in one
GL2(Z) orbit, which for quadratic irrationals means their continued
fractions share a tail (Serret).  A positive answer comes with an explicit
matrix and the scaling factor ``theta`` that carries ``Z*theta1 + Z`` onto
``Z*theta2 + Z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .coset_model import cosets_correspond
from .errors import InconsistentWitness, InvalidWitness, RationalInput
from .quad_field import (
    CFExpansion,
    Mat2Z,
    Number,
    QuadIrr,
    cf_expand,
    complete_quotient,
    convergent_matrix,
    mobius_apply,
)


def _require_irrational(*values):
    for v in values:
        if not isinstance(v, QuadIrr):
            raise RationalInput(f"{v} is rational; theta parameters must be irrational")


@dataclass(frozen=True)
class MoritaWitness:
    """``matrix`` sends ``theta1`` to ``theta2``; ``scaling_theta`` maps the lattices."""

    theta1: QuadIrr
    theta2: QuadIrr
    matrix: Mat2Z
    scaling_theta: Number
    tail_indices: tuple[int, int] = (0, 0)

    def problems(self) -> list[str]:
        out = []
        if mobius_apply(self.matrix, self.theta1) != self.theta2:
            out.append(f"{self.matrix} does not send {self.theta1} to {self.theta2}")
        if not cosets_correspond(self.theta1, self.theta2, self.scaling_theta):
            out.append(f"scaling {self.scaling_theta} does not map the lattices")
        return out

    def verify(self) -> None:
        problems = self.problems()
        if problems:
            raise InvalidWitness("; ".join(problems))

    def proof_matrix(self) -> Mat2Z:
        """The matrix ``(a, b; c, d)`` of the lattice map ``theta*theta1 = a*theta2 + b``, ``theta = c*theta2 + d``."""
        return proof_matrix(self.matrix, self.theta2)

    def inverse(self) -> MoritaWitness:
        return MoritaWitness(
            self.theta2,
            self.theta1,
            self.matrix.inverse(),
            1 / self.scaling_theta,
            (self.tail_indices[1], self.tail_indices[0]),
        )

    def then(self, other: MoritaWitness) -> MoritaWitness:
        """Compose ``theta1 -> theta2`` with ``theta2 -> theta3``."""
        if other.theta1 != self.theta2:
            raise ValueError("witnesses do not chain")
        return MoritaWitness(
            self.theta1,
            other.theta2,
            other.matrix @ self.matrix,
            self.scaling_theta * other.scaling_theta,
            (self.tail_indices[0], other.tail_indices[1]),
        )


@dataclass(frozen=True)
class NotEquivalent:
    theta1: QuadIrr
    theta2: QuadIrr
    reason: str
    evidence: dict = field(default_factory=dict)

    def __bool__(self):
        return False


def proof_matrix(W: Mat2Z, theta2: QuadIrr) -> Mat2Z:
    """Lattice-map matrix ``(a, b; c, d)`` for a witness ``W``.

    Its adjugate is ``+-W``, so ``theta2 = (d*theta1 - b)/(-c*theta1 + a)``.
    Of the two signs the one giving a positive scaling ``c*theta2 + d`` is used.
    """
    P = W.adjugate()
    if P.c * theta2 + P.d < 0:
        P = Mat2Z(-P.a, -P.b, -P.c, -P.d)
    return P


def scaling_from_matrix(W: Mat2Z, theta2: QuadIrr) -> Number:
    """``theta = c*theta2 + d`` for the lattice-map entries belonging to ``W``."""
    P = proof_matrix(W, theta2)
    return P.c * theta2 + P.d


def solve_eq8(P: Mat2Z, theta1: QuadIrr, theta2: QuadIrr) -> Number:
    """Scaling ``theta = c*theta2 + d`` checked against ``(a*theta2 + b)/theta1``.

    ``P = (a, b; c, d)`` is oriented as the lattice map, i.e.
    ``theta2 = (d*theta1 - b)/(-c*theta1 + a)``.  A rational result (only
    ``c == 0`` can give one) is returned as is; the lattices then coincide.
    """
    _require_irrational(theta1, theta2)
    theta = P.c * theta2 + P.d
    other = (P.a * theta2 + P.b) / theta1
    if theta != other:
        raise InconsistentWitness(f"c*theta2 + d = {theta} but (a*theta2 + b)/theta1 = {other}")
    return theta


def theta2_from_proof_matrix(P: Mat2Z, theta1: QuadIrr) -> Number:
    """``theta2 = (d*theta1 - b)/(-c*theta1 + a)``."""
    return (P.d * theta1 - P.b) / (-P.c * theta1 + P.a)


def make_witness(theta1: QuadIrr, theta2: QuadIrr, W: Mat2Z, tail_indices=(0, 0)) -> MoritaWitness:
    """Assemble and verify a witness from a matrix sending ``theta1`` to ``theta2``."""
    theta = solve_eq8(proof_matrix(W, theta2), theta1, theta2)
    witness = MoritaWitness(theta1, theta2, W, theta, tuple(tail_indices))
    witness.verify()
    return witness


def decide_morita(theta1: QuadIrr, theta2: QuadIrr) -> MoritaWitness | NotEquivalent:
    _require_irrational(theta1, theta2)
    if theta1.D != theta2.D:
        return NotEquivalent(
            theta1, theta2, "different quadratic fields", {"D1": theta1.D, "D2": theta2.D}
        )
    cf1, cf2 = cf_expand(theta1), cf_expand(theta2)
    if cf1.period != cf2.period:
        return NotEquivalent(
            theta1,
            theta2,
            "continued fraction tails differ",
            {"cf1": _cf_json(cf1), "cf2": _cf_json(cf2)},
        )
    # both periods are the canonical rotation, so the tails agree right after the preperiods
    i, j = len(cf1.preperiod), len(cf2.preperiod)
    if complete_quotient(theta1, cf1, i) != complete_quotient(theta2, cf2, j):
        raise InconsistentWitness("equal periods but different complete quotients")
    W = convergent_matrix(cf2, j) @ convergent_matrix(cf1, i).inverse()
    return make_witness(theta1, theta2, W, (i, j))


def _cf_json(cf: CFExpansion) -> dict:
    return {"preperiod": list(cf.preperiod), "period": list(cf.period)}


def brute_force_search(theta1: QuadIrr, theta2: QuadIrr, bound: int) -> Mat2Z | None:
    """First witness with entries in ``[-bound, bound]``, or ``None``.

    ``M`` and ``-M`` act identically, so candidates are sign-normalised (first
    nonzero entry positive) and ordered by height ``max|entry|``, then
    lexicographically.  For fixed ``(c, d)`` the equation
    ``theta2*(c*theta1 + d) = a*theta1 + b`` pins ``(a, b)`` down uniquely, so
    only the ``(c, d)`` plane is swept; the result is the same as scanning all
    four entries.
    """
    _require_irrational(theta1, theta2)
    if bound < 1:
        raise ValueError(f"bound must be positive, got {bound}")
    if theta1.D != theta2.D:
        return None
    # exact integer form: theta1 = (t0 + t1 s)/tr, theta2*theta1 = (x0 + x1 s)/N, theta2 = (y0 + y1 s)/N
    prod = theta2 * theta1
    t0, t1, tr = theta1.p, theta1.q, theta1.r
    x0, x1 = _scaled(prod)
    y0, y1 = _scaled(theta2)
    N = _denominator(prod) * theta2.r
    x0, x1 = x0 * theta2.r, x1 * theta2.r
    y0, y1 = y0 * _denominator(prod), y1 * _denominator(prod)
    best = None
    for c in range(-bound, bound + 1):
        for d in range(-bound, bound + 1):
            if c == 0 and d == 0:
                continue
            s0, s1 = c * x0 + d * y0, c * x1 + d * y1
            # a = tr*s1 / (N*t1); b = (s0 - a*t0*N/tr)/N
            num, den = tr * s1, N * t1
            if num % den:
                continue
            a = num // den
            bnum = s0 * tr - a * t0 * N
            if bnum % (N * tr):
                continue
            b = bnum // (N * tr)
            if abs(a) > bound or abs(b) > bound or abs(a * d - b * c) != 1:
                continue
            cand = (a, b, c, d)
            if next(e for e in cand if e) < 0:
                cand = (-a, -b, -c, -d)
            key = (max(map(abs, cand)), cand)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    M = Mat2Z(*best[1])
    if mobius_apply(M, theta1) != theta2:
        raise InconsistentWitness(f"search produced {M}, which does not send theta1 to theta2")
    return M


def _denominator(x: Number) -> int:
    return x.r if isinstance(x, QuadIrr) else Fraction(x).denominator


def _scaled(x: Number) -> tuple[int, int]:
    if isinstance(x, QuadIrr):
        return x.p, x.q
    f = Fraction(x)
    return f.numerator, 0
