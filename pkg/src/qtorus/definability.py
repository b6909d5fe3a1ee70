"""Rewriting ``y = x^Theta``, ``Theta = (m11*theta + m12)/(m21*theta + m22)``, as one ``C_theta`` atom.

For ``M`` in GL2(Z) the relation is equivalent to
``C_theta(y^m21 * x^-m11, x^m12 * y^-m22)``.  Points are unit-circle
exponents, so raising a point to an integer power multiplies its exponent
and the product of points adds exponents.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .coset_model import ExpPoint, ctheta_related
from .errors import ParseError
from .quad_field import Mat2Z, Number, QuadIrr, from_coords, mobius_apply
from .report import Report


@dataclass(frozen=True)
class AtomicFormula:
    """``C_theta(y^lhs_y_exp * x^lhs_x_exp, x^rhs_x_exp * y^rhs_y_exp)``."""

    lhs_x_exp: int
    lhs_y_exp: int
    rhs_x_exp: int
    rhs_y_exp: int

    def arguments(self, x: ExpPoint, y: ExpPoint) -> tuple[ExpPoint, ExpPoint]:
        first = self.lhs_y_exp * y.alpha + self.lhs_x_exp * x.alpha
        second = self.rhs_x_exp * x.alpha + self.rhs_y_exp * y.alpha
        return ExpPoint(first), ExpPoint(second)

    def inverted(self) -> AtomicFormula:
        """Both arguments inverted; the same relation."""
        return AtomicFormula(-self.lhs_x_exp, -self.lhs_y_exp, -self.rhs_x_exp, -self.rhs_y_exp)

    def normalized(self) -> AtomicFormula:
        """Representative with ``lhs_x_exp <= 0`` (ties broken by ``lhs_y_exp >= 0``)."""
        if self.lhs_x_exp > 0 or (self.lhs_x_exp == 0 and self.lhs_y_exp < 0):
            return self.inverted()
        return self

    def __str__(self):
        first = _product((("y", self.lhs_y_exp), ("x", self.lhs_x_exp)))
        second = _product((("x", self.rhs_x_exp), ("y", self.rhs_y_exp)))
        return f"C_theta({first}, {second})"


def _product(factors) -> str:
    parts = []
    for name, e in factors:
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return " * ".join(parts) if parts else "1"


_FORMULA = re.compile(r"^\s*C_theta\s*\((.*),(.*)\)\s*$")
_POWER = re.compile(r"^([xy])(?:\s*\^\s*(-?\d+))?$")


def _parse_product(text: str) -> dict[str, int]:
    exps = {"x": 0, "y": 0}
    text = text.strip()
    if text == "1":
        return exps
    for factor in text.split("*"):
        m = _POWER.match(factor.strip())
        if m is None:
            raise ParseError(f"bad factor {factor.strip()!r}")
        exps[m.group(1)] += int(m.group(2) or 1)
    return exps


def parse_formula(text: str) -> AtomicFormula:
    m = _FORMULA.match(text)
    if m is None:
        raise ParseError(f"not a C_theta atom: {text!r}")
    first, second = _parse_product(m.group(1)), _parse_product(m.group(2))
    return AtomicFormula(first["x"], first["y"], second["x"], second["y"])


def rewrite(M: Mat2Z) -> AtomicFormula:
    """``C_theta(y^m21 * x^-m11, x^m12 * y^-m22)`` for ``M = [[m11, m12], [m21, m22]]``."""
    return AtomicFormula(-M.a, M.c, M.b, -M.d)


def eval_atomic(f: AtomicFormula, x: ExpPoint, y: ExpPoint, theta: QuadIrr) -> bool:
    return ctheta_related(*f.arguments(x, y), theta)


# ---------------------------------------------------------------------------
# Sample family
# ---------------------------------------------------------------------------


def sample_points(D: int, count: int = 20) -> list[ExpPoint]:
    """Deterministic exponents ``p/7 + q*sqrt(D)/11`` on a small grid."""
    grid = itertools.product(range(-2, 3), range(-2, 3))
    pts = [ExpPoint(from_coords(Fraction(p, 7), Fraction(q, 11), D)) for p, q in grid]
    return pts[:count]


def random_points(D: int, count: int, seed: int = 0) -> list[ExpPoint]:
    """Seeded random exponents for exploratory fuzzing (never used by acceptance)."""
    rng = random.Random(seed)
    return [
        ExpPoint(
            from_coords(
                Fraction(rng.randint(-50, 50), rng.randint(1, 30)),
                Fraction(rng.randint(-50, 50), rng.randint(1, 30)),
                D,
            )
        )
        for _ in range(count)
    ]


def solve_for_y(f: AtomicFormula, x: ExpPoint, theta: QuadIrr, k: int = 0, n: int = 0) -> ExpPoint | None:
    """A ``y`` making ``f`` true with witnesses ``(k, n)``; ``None`` if ``f`` ignores ``y``."""
    # rhs_y*y + rhs_x*x = theta*(lhs_y*y + lhs_x*x + k) + n
    coeff = f.rhs_y_exp - theta * f.lhs_y_exp
    if coeff == 0:
        return None
    rhs = theta * (f.lhs_x_exp * x.alpha + k) + n - f.rhs_x_exp * x.alpha
    return ExpPoint(rhs / coeff)


def _perturbations(y: ExpPoint, D: int) -> Iterator[ExpPoint]:
    yield y
    yield ExpPoint(y.alpha + Fraction(1, 3))
    yield ExpPoint(y.alpha + from_coords(Fraction(0), Fraction(1, 5), D))


def _witness_grid() -> list[tuple[int, int]]:
    return [(0, 0), (1, -2), (-3, 1)]


def target_ys(x: ExpPoint, Theta: QuadIrr) -> Iterator[ExpPoint]:
    """Points on ``y = x^Theta`` and a few perturbed points off it."""
    for k, n in _witness_grid():
        yield from _perturbations(ExpPoint(Theta * (x.alpha + k) + n), Theta.D)


def formula_ys(f: AtomicFormula, x: ExpPoint, theta: QuadIrr) -> Iterator[ExpPoint]:
    for k, n in _witness_grid():
        y = solve_for_y(f, x, theta, k, n)
        if y is not None:
            yield from _perturbations(y, theta.D)


def semantic_equiv(f1: AtomicFormula, f2: AtomicFormula, theta: QuadIrr, samples: int = 20) -> Report:
    """Compare two atoms on the sample family; ``report.ok`` means no disagreement."""
    report = Report(f"{f1} vs {f2}")
    for x in sample_points(theta.D, samples):
        ys = list(formula_ys(f1, x, theta)) + list(formula_ys(f2, x, theta))
        ys.append(x)
        for y in ys:
            report.check(
                f"equiv x={x.alpha} y={y.alpha}",
                eval_atomic(f1, x, y, theta),
                eval_atomic(f2, x, y, theta),
            )
    return report


def relation_report(
    f: AtomicFormula,
    Theta: QuadIrr,
    theta: QuadIrr,
    label: str,
    points: list[ExpPoint],
) -> Report:
    """``f`` under ``C_theta`` against the target relation ``y = x^Theta``."""
    report = Report(label)
    for x in points:
        ys = list(target_ys(x, Theta)) + list(formula_ys(f, x, theta))
        for y in ys:
            report.check(
                f"{label} x={x.alpha} y={y.alpha}",
                eval_atomic(f, x, y, theta),
                ctheta_related(x, y, Theta),
            )
    return report


def check_rewrite(M: Mat2Z, theta: QuadIrr, samples: int = 20, points: list[ExpPoint] | None = None) -> Report:
    """Soundness of ``rewrite(M)`` against ``ctheta_related`` with parameter ``M.theta``."""
    Theta = mobius_apply(M, theta)
    pts = points if points is not None else sample_points(theta.D, samples)
    return relation_report(rewrite(M), Theta, theta, f"rewrite {M}", pts)


def unimodular_matrices(entries=(-1, 0, 1)) -> list[Mat2Z]:
    out = []
    for a, b, c, d in itertools.product(entries, repeat=4):
        if abs(a * d - b * c) == 1:
            out.append(Mat2Z(a, b, c, d))
    return out


@dataclass(frozen=True)
class Bullet:
    name: str
    formula: AtomicFormula
    exponent: Callable[[QuadIrr], Number]


def bullets(m: int, n: int) -> list[Bullet]:
    """The four elementary rewrites for integers ``m``, ``n``."""
    return [
        Bullet(f"y=x^({m}theta)", AtomicFormula(m, 0, 0, 1), lambda t: m * t),
        Bullet(f"y=x^({m}theta+{n})", AtomicFormula(m, 0, -n, 1), lambda t: m * t + n),
        Bullet("y=x^(1/theta)", AtomicFormula(0, 1, 1, 0), lambda t: 1 / t),
        Bullet(f"y=x^(1/({m}theta+{n}))", AtomicFormula(0, m, 1, -n), lambda t: 1 / (m * t + n)),
    ]


def verify_bullets(theta: QuadIrr, ms=(-1, 1), ns=range(-2, 3), samples: int = 10) -> Report:
    report = Report("bullets")
    pts = sample_points(theta.D, samples)
    for m, n in itertools.product(ms, ns):
        for b in bullets(m, n):
            report.extend(relation_report(b.formula, b.exponent(theta), theta, b.name, pts))
    return report


def fuzz_rewrite(theta: QuadIrr, trials: int = 100, seed: int = 0, height: int = 5) -> Report:
    """Randomized soundness sweep over matrices of bounded height."""
    rng = random.Random(seed)
    report = Report("fuzz")
    mats = [M for M in _matrices_up_to(height)]
    for _ in range(trials):
        M = rng.choice(mats)
        report.extend(check_rewrite(M, theta, points=random_points(theta.D, 3, rng.randrange(1 << 30))))
    return report


def _matrices_up_to(height: int) -> list[Mat2Z]:
    return unimodular_matrices(range(-height, height + 1))
