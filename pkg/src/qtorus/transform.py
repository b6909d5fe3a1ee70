"""Geometric transformations between two tori.

Representatives are identified with their exponents: the rep pair ``(a_u, a_v)``
of the source torus stands for ``u = exp(2 pi i a_u)``, ``v = exp(2 pi i a_v)``.
Multiplying exponents by the witness scaling gives target representatives
related to the source ones by ``C_theta``; the map ``L_theta`` then moves
``q1^(nl) u(q1^n u, v)`` to ``q2^(nl) u(q2^n u', v')``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .coset_model import CosetId, ExpPoint, Lattice, ctheta_related
from .errors import InvalidWitness, TorusMismatch, UnmappedRepresentative
from .morita import MoritaWitness
from .quad_field import Number, QuadIrr
from .report import Report
from .torus_core import (
    BasisU,
    BasisV,
    CanonicalBasisElem,
    Monomial,
    RepPair,
    Torus,
    TorusElement,
    apply_U,
    apply_V,
    apply_word,
    pairing,
)


@dataclass(frozen=True)
class RepBijection:
    pairs: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.pairs.values())) != len(self.pairs):
            raise ValueError("representative map is not injective")

    def __call__(self, rep: RepPair) -> RepPair:
        try:
            return self.pairs[rep]
        except KeyError:
            raise UnmappedRepresentative(f"no image for representative pair <{rep}>") from None

    def __contains__(self, rep) -> bool:
        return rep in self.pairs

    def __iter__(self):
        return iter(self.pairs)

    def then(self, other: RepBijection) -> RepBijection:
        return RepBijection({r: other(img) for r, img in self.pairs.items()})


@dataclass(frozen=True)
class GeoTransform:
    source: Torus
    target: Torus
    rep_bij: RepBijection

    def __post_init__(self):
        if self.source.qname == self.target.qname:
            raise ValueError("source and target tori need distinct q symbols")


def apply_L(t: GeoTransform, e, general: bool = False):
    """Image of a canonical basis element of the source torus.

    With ``general=True`` any source :class:`TorusElement` is accepted and
    transported term by term (coefficient symbols ``q1, u, v`` become
    ``q2, u', v'``); by default only elements of the canonical basis are.
    """
    if isinstance(e, CanonicalBasisElem):
        return CanonicalBasisElem(t.rep_bij(e.rep), e.n, e.l)
    if not general:
        raise TypeError("apply_L takes a CanonicalBasisElem; pass general=True for other elements")
    return transport(t, e)


def transport(t: GeoTransform, x: TorusElement) -> TorusElement:
    """Substitute ``q1 -> q2`` and ``(u, v) -> (u', v')`` in a source element."""
    if x.torus != t.source:
        raise TorusMismatch(f"element of {x.torus.qname}, transform starts at {t.source.qname}")
    out = {}
    for key, coeff in x.items():
        rep = t.rep_bij(key.rep)
        new_key = BasisU(rep, key.k) if isinstance(key, BasisU) else BasisV(rep, key.m)
        out[new_key] = coeff
    # rep_bij is injective, so labels stay distinct
    return TorusElement._raw(t.target, out)


def _rng(bound) -> range:
    if isinstance(bound, int):
        return range(-bound, bound + 1)
    lo, hi = bound
    return range(lo, hi + 1)


def check_diagram_U(t: GeoTransform, n_range=8) -> Report:
    report = Report("diagram U")
    for rep, n in itertools.product(t.rep_bij, _rng(n_range)):
        x = t.source.u(rep, n)
        report.check(
            f"diagram-U n={n} rep=<{rep}>", transport(t, apply_U(x)), apply_U(transport(t, x))
        )
    return report


def check_diagram_V(t: GeoTransform, n_range=8) -> Report:
    report = Report("diagram V")
    for rep, n in itertools.product(t.rep_bij, _rng(n_range)):
        x = t.source.u(rep, n)
        report.check(
            f"diagram-V n={n} rep=<{rep}>", transport(t, apply_V(x)), apply_V(transport(t, x))
        )
    return report


def check_pairing_preserved(t: GeoTransform, exponent_range=4, word_range: int = 2) -> Report:
    """Pairing exponents in the source equal those of the transported terms."""
    report = Report("pairing")
    rng = _rng(exponent_range)
    for rep in t.rep_bij:
        src, tgt = t.source, t.target
        base = (src.u(rep), src.v(rep))
        report.check(
            f"pairing axiom1 rep=<{rep}>",
            pairing(*base).exponent,
            pairing(*(transport(t, b) for b in base)).exponent,
        )
        for s, m, r, k in itertools.product(rng, repeat=4):
            vt = src.v(rep, m, Monomial.q(s))
            ut = src.u(rep, k, Monomial.q(r))
            tv, tu = transport(t, vt), transport(t, ut)
            case = f"s={s} m={m} r={r} k={k} rep=<{rep}>"
            report.check(f"pairing vu {case}", pairing(vt, ut).exponent, pairing(tv, tu).exponent)
            report.check(f"pairing uv {case}", pairing(ut, vt).exponent, pairing(tu, tv).exponent)
        for r, s in itertools.product(_rng(word_range), repeat=2):
            wu, wv = (apply_word(b, r, s) for b in base)
            lu, lv = (transport(t, b) for b in base)
            # L(U^r V^s x) = U^r V^s L(x), and the shifted pair still pairs to 1
            report.check(f"word commutes r={r} s={s} rep=<{rep}>", transport(t, wu), apply_word(lu, r, s))
            report.check(
                f"pairing axiom2 r={r} s={s} rep=<{rep}>",
                pairing(wu, wv, strict=False).exponent,
                pairing(apply_word(lu, r, s), apply_word(lv, r, s), strict=False).exponent,
            )
    return report


def build_transform(
    theta1: QuadIrr,
    theta2: QuadIrr,
    witness: MoritaWitness,
    universe: Iterable[tuple[Number, Number]],
    qnames: tuple[str, str] = ("q1", "q2"),
) -> GeoTransform:
    """Assemble ``L_theta`` on a finite universe of exponent-level representative pairs."""
    if witness.theta1 != theta1 or witness.theta2 != theta2:
        raise InvalidWitness("witness is for a different pair of parameters")
    problems = witness.problems()
    if problems:
        raise InvalidWitness("; ".join(problems))
    theta = witness.scaling_theta
    L1 = Lattice(theta1)
    pairs = {}
    seen_cosets = set()
    for au, av in universe:
        cosets = (CosetId(L1, au), CosetId(L1, av))
        if cosets in seen_cosets:
            raise ValueError(f"representatives ({au}, {av}) repeat a coset pair of the universe")
        seen_cosets.add(cosets)
        bu, bv = theta * au, theta * av
        for a, b in ((au, bu), (av, bv)):
            if not ctheta_related(ExpPoint(a), ExpPoint(b), theta):
                raise InvalidWitness(f"C_theta does not relate {a} and {b}")
        pairs[RepPair(au, av)] = RepPair(bu, bv)
    return GeoTransform(
        Torus(qnames[0], theta1), Torus(qnames[1], theta2), RepBijection(pairs)
    )


def default_universe(theta1: QuadIrr, size: int = 5) -> list[tuple[Number, Number]]:
    """Deterministic rep pairs in distinct coset pairs of ``Z*theta1 + Z``."""
    out = [(Fraction(0), Fraction(0))]
    i = 1
    while len(out) < size:
        out.append((Fraction(1, i + 2), Fraction(1, 2 * i + 3)))
        i += 1
    return out


def verify_transform(t: GeoTransform, n_range=8, exponent_range=4) -> Report:
    report = Report("transform")
    report.extend(check_diagram_U(t, n_range))
    report.extend(check_diagram_V(t, n_range))
    report.extend(check_pairing_preserved(t, exponent_range))
    return report


def basis_universe(reps: Sequence[RepPair], n_range=3, l_range=3) -> list[CanonicalBasisElem]:
    return [
        CanonicalBasisElem(rep, n, l)
        for rep in reps
        for n in _rng(n_range)
        for l in _rng(l_range)
    ]
