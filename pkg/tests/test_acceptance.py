"""Acceptance criteria, each at its stated tolerance and runtime bound.

Every criterion records a PASS/FAIL line that is printed in the terminal
summary (see ``conftest.pytest_terminal_summary``).
"""

import itertools
import time
from fractions import Fraction

import pytest

from qtorus.coset_model import cosets_correspond
from qtorus.definability import (
    check_rewrite,
    relation_report,
    bullets,
    sample_points,
    unimodular_matrices,
    verify_bullets,
)
from qtorus.morita import (
    MoritaWitness,
    NotEquivalent,
    brute_force_search,
    decide_morita,
    solve_eq8,
    theta2_from_proof_matrix,
)
from qtorus.quad_field import cf_expand, convergent_matrices, mobius_apply, parse_quad
from qtorus.report import Report
from qtorus.torus_core import (
    BasisU,
    BasisV,
    DEFAULT_TORUS as T,
    Monomial,
    apply_U,
    apply_Uinv,
    apply_V,
    apply_Vinv,
    default_reps,
    pairing,
    pairing_by_axioms,
    q_shift,
)
from qtorus.transform import build_transform, default_universe, verify_transform

from conftest import ACCEPTANCE_RESULTS
from corpus import build_corpus, quad_sample

POSITIVE, NEGATIVE = build_corpus()


def record(name: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS.append((name, ok, detail))
    assert ok, detail


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_corpus_shape():
    assert len(POSITIVE) == 25 and len(NEGATIVE) == 25
    assert {p[0].D for p in POSITIVE} == {2, 3, 5, 7, 13}
    assert all(max(map(abs, M.entries())) <= 10 for _, _, M in POSITIVE)


def test_c1_operator_algebra():
    report = Report("operator algebra")
    with Timer() as t:
        for rep, g in itertools.product(default_reps(5), range(-8, 9)):
            for x in (T.u(rep, g), T.v(rep, g), T.u(rep, g, Monomial.q(g)), T.v(rep, g, Monomial.q(-g))):
                report.check(f"VU=qUV {x}", apply_V(apply_U(x)), q_shift(apply_U(apply_V(x))))
                report.check(f"UU^-1 {x}", apply_U(apply_Uinv(x)), x)
                report.check(f"U^-1U {x}", apply_Uinv(apply_U(x)), x)
                report.check(f"VV^-1 {x}", apply_V(apply_Vinv(x)), x)
                report.check(f"V^-1V {x}", apply_Vinv(apply_V(x)), x)
    record(
        "1 operator algebra",
        report.ok and t.elapsed < 1.0,
        f"{report.checked} checks, {report.failed} failed, {t.elapsed:.2f}s (< 1s)",
    )


def test_c2_pairing_oracle():
    rep = default_reps(1)[0]
    rng = range(-5, 6)
    mismatches = cases = 0
    with Timer() as t:
        for s, m, r, k in itertools.product(rng, repeat=4):
            v, u = T.v(rep, m, Monomial.q(s)), T.u(rep, k, Monomial.q(r))
            cases += 1
            if pairing(v, u).exponent != pairing_by_axioms(v, u).exponent or pairing(v, u).exponent != r - s - k * m:
                mismatches += 1
            if pairing(u, v).exponent != pairing_by_axioms(u, v).exponent or pairing(u, v).exponent != k * m + s - r:
                mismatches += 1
    record(
        "2 pairing vs axiom oracle",
        cases == 14641 and mismatches == 0 and t.elapsed < 5.0,
        f"{cases} cases x 2 orders, {mismatches} mismatches, {t.elapsed:.2f}s (< 5s)",
    )


def test_c3_morita_vs_brute_force():
    problems = []
    with Timer() as t:
        for theta1, theta2, M in POSITIVE:
            w = decide_morita(theta1, theta2)
            if not isinstance(w, MoritaWitness) or w.problems():
                problems.append(f"missed positive {theta1} -> {theta2}")
                continue
            oracle = brute_force_search(theta1, theta2, 50)
            if oracle is None or mobius_apply(oracle, theta1) != theta2:
                problems.append(f"oracle contradicts positive {theta1} -> {theta2}")
        for theta1, theta2 in NEGATIVE:
            if not isinstance(decide_morita(theta1, theta2), NotEquivalent):
                problems.append(f"false positive {theta1}, {theta2}")
            if brute_force_search(theta1, theta2, 50) is not None:
                problems.append(f"oracle finds witness for negative {theta1}, {theta2}")
    record(
        "3 morita vs brute force",
        not problems and t.elapsed < 30.0,
        f"25 positive + 25 negative, {len(problems)} problems, {t.elapsed:.2f}s (< 30s)"
        + (f"; first: {problems[0]}" if problems else ""),
    )


def test_c4_theorem_round_trip():
    bad = []
    for theta1, theta2, _ in POSITIVE:
        P = decide_morita(theta1, theta2).proof_matrix()
        theta = solve_eq8(P, theta1, theta2)
        if not cosets_correspond(theta1, theta2, theta):
            bad.append(f"cosets {theta1} -> {theta2}")
        if theta2_from_proof_matrix(P, theta1) != theta2:
            bad.append(f"rearrangement {theta1} -> {theta2}")
    record("4 theorem round trip", not bad, f"25 positive pairs, {len(bad)} exact mismatches")


@pytest.mark.parametrize("index", range(25))
def test_c5_geometric_transformation(index):
    theta1, theta2, _ = POSITIVE[index]
    with Timer() as t:
        w = decide_morita(theta1, theta2)
        tr = build_transform(theta1, theta2, w, default_universe(theta1))
        report = verify_transform(tr, n_range=8, exponent_range=4)
    record(
        f"5 transform pair {index:02d}",
        report.ok and t.elapsed < 10.0,
        f"{theta1} -> {theta2}: {report.checked} checks, {report.failed} failed, {t.elapsed:.2f}s (< 10s)",
    )


SQRT2 = parse_quad("sqrt(2)")


def test_c6_definability():
    with Timer() as t:
        mats = unimodular_matrices()
        report = Report("definability")
        for M in mats:
            report.extend(check_rewrite(M, SQRT2))
        report.extend(verify_bullets(SQRT2))
    record(
        "6 definability",
        report.ok and t.elapsed < 5.0 and len(mats) == 40,
        f"{len(mats)} unimodular matrices over {{-1,0,1}} (the stated 48 overcounts; enumeration gives 40), "
        f"bullets at m=+-1, n in [-2,2]; {report.checked} checks, {report.failed} failed, {t.elapsed:.2f}s (< 5s)",
    )


@pytest.mark.xfail(strict=True, reason="for |m| > 1 the m*theta bullets are inclusions, not equivalences")
def test_c6_bullets_general_m():
    pts = sample_points(2, 10)
    report = Report("bullets |m| > 1")
    for m, n in itertools.product((-2, 2, 3), (0, 1)):
        for b in bullets(m, n):
            report.extend(relation_report(b.formula, b.exponent(SQRT2), SQRT2, b.name, pts))
    ACCEPTANCE_RESULTS.append(
        (
            "6 bullets for |m| > 1 (expected)",
            report.ok,
            f"{report.failed} of {report.checked} checks disagree; the formula side also admits branch "
            "shifts not divisible by m, so only 'relation implies formula' holds",
        )
    )
    assert report.ok


def test_c7_cf_engine():
    values = quad_sample(200)
    bad = []
    with Timer() as t:
        for x in values:
            cf = cf_expand(x)
            if cf.value(x.D) != x:
                bad.append(f"round trip {x}")
            count = len(cf.preperiod) + len(cf.period) + 1
            for k, M in enumerate(convergent_matrices(cf, count)):
                if M.det != (-1) ** k:
                    bad.append(f"det sign {x} k={k}")
    record(
        "7 cf engine",
        len(values) == 200 and len(set(values)) == 200 and not bad and t.elapsed < 2.0,
        f"{len(values)} values, {len(bad)} failures, {t.elapsed:.2f}s (< 2s)",
    )
