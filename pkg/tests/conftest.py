import pytest
from hypothesis import strategies as st

from qtorus.quad_field import Mat2Z, quad_normalize

DISCRIMINANTS = (2, 3, 5, 7, 13)

# filled by test_acceptance, printed once at the end of the session
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")


nonzero = st.integers(-30, 30).filter(bool)


@st.composite
def quads(draw, D=None):
    d = draw(st.sampled_from(DISCRIMINANTS)) if D is None else D
    return quad_normalize(draw(st.integers(-40, 40)), draw(nonzero), draw(nonzero), d)


GENERATORS = (Mat2Z(1, 1, 0, 1), Mat2Z(1, -1, 0, 1), Mat2Z(0, -1, 1, 0), Mat2Z(0, 1, 1, 0))


@st.composite
def gl2z(draw, max_len=8):
    """Words in generators of GL2(Z) (T, T^-1, S and the swap)."""
    M = Mat2Z.identity()
    for g in draw(st.lists(st.sampled_from(GENERATORS), max_size=max_len)):
        M = M @ g
    return M


@pytest.fixture
def sqrt2():
    return quad_normalize(0, 1, 1, 2)
