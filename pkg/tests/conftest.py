import numpy as np
import pytest
from hypothesis import strategies as st

from gkdv.hyperalgebra import HyperTerm, canonicalize

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


terms_st = st.lists(
    st.builds(
        HyperTerm,
        st.floats(-5, 5, allow_nan=False).filter(lambda c: abs(c) > 1e-3),
        st.integers(0, 6),
        st.integers(0, 1),
        st.integers(0, 3),
    ),
    min_size=1,
    max_size=5,
)
k_st = st.floats(0.5, 2.0)


@st.composite
def poly_pair(draw):
    k = draw(k_st)
    return canonicalize(draw(terms_st), k), canonicalize(draw(terms_st), k)


def abs_eval(p, x, tau):
    """Sum of term magnitudes; the natural scale for round-off bounds."""
    s = 1.0 / np.cosh(p.k * x)
    t = np.tanh(p.k * x)
    return sum(abs(c) * s**a * abs(t) ** b * abs(tau) ** m for c, a, b, m in p.terms)


def coeff_map(p):
    return {t.key: t.coeff for t in p.terms}


def assert_same_poly(p, q, tol=1e-12):
    a, b = coeff_map(p), coeff_map(q)
    scale = max([1.0] + [abs(c) for c in a.values()] + [abs(c) for c in b.values()])
    for key in set(a) | set(b):
        assert abs(a.get(key, 0.0) - b.get(key, 0.0)) <= tol * scale, (key, a.get(key), b.get(key))


@pytest.fixture(scope="session")
def default_dataset():
    from gkdv.analysis import build_dataset
    return build_dataset()


@pytest.fixture(scope="session")
def default_training(default_dataset):
    from gkdv.surrogate import TrainConfig, train
    return train(TrainConfig(), default_dataset)
