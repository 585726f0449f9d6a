import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from noisybool.boolfn import BooleanFunction
from noisybool.explorer import Chunk, chunk_indicators, spectra_rows

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@st.composite
def functions(draw, min_n=1, max_n=5, proper=False):
    """Random Boolean functions; ``proper`` keeps ``1 <= M <= 2^n - 1``."""
    n = draw(st.integers(min_n, max_n))
    S = 1 << n
    zeros = draw(st.sets(st.integers(0, S - 1), min_size=1 if proper else 0, max_size=S - 1 if proper else S))
    return BooleanFunction(n, zeros)


def realizable_spectra(n: int) -> dict[int, set[tuple[int, ...]]]:
    """Every ratio spectrum that some zero-set of size ``M`` attains, for each proper ``M``."""
    Z = chunk_indicators(Chunk(n, None, 0, 1 << (1 << n)))
    sizes = Z.sum(axis=1)
    return {
        M: {tuple(r) for r in spectra_rows(Z[sizes == M], n, M).tolist()} for M in range(1, 1 << n)
    }
