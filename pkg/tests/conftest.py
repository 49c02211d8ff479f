from pathlib import Path

import numpy as np
import pytest

from oracle_summ.rouge import ReferenceBank

FIXTURES = Path(__file__).parent / "fixtures"

# One reference "a b a c"; s1=[a,b], s2=[c,a], s3=[b,b], all two words long.
TOY_SENTENCES = [["a", "b"], ["c", "a"], ["b", "b"]]
TOY_REFERENCES = [[["a", "b", "a", "c"]]]


@pytest.fixture
def toy_bank():
    return ReferenceBank.from_tokens(TOY_SENTENCES, TOY_REFERENCES, n=1)


@pytest.fixture
def dup_bank():
    return ReferenceBank.from_tokens(TOY_SENTENCES + [["c", "a"]], TOY_REFERENCES, n=1)


@pytest.fixture
def rng():
    return np.random.default_rng(20161017)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(lines, key=lambda k: int(k[1:])):
        terminalreporter.write_line(lines[key])
