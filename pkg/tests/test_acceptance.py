"""One test per acceptance criterion; each prints its pass/fail line.

The lines are repeated in a summary section at the end of the pytest run.
"""

import pytest

from conftest import ACCEPTANCE_LINES
from lmspectra.verify import CRITERIA


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result = CRITERIA[number]()
    print(result.line)
    ACCEPTANCE_LINES.append(result.line)
    assert result.passed, result.report()
