from __future__ import annotations

import pytest

from pingpong.exact import Matrix
from pingpong.groups import Element, GroupSpec


@pytest.fixture
def sl2():
    return GroupSpec.SL(2)


@pytest.fixture
def golden_gammas(sl2):
    """The 2x2 reference pair: identity and [[1,1],[1,2]]."""
    return [Element(sl2, Matrix.identity(2)), Element(sl2, Matrix([[1, 1], [1, 2]]))]
