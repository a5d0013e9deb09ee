from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from qctree.core import PointCode, Weight

F = Fraction


@pytest.fixture
def uniform3() -> Weight:
    return Weight.uniform(3)


@pytest.fixture
def skewed4() -> Weight:
    return Weight.of("1/2", "1/2", "1/4", "1/8")


def codes(m: int, max_prefix: int = 3, max_period: int = 3):
    letter = st.integers(1, m)
    return st.builds(
        PointCode,
        st.lists(letter, max_size=max_prefix).map(tuple),
        st.lists(letter, min_size=1, max_size=max_period).map(tuple),
    )


def weights(m: int):
    """Random nonincreasing rational weights with a(1) = a(2) = 1/2."""
    steps = st.lists(st.sampled_from([F(1), F(1), F(1, 2), F(3, 4)]), min_size=m - 2, max_size=m - 2)

    def build(ratios):
        vals = [F(1, 2), F(1, 2)]
        for r in ratios:
            vals.append(vals[-1] * r)
        return Weight(tuple(vals))

    return steps.map(build)
