"""Shared fixtures: the filtered generation sets are expensive (the degree-7
filter takes a few minutes), so they are computed once per session."""

import pytest

from lyident import liftgen


@pytest.fixture(scope="session")
def gen6_filtered():
    return liftgen.filter_redundant(liftgen.generate(6))


@pytest.fixture(scope="session")
def gen7_filtered():
    return liftgen.filter_redundant(liftgen.generate(7))


@pytest.fixture(scope="session")
def gen8(gen6_filtered, gen7_filtered):
    return liftgen.generate(8, {6: gen6_filtered, 7: gen7_filtered})
