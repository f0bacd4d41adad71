"""Shared cover fixtures (session-scoped: construction is the slow part)."""

import pytest

from ramislope.extensions import (
    compositum,
    make_artin_schreier,
    make_kummer,
    make_trivial,
)


@pytest.fixture(scope="session")
def as_p3_m2():
    return make_artin_schreier(3, 3, 2, 1)


@pytest.fixture(scope="session")
def kummer4():
    return make_kummer(3, 9, 4)


@pytest.fixture(scope="session")
def trivial_p3():
    return make_trivial(3, 3)


@pytest.fixture(scope="session")
def wild_pair_p2():
    """(Z/2)^2 cover with upper jumps {1, 3}."""
    return compositum(
        make_artin_schreier(2, 2, 1, 1), make_artin_schreier(2, 2, 3, 1)
    )


@pytest.fixture(scope="session")
def tame_wild_p3():
    """Z/2 x Z/3 cover: tame degree 2 under a wild break-1 layer."""
    return compositum(make_kummer(3, 9, 2), make_artin_schreier(3, 9, 1, 1))
