from __future__ import annotations

import pytest

from cosets import enumerate_double_cosets, sigma_on_cosets
from ff import ff_make
from matgrp import conjugacy_classes, enumerate_gl
from sympair import pair_from_id


@pytest.fixture(scope="session")
def gf3():
    return ff_make(3, 1)


@pytest.fixture(scope="session")
def gf9():
    return ff_make(3, 2)


@pytest.fixture(scope="session")
def gl2_3(gf3):
    return enumerate_gl(2, gf3)


@pytest.fixture(scope="session")
def classes_gl2_3(gl2_3):
    return conjugacy_classes(gl2_3)


@pytest.fixture(scope="session")
def torus3():
    return pair_from_id("gl-torus(1,1)", 3)


@pytest.fixture(scope="session")
def torus5():
    return pair_from_id("gl-torus(1,1)", 5)


@pytest.fixture(scope="session")
def orthogonal3():
    return pair_from_id("gl-orthogonal", 3)


@pytest.fixture(scope="session")
def symplectic3():
    return pair_from_id("gl-symplectic", 3)


@pytest.fixture(scope="session")
def torus3_cosets(torus3):
    part = enumerate_double_cosets(torus3)
    return part, sigma_on_cosets(torus3, part)


@pytest.fixture(scope="session")
def gl2_9(gf9):
    return enumerate_gl(2, gf9)
