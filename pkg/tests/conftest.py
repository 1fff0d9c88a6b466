import pytest

from ringlab.algebras import (
    matrix_algebra,
    triangular_algebra,
    truncated_poly,
    zero_mult_algebra,
)


@pytest.fixture(scope="session")
def m2f2():
    return matrix_algebra(2, 2)


@pytest.fixture(scope="session")
def m2f3():
    return matrix_algebra(2, 3)


@pytest.fixture(scope="session")
def m2f5():
    return matrix_algebra(2, 5)


@pytest.fixture(scope="session")
def m3f2():
    return matrix_algebra(3, 2)


@pytest.fixture(scope="session")
def t2f2():
    return triangular_algebra(2, 2)


@pytest.fixture(scope="session")
def t2f3():
    return triangular_algebra(2, 3)


@pytest.fixture(scope="session")
def f3t2():
    return truncated_poly(2, 3)


@pytest.fixture(scope="session")
def f3t3():
    return truncated_poly(3, 3)


@pytest.fixture(scope="session")
def z2f3():
    return zero_mult_algebra(2, 3)
