import pytest

from euclidean_ideals import certificate as Ct
from euclidean_ideals import cyclotomic as C
from euclidean_ideals import polynomial as P
from euclidean_ideals.orders import maximal_order


def field(poly: str, level: int):
    return C.identify_field(P.parse(poly), C.enumerate_prime_degree_subfields(level, 3))


@pytest.fixture(scope="session")
def k7():
    return field("x^3 - x^2 - 2x + 1", 7)


@pytest.fixture(scope="session")
def k13():
    return field("x^3 - x^2 - 4x - 1", 13)


@pytest.fixture(scope="session")
def k91():
    return field("x^3 - x^2 - 30x - 27", 91)


@pytest.fixture(scope="session")
def k91b():
    return field("x^3 - x^2 - 30x + 64", 91)


@pytest.fixture(scope="session")
def k217():
    return field("x^3 - x^2 - 72x - 209", 217)


@pytest.fixture(scope="session")
def k247():
    return field("x^3 - x^2 - 82x + 64", 247)


@pytest.fixture(scope="session")
def o7():
    return maximal_order(P.parse("x^3 - x^2 - 2x + 1"))


@pytest.fixture(scope="session")
def o91():
    return maximal_order(P.parse("x^3 - x^2 - 30x - 27"))


@pytest.fixture(scope="session")
def data7(k7):
    return Ct.field_data(k7, P.parse("x^3 - x^2 - 2x + 1"))


@pytest.fixture(scope="session")
def data13(k13):
    return Ct.field_data(k13, P.parse("x^3 - x^2 - 4x - 1"))


@pytest.fixture(scope="session")
def data91(k91):
    return Ct.field_data(k91, P.parse("x^3 - x^2 - 30x - 27"))


@pytest.fixture(scope="session")
def data217(k217):
    return Ct.field_data(k217, P.parse("x^3 - x^2 - 72x - 209"))


@pytest.fixture(scope="session")
def data247(k247):
    return Ct.field_data(k247, P.parse("x^3 - x^2 - 82x + 64"))
