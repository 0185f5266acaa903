from fractions import Fraction

import pytest

from qcharlier import QContext


@pytest.fixture(scope="session")
def ctx1():
    return QContext.from_t("9/10", ["1/2"])


@pytest.fixture(scope="session")
def ctx2():
    return QContext.from_t("9/10", ["1/2", "3/5"])


@pytest.fixture(scope="session")
def ctx3():
    return QContext.from_t("9/10", ["1/2", "3/5", "7/10"])


@pytest.fixture(scope="session")
def q2():
    return Fraction(81, 100)
