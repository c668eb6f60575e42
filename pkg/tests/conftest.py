import pytest

from vlmc import CombSpec, ProbabilisticContextTree


def make_T0():
    return ProbabilisticContextTree("01", {"0": [0.8, 0.2], "1": [0.3, 0.7]})


def make_T1():
    return ProbabilisticContextTree(
        "01", {"1": [0.7, 0.3], "10": [0.4, 0.6], "100": [0.6, 0.4], "000": [0.8, 0.2]}
    )


def make_U1():
    return CombSpec(q0=0.6, qinf=0.3, gamma=0.5)


@pytest.fixture
def T0():
    return make_T0()


@pytest.fixture
def T1():
    return make_T1()


@pytest.fixture
def U1():
    return make_U1()


@pytest.fixture
def iid():
    return ProbabilisticContextTree("01", {"": [0.35, 0.65]})
