import random

import pytest

from forestskein import corpus
from forestskein.presentation import parse


@pytest.fixture(scope="session")
def cleary():
    return corpus.load("cleary")


@pytest.fixture(scope="session")
def ternary():
    return corpus.load("ternary")


@pytest.fixture(scope="session")
def free1():
    return corpus.load("free1")


@pytest.fixture(scope="session")
def free2():
    return corpus.load("free2")


@pytest.fixture(scope="session")
def notlc():
    return corpus.load("notlc")


@pytest.fixture(scope="session")
def rebel():
    return corpus.load("rebel")


@pytest.fixture()
def rng():
    return random.Random(20240817)
