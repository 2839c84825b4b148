import pytest

from rulegrid.games import builtin_corpus, tictactoe_definition


@pytest.fixture(scope="session")
def corpus():
    return builtin_corpus()


@pytest.fixture()
def ttt3():
    return tictactoe_definition(3, 3, 3, 2, name="ttt-3x3")
