from pathlib import Path

import pytest

from pnsup import build_graph, classify, parse_net, parse_word

NETS = Path(__file__).resolve().parent.parent / "nets"


class Fixture:
    def __init__(self, name):
        self.path = NETS / f"{name}.net"
        self.text = self.path.read_text()
        self.net, self.spec = parse_net(self.text)
        self.graph = build_graph(self.net)
        self.cls = classify(self.net, self.graph, self.spec)

    def m(self, word):
        return parse_word(word, self.net.places)

    def ms(self, *words):
        return {self.m(w) for w in words}

    def ids(self, *words):
        return {self.graph.index[self.m(w)] for w in words}

    def words(self, ids):
        return {self.graph.word(s) for s in ids}

    def t(self, name):
        return self.net.transition_index(name)


@pytest.fixture(scope="session")
def mb_safe():
    return Fixture("mb-safe")


@pytest.fixture(scope="session")
def mb_2():
    return Fixture("mb-2")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
