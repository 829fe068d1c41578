import pytest

from asnoc.bundle import load_project


@pytest.fixture(scope="session")
def mp3():
    return load_project("fixture:mp3encdec")


@pytest.fixture(scope="session")
def mp3_table():
    """The published 4-switch MP3 design: topology, routing and project."""
    from asnoc.bundle import read_fixture
    from asnoc.model import RoutingSet, Topology

    raw = read_fixture("mp3_table")
    proj = load_project("fixture:mp3_table")
    topo = Topology.from_dict(raw["design"]["topology"])
    routing = RoutingSet.from_dict(raw["design"]["routing"])
    return proj, topo, routing


def pytest_terminal_summary(terminalreporter):
    from .acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
