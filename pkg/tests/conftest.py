import numpy as np
import pytest

from mapperci.geometry import PointCloud, pairwise_distances


@pytest.fixture
def line3():
    pc = PointCloud(np.array([[0.0], [1.0], [3.0]]))
    return pc, pairwise_distances(pc)


def random_cloud(rng, n=30, dim=2):
    return PointCloud(rng.normal(size=(n, dim)))


def pytest_terminal_summary(terminalreporter):
    from _acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(LINES):
            terminalreporter.write_line(LINES[key])
