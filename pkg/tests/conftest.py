from importlib import resources

import pytest

from prnreduce.modelfile import load_model
from prnreduce.network import PRN, Transition

MODEL_PATH = str(resources.files("prnreduce").joinpath("data", "four_gene.prn"))


@pytest.fixture(scope="session")
def ref_model():
    return load_model(MODEL_PATH)


@pytest.fixture(scope="session")
def net(ref_model) -> PRN:
    return ref_model.prn


@pytest.fixture(scope="session")
def P(ref_model):
    return ref_model.parametrisations["P"]


@pytest.fixture(scope="session")
def P2(ref_model):
    return ref_model.parametrisations["P'"]


@pytest.fixture(scope="session")
def lat_pp(ref_model):
    return ref_model.lattice()


def tr(prn: PRN, name: str, start: int, end: int, omega) -> Transition:
    return Transition(prn.index[name], start, end, tuple(omega))


def pytest_terminal_summary(terminalreporter):
    acceptance = __import__("sys").modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
