import os

import pytest

from fsmlock import BitString, Fsm, counter_fsm, parse_kiss2

BENCH_DIR = os.path.join(os.path.dirname(__file__), "..", "benchmarks")

BENCH_NAMES = ["dk14", "dk16", "dk27", "bbara", "styr", "planet"]


def load_benchmark(name: str) -> Fsm:
    with open(os.path.join(BENCH_DIR, f"{name}.kiss2"), "r", encoding="ascii") as handle:
        return parse_kiss2(handle.read())


@pytest.fixture(scope="session")
def dk16() -> Fsm:
    return load_benchmark("dk16")


@pytest.fixture(scope="session")
def benchmarks() -> dict[str, Fsm]:
    return {name: load_benchmark(name) for name in BENCH_NAMES}


@pytest.fixture(scope="session")
def seven_state_ip() -> Fsm:
    return counter_fsm(7)


@pytest.fixture(scope="session")
def example_response() -> BitString:
    return BitString.from_text("001011")


@pytest.fixture(scope="session")
def example_license() -> BitString:
    return BitString.from_text("111011")
