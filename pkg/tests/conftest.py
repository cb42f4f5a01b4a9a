import pytest

from spinbus import (
    ArchitectureSpec,
    ErrorModelParams,
    STRATEGIES,
    build_interaction_graph,
    decompose,
    map_strategy,
    slice_circuit,
    spectral_placement,
)
from spinbus.benchgen import FAMILIES, BenchmarkSpec, generate


@pytest.fixture(scope="session")
def errp() -> ErrorModelParams:
    return ErrorModelParams()


@pytest.fixture(scope="session")
def bench16(errp):
    """Schedules for the 16-qubit suite at spectral placement.

    family -> (arch, sliced, {strategy: schedule}); shared by the mapper
    regressions and several acceptance criteria.
    """
    out = {}
    for family in FAMILIES:
        circuit = generate(BenchmarkSpec(family=family, n=16, seed=0))
        sliced = slice_circuit(decompose(circuit))
        arch = ArchitectureSpec(n_sites=16)
        placement = spectral_placement(build_interaction_graph(sliced))
        schedules = {
            strategy: map_strategy(strategy, sliced, arch, placement, errp)
            for strategy in STRATEGIES
        }
        out[family] = (arch, sliced, schedules)
    return out
