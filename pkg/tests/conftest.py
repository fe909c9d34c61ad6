import math

import numpy as np
import pytest

from aokrwalk import RatchetSpec, make_lattice, ratchet_state


@pytest.fixture
def s2():
    return RatchetSpec([0, 1])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_state(lattice, rng, width=None):
    """Normalized random spinor supported on the central ``width`` sites."""
    from aokrwalk import SpinorWavefunction

    size = lattice.size
    amp = rng.normal(size=(2, size)) + 1j * rng.normal(size=(2, size))
    if width is not None:
        n = lattice.momenta
        amp[:, np.abs(n) > width] = 0
    amp /= math.sqrt(np.sum(np.abs(amp) ** 2))
    return SpinorWavefunction(lattice, amp[0], amp[1])


def resonant_start(j, k, classes=(0, 1)):
    spec = RatchetSpec(classes)
    lattice = make_lattice(j, k, spec)
    return spec, lattice, ratchet_state(spec, lattice)


ACCEPTANCE_LINES = {}


def record_criterion(number, passed, detail):
    ACCEPTANCE_LINES[number] = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    print(ACCEPTANCE_LINES[number])
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
