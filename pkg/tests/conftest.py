import numpy as np
import pytest

from ppsim.hilbert import StateVector, normalize, observable_from_spectrum


def random_state(rng, dim):
    return normalize(rng.normal(size=dim) + 1j * rng.normal(size=dim))


def random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (z + z.conj().T) / 2


def random_basis(rng, dim):
    u = random_unitary(rng, dim)
    return [StateVector(u[:, k]) for k in range(dim)]


def random_observable(rng, dim, name="R"):
    """Random projector-valued observable: a random basis split into 1..dim groups."""
    u = random_unitary(rng, dim)
    n_groups = rng.integers(1, dim + 1)
    labels = rng.permutation(np.concatenate([np.arange(n_groups), rng.integers(0, n_groups, dim - n_groups)]))
    eigen = rng.choice(np.arange(-5, 6), size=n_groups, replace=False).astype(float)
    spectrum = []
    for g in range(n_groups):
        cols = u[:, labels == g]
        spectrum.append((eigen[g], cols @ cols.conj().T))
    return observable_from_spectrum(name, spectrum)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record a one-line PASS/FAIL verdict for an acceptance criterion."""

    def record(number: int, ok: bool, detail: str):
        ok = bool(ok)
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
