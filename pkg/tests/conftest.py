import numpy as np
import pytest

_ACCEPTANCE = {}


def random_hermitian(rng, d, scale=1.0):
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (X + X.conj().T) / 2


def random_density(rng, d, rank=None, decay=0.0):
    """Random density matrix; ``decay`` damps high levels so truncation stays harmless."""
    rank = d if rank is None else rank
    X = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    X *= np.exp(-decay * np.arange(d))[:, None]
    rho = X @ X.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance(request):
    """Record an acceptance criterion outcome; printed in the terminal summary."""

    def record(ident, passed, detail):
        _ACCEPTANCE[ident] = (bool(passed), detail)
        assert passed, f"{ident}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for ident in sorted(_ACCEPTANCE, key=lambda s: (int(s[2:].rstrip("abc")), s)):
        passed, detail = _ACCEPTANCE[ident]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {ident}  {detail}")
