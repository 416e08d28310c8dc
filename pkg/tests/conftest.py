import functools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


def random_density(rng, n, rank=None):
    rank = n if rank is None else rank
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def random_channel(rng, d_in, d_out, rank):
    """Random CPTP map built from a Gaussian Choi operator with unit partial trace."""
    g = rng.normal(size=(d_in * d_out, rank)) + 1j * rng.normal(size=(d_in * d_out, rank))
    J = g @ g.conj().T
    tr = np.einsum("ibjb->ij", J.reshape(d_in, d_out, d_in, d_out))
    w, v = np.linalg.eigh(tr)
    s = v @ np.diag(w ** -0.5) @ v.conj().T
    S = np.kron(s, np.eye(d_out))
    from nonadditivity.channels import channel_from_choi
    return channel_from_choi(S @ J @ S.conj().T, d_in, d_out)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@functools.lru_cache(maxsize=None)
def ns_row(family, s):
    """Region row for an ``N_s`` pairing, shared by the tests that need it."""
    from nonadditivity.witness import region_row_ns
    return region_row_ns(family, s)
