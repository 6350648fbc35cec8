"""
Shared pytest setup
Slow corpus entries are skipped unless --runslow or CCS_RUN_SLOW=1 is given.
"""
import itertools
import os

import numpy as np
import pytest

from config import Config


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the extended corpus (quintic threefolds and beyond)")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: extended corpus entry, minutes of Groebner work")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow") or os.getenv("CCS_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow or CCS_RUN_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def verified_bases(monkeypatch):
    """Certify every Groebner basis computed while the test runs."""
    monkeypatch.setattr(Config, "VERIFY_GROEBNER", True)
    yield


@pytest.fixture
def sympy_engine(monkeypatch):
    monkeypatch.setattr(Config, "GROEBNER_ENGINE", "sympy")
    yield


@pytest.fixture
def generator_saturation(monkeypatch):
    monkeypatch.setattr(Config, "SATURATION", "generators")
    yield


def _exponents(arity, degree):
    result = []
    for combo in itertools.combinations_with_replacement(range(arity), degree):
        exps = [0] * arity
        for i in combo:
            exps[i] += 1
        result.append(tuple(exps))
    return result


@pytest.fixture
def random_forms():
    """Seeded samplers of homogeneous polynomials with small nonzero integer coefficients.

    ``random_forms(seed)(ring, degree, terms)`` draws ``terms`` distinct monomials.
    """
    def sampler(seed):
        generator = np.random.default_rng(seed)

        def form(ring, degree, terms=3, bound=5):
            monomials = _exponents(ring.arity, degree)
            count = min(terms, len(monomials))
            picks = generator.choice(len(monomials), size=count, replace=False)
            signs = generator.choice([-1, 1], size=count)
            sizes = generator.integers(1, bound + 1, size=count)
            return ring.from_terms({monomials[int(i)]: int(s * c) for i, s, c in zip(picks, signs, sizes)})

        return form

    return sampler
