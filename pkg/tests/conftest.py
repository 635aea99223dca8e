"""
Shared fixtures: the diagrams and metrics the suite is built around.
"""

import copy
import json

import pytest

from src.core import (
    Substitution,
    from_substitution,
    perron,
    regular_metric,
    substitution_metric,
    tiling_metric,
)


def _substitution(name, alphabet, rules):
    return from_substitution(Substitution.from_mapping(alphabet, rules), name)


@pytest.fixture
def fibonacci():
    """a -> ab, b -> a; edges a0: a->a, a1: a->b, b0: b->a"""
    return _substitution("fibonacci", ["a", "b"], {"a": "ab", "b": "a"})


@pytest.fixture
def thue_morse():
    return _substitution("thue_morse", ["a", "b"], {"a": "ab", "b": "ba"})


@pytest.fixture
def one_vertex():
    """a -> aa: one vertex with two loops"""
    return _substitution("one_vertex", ["a"], {"a": "aa"})


@pytest.fixture
def identity2():
    return _substitution("identity", ["a", "b"], {"a": "a", "b": "b"})


@pytest.fixture
def fib_perron(fibonacci):
    return perron(fibonacci)


@pytest.fixture
def fib_tiling(fibonacci, fib_perron):
    return tiling_metric(fibonacci, fib_perron, 1)


@pytest.fixture
def tm_metric(thue_morse):
    return substitution_metric(thue_morse, perron(thue_morse))


@pytest.fixture
def one_vertex_metric(one_vertex):
    return regular_metric(one_vertex, 1.0 / 3.0)


@pytest.fixture
def write_config(tmp_path):
    """Write a run configuration and return its path"""

    def write(data, name="run.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    return write


FIBONACCI_CONFIG = {
    "name": "fibonacci",
    "substitution": {"alphabet": ["a", "b"], "rules": {"a": "ab", "b": "a"}},
    "metric": {"mode": "tiling", "d": 1},
}

ONE_VERTEX_CONFIG = {
    "name": "one_vertex",
    "substitution": {"alphabet": ["a"], "rules": {"a": "aa"}},
    "metric": {"mode": "regular", "alpha": 1.0 / 3.0},
    "embed": {"labels": {"edges": {"a0": 1, "a1": 3}}},
}

THUE_MORSE_CONFIG = {
    "name": "thue_morse",
    "substitution": {"alphabet": ["a", "b"], "rules": {"a": "ab", "b": "ba"}},
    "metric": {"mode": "substitution"},
}

IDENTITY_CONFIG = {
    "name": "identity",
    "substitution": {"alphabet": ["a", "b"], "rules": {"a": "a", "b": "b"}},
    "metric": {"mode": "regular", "alpha": 0.5},
}


@pytest.fixture
def configs():
    """Run configurations by name (fresh copies)"""
    return copy.deepcopy({
        "fibonacci": FIBONACCI_CONFIG,
        "one_vertex": ONE_VERTEX_CONFIG,
        "thue_morse": THUE_MORSE_CONFIG,
        "identity": IDENTITY_CONFIG,
    })
