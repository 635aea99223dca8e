"""
Tests for Perron-Frobenius data and the invariant measure.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core import (
    Measure,
    cylinder_mass_total,
    diagram_from_adjacency,
    enumerate_paths,
    extensions,
    measure,
    perron,
    sample_path,
)
from src.helpers.errors import ConvergenceError, NotPrimitiveError

PHI = (1 + math.sqrt(5)) / 2

positive_matrices = st.integers(min_value=1, max_value=4).flatmap(
    lambda q: st.lists(
        st.lists(st.integers(min_value=1, max_value=3), min_size=q, max_size=q),
        min_size=q,
        max_size=q,
    )
)


class TestPerronGolden:
    def test_fibonacci(self, fibonacci):
        data = perron(fibonacci)
        assert abs(data.lam - PHI) < 1e-10
        assert abs(data.nu[0] - 1 / PHI) < 1e-9
        assert abs(data.nu[1] - (1 - 1 / PHI)) < 1e-9
        assert data.iterations > 0

    def test_thue_morse(self, thue_morse):
        data = perron(thue_morse)
        assert abs(data.lam - 2.0) < 1e-10
        assert data.nu == pytest.approx((0.5, 0.5), abs=1e-12)

    def test_one_vertex(self, one_vertex):
        data = perron(one_vertex)
        assert data.lam == pytest.approx(2.0, abs=1e-12)
        assert data.nu == (1.0,)

    def test_not_primitive(self, identity2):
        with pytest.raises(NotPrimitiveError):
            perron(identity2)

    def test_iteration_budget(self, fibonacci):
        with pytest.raises(ConvergenceError):
            perron(fibonacci, max_iter=1)


class TestPerronProperties:
    @given(rows=positive_matrices)
    @settings(max_examples=60, deadline=None)
    def test_eigen_equation(self, rows):
        d = diagram_from_adjacency([f"v{i}" for i in range(len(rows))], rows)
        data = perron(d)
        nu = np.array(data.nu)
        assert np.max(np.abs(d.matrix @ nu - data.lam * nu)) <= 1e-12 * data.lam
        assert math.fsum(data.nu) == pytest.approx(1.0, abs=1e-12)
        assert min(data.nu) > 0

    @given(rows=positive_matrices, n=st.integers(min_value=0, max_value=12))
    @settings(max_examples=60, deadline=None)
    def test_total_mass(self, rows, n):
        d = diagram_from_adjacency([f"v{i}" for i in range(len(rows))], rows)
        assert cylinder_mass_total(Measure(perron(d), d), n) == pytest.approx(1.0, abs=1e-12)


class TestMeasure:
    def test_root_has_mass_one(self, fibonacci, fib_perron):
        meas = Measure(fib_perron, fibonacci)
        assert measure(meas, enumerate_paths(fibonacci, 0)[0]) == 1.0

    def test_first_level_is_nu(self, fibonacci, fib_perron):
        meas = Measure(fib_perron, fibonacci)
        assert [measure(meas, p) for p in enumerate_paths(fibonacci, 1)] == list(fib_perron.nu)

    @given(seed=st.integers(min_value=0, max_value=10**6), depth=st.integers(min_value=0, max_value=25))
    @settings(max_examples=100, deadline=None)
    def test_additivity(self, seed, depth):
        from src.core import Substitution, from_substitution

        d = from_substitution(Substitution.from_mapping(["a", "b"], {"a": "ab", "b": "a"}))
        meas = Measure(perron(d), d)
        path = sample_path(d, depth, seed)
        children = math.fsum(measure(meas, path.extend(e)) for e in extensions(d, path))
        assert abs(children - measure(meas, path)) <= 1e-12

    def test_total_mass_enumerated(self, thue_morse):
        meas = Measure(perron(thue_morse), thue_morse)
        for n in range(8):
            total = math.fsum(measure(meas, p) for p in enumerate_paths(thue_morse, n))
            assert total == pytest.approx(1.0, abs=1e-12)
