"""
Tests for the path-space Laplacian: eigenvalues, omega-spectrum, tech condition and thresholds.
"""

import logging
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core import (
    FinitePath,
    MeasureBeta,
    TableBeta,
    check_tech,
    complete_periodic,
    count_paths,
    eigen_count,
    eigen_table,
    eigenvalue,
    enumerate_paths,
    hoelder_thresholds,
    is_bounded,
    labeling_threshold,
    lambda_s,
    make_spec,
    omega_distortion_report,
    omega_point,
    omega_spectrum,
    perron,
    seeds_from_json,
    spectrum_params,
    tech_grid,
)
from src.helpers.errors import (
    EnumerationCapError,
    InvalidLabelingError,
    MissingLabelError,
    PreconditionError,
    UnboundedRegimeError,
)

PHI = (1 + math.sqrt(5)) / 2


@pytest.fixture
def fib_params(fib_tiling, fib_perron):
    return spectrum_params(fib_tiling, fib_perron, 5.0)


class TestScaling:
    def test_lambda_s(self):
        assert lambda_s(5.0, 1.0, 1 / PHI) == pytest.approx(PHI ** -2, abs=1e-12)

    def test_lambda_s_alpha_range(self):
        with pytest.raises(PreconditionError):
            lambda_s(5.0, 1.0, 1.5)

    def test_bounded_regime(self):
        assert is_bounded(3.5, 1.0)
        assert not is_bounded(3.0, 1.0)

    def test_params(self, fib_params):
        assert fib_params.s0 == pytest.approx(1.0, abs=1e-12)
        assert f"{fib_params.lambda_s:.6g}" == "0.381966"

    def test_unbounded_warns(self, fib_tiling, fib_perron, caplog):
        with caplog.at_level(logging.WARNING):
            spectrum_params(fib_tiling, fib_perron, 2.5)
        assert "unbounded regime" in caplog.text


class TestBeta:
    def test_measure_ratios(self, fibonacci, fib_perron):
        beta = MeasureBeta(fibonacci, fib_perron)
        assert beta(0, 5.0) == pytest.approx(1 / PHI, abs=1e-12)
        assert beta(1, 5.0) == pytest.approx(1 - 1 / PHI, abs=1e-12)
        assert beta(2, 5.0) == pytest.approx(1.0, abs=1e-12)
        assert beta(1, 7.0) == beta(1, 5.0)

    def test_degenerate_warns(self, thue_morse, caplog):
        with caplog.at_level(logging.WARNING):
            MeasureBeta(thue_morse, perron(thue_morse))
        assert "not injective" in caplog.text

    def test_constant_table(self, fibonacci):
        beta = TableBeta.from_json(fibonacci, {"edges": {"a0": 1, "a1": 2, "b0": 3}})
        assert [beta(e, 9.0) for e in range(3)] == [1.0, 2.0, 3.0]

    def test_tables_per_exponent(self, fibonacci):
        beta = TableBeta.from_json(fibonacci, {"tables": [
            {"s": 5.0, "edges": {"a0": 1, "a1": 2, "b0": 3}},
            {"s": 6.0, "edges": {"a0": 4, "a1": 5, "b0": 6}},
        ]})
        assert beta(0, 5.4) == 1.0
        assert beta(0, 5.8) == 4.0

    def test_table_errors(self, fibonacci):
        with pytest.raises(MissingLabelError):
            TableBeta.from_json(fibonacci, {"edges": {"a0": 1}})
        with pytest.raises(InvalidLabelingError):
            TableBeta.from_json(fibonacci, {"edges": {"a0": -1, "a1": 2, "b0": 3}})
        with pytest.raises(InvalidLabelingError):
            TableBeta.from_json(fibonacci, [])

    def test_seeds(self, fibonacci):
        assert seeds_from_json(fibonacci, {"a": 2}) == (2.0, 0.0)
        with pytest.raises(InvalidLabelingError):
            seeds_from_json(fibonacci, {"c": 1})


class TestEigenvalues:
    def test_golden_value(self, fibonacci, fib_params):
        record = eigenvalue(fibonacci, FinitePath(0, (0, 1)), fib_params)
        assert record.value == pytest.approx(1 / PHI + PHI ** -4, abs=1e-12)
        assert f"{record.value:.4g}" == "0.7639"
        assert record.multiplicity == 0

    def test_multiplicity_counts_branching(self, fibonacci, fib_params):
        assert eigenvalue(fibonacci, FinitePath(0, (0, 0)), fib_params).multiplicity == 1

    def test_needs_body(self, fibonacci, fib_params):
        with pytest.raises(PreconditionError):
            eigenvalue(fibonacci, FinitePath(0, ()), fib_params)

    def test_seed_enters_finite_depth(self, fib_tiling, fib_perron, fibonacci):
        plain = spectrum_params(fib_tiling, fib_perron, 5.0)
        seeded = spectrum_params(fib_tiling, fib_perron, 5.0, seeds=(1.0, 0.0))
        path = FinitePath(0, (0,))
        shift = eigenvalue(fibonacci, path, seeded).value - eigenvalue(fibonacci, path, plain).value
        assert shift == pytest.approx(plain.lambda_s, abs=1e-12)

    def test_table_is_sorted(self, fibonacci, fib_params):
        table = eigen_table(fibonacci, fib_params, 6)
        assert len(table) == sum(count_paths(fibonacci, n) for n in range(2, 7))
        values = [r.value for r in table]
        assert values == sorted(values)

    @pytest.mark.parametrize("diagram", ["fibonacci", "thue_morse", "one_vertex"])
    def test_count_matches_path_count(self, diagram, request):
        d = request.getfixturevalue(diagram)
        for n in range(8):
            assert eigen_count(d, n) == count_paths(d, n + 1)


class TestOmegaSpectrum:
    def test_golden_points(self, fibonacci, fib_params):
        fixed = make_spec(fibonacci, FinitePath(0, ()), (0,))
        alternating = make_spec(fibonacci, FinitePath(0, ()), (1, 2))
        assert omega_point(fixed, fib_params) == pytest.approx(1.0, abs=1e-12)
        assert f"{omega_point(alternating, fib_params):.9g}" == "0.894427191"

    def test_unbounded(self, fibonacci, fib_tiling, fib_perron):
        params = spectrum_params(fib_tiling, fib_perron, 2.5)
        with pytest.raises(UnboundedRegimeError):
            omega_point(make_spec(fibonacci, FinitePath(0, ()), (0,)), params)
        with pytest.raises(UnboundedRegimeError):
            omega_spectrum(fibonacci, params, 6)

    def test_truncated_spec_rejected(self, fibonacci, fib_params):
        with pytest.raises(PreconditionError):
            omega_point(make_spec(fibonacci, FinitePath(0, (0,))), fib_params)

    def test_seed_independent(self, fibonacci, fib_tiling, fib_perron):
        plain = spectrum_params(fib_tiling, fib_perron, 5.0)
        seeded = spectrum_params(fib_tiling, fib_perron, 5.0, seeds=(3.0, 7.0))
        x = make_spec(fibonacci, FinitePath(0, (1,)), (2, 1))
        assert omega_point(x, plain) == omega_point(x, seeded)

    def test_enumerated_points_bracket_exact(self, fibonacci, fib_params):
        for path in enumerate_paths(fibonacci, 8):
            exact = omega_point(complete_periodic(fibonacci, path), fib_params)
            partial = math.fsum(fib_params.lambda_s ** (j - 1) * fib_params.beta(e, 5.0)
                                for j, e in enumerate(path.body, start=1))
            bound = fib_params.lambda_s ** len(path.body) / (1 - fib_params.lambda_s)
            assert partial - 1e-12 <= exact <= partial + bound + 1e-12
        points = omega_spectrum(fibonacci, fib_params, 8)
        assert [v for v, _ in points] == sorted(v for v, _ in points)
        assert all(bound > 0 for _, bound in points)

    def test_budget(self, fibonacci, fib_params):
        with pytest.raises(EnumerationCapError):
            omega_spectrum(fibonacci, fib_params, 10, budget=10)

    def test_sample_mode(self, fibonacci, fib_params):
        points = omega_spectrum(fibonacci, fib_params, 10, mode="sample", budget=200, seed=4)
        assert points == omega_spectrum(fibonacci, fib_params, 10, mode="sample", budget=200, seed=4)
        assert all(bound == 0.0 for _, bound in points)
        assert all(0.0 < value <= 1.0 / (1 - fib_params.lambda_s) for value, _ in points)

    def test_arguments(self, fibonacci, fib_params):
        with pytest.raises(PreconditionError):
            omega_spectrum(fibonacci, fib_params, 1)
        with pytest.raises(PreconditionError):
            omega_spectrum(fibonacci, fib_params, 4, mode="exact")

    @given(seed=st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=50, deadline=None)
    def test_shift_identity(self, seed):
        from src.core import Substitution, from_substitution, sample_path, tiling_metric

        d = from_substitution(Substitution.from_mapping(["a", "b"], {"a": "ab", "b": "a"}))
        data = perron(d)
        params = spectrum_params(tiling_metric(d, data, 1), data, 5.0)
        x = complete_periodic(d, sample_path(d, 6, seed))
        # dropping the first body edge divides the tail series by Lambda_s
        first = x.edge_at(1)
        shifted = make_spec(d, FinitePath(d.edges[first].range, x.prefix.body[1:]), x.tail)
        expected = params.beta(first, 5.0) + params.lambda_s * omega_point(shifted, params)
        assert omega_point(x, params) == pytest.approx(expected, rel=1e-12)


class TestTechCondition:
    def test_fibonacci_passes(self, fibonacci, fib_perron, fib_tiling):
        s0 = 1.0
        report = check_tech(fibonacci, fib_perron, MeasureBeta(fibonacci, fib_perron), tech_grid(s0))
        assert report["passed"]
        assert report["edges_simple"] and report["nu_distinct"]
        assert report["s1_estimate"] == report["s_grid"][0]

    def test_thue_morse_fails(self, thue_morse):
        data = perron(thue_morse)
        report = check_tech(thue_morse, data, MeasureBeta(thue_morse, data), tech_grid(1.0))
        assert not report["passed"]
        assert not report["nu_distinct"]

    def test_parallel_edges_fail(self, one_vertex):
        data = perron(one_vertex)
        report = check_tech(one_vertex, data, TableBeta({None: (1.0, 2.0)}), tech_grid(0.63))
        assert not report["edges_simple"]
        assert not report["passed"]

    def test_grid(self):
        grid = tech_grid(1.0, 4)
        assert grid == pytest.approx([5.5, 8.0, 10.5, 13.0])
        assert len(tech_grid(1.0)) == 32


class TestThresholds:
    def test_fibonacci(self):
        report = hoelder_thresholds(1.0, 3, PHI)
        assert report["basic"] == pytest.approx(3 + math.log(3) / math.log(PHI))
        assert f"{report['basic']:.5g}" == "5.2831"
        assert report["telescoped"] == 4.0
        assert report["effective"] == report["basic"]

    def test_effective_takes_s1(self):
        assert hoelder_thresholds(1.0, 3, PHI, s1=9.0)["effective"] == 9.0

    def test_needs_growth(self):
        with pytest.raises(PreconditionError):
            hoelder_thresholds(1.0, 3, 1.0)

    def test_labeling_threshold(self, fibonacci, fib_perron):
        value = labeling_threshold(1.0, MeasureBeta(fibonacci, fib_perron), 5.0, fibonacci, fib_perron.lam)
        delta_min = 2 / PHI - 1
        expected = 3 + math.log(1 + (1 / PHI) / delta_min) / math.log(PHI)
        assert value == pytest.approx(expected, rel=1e-9)
        assert value == pytest.approx(5.672, abs=1e-3)

    def test_labeling_threshold_degenerate(self, thue_morse):
        beta = TableBeta({None: (1.0, 1.0, 2.0, 3.0)})
        assert labeling_threshold(1.0, beta, 5.0, thue_morse, 2.0) == math.inf


class TestOmegaDistortion:
    def test_fibonacci(self, fib_tiling, fib_perron):
        params = spectrum_params(fib_tiling, fib_perron, 5.4)
        report = omega_distortion_report(fib_tiling, params, 10_000, 30, seed=0)
        assert report["exponent"] == pytest.approx(2.4)
        assert report["violations"] == 0
        assert report["empirical_max"] <= report["theoretical_hi"] * (1 + 1e-9)
        # Lambda_s = phi^-2.4 ~ 0.315 leaves c- < 0: only the upper side is a bound here
        assert not report["lower_certified"]
        assert report["theoretical_lo"] < 0
        assert report["empirical_min"] > 0

    def test_fibonacci_two_sided(self, fib_tiling, fib_perron):
        # above the labeling threshold ~5.672, Lambda_s = phi^-3 makes c- positive
        params = spectrum_params(fib_tiling, fib_perron, 6.0)
        report = omega_distortion_report(fib_tiling, params, 10_000, 30, seed=0)
        assert report["exponent"] == pytest.approx(3.0)
        assert report["lower_certified"]
        assert report["theoretical_lo"] > 0
        assert report["violations"] == 0
        assert report["theoretical_lo"] * (1 - 1e-9) <= report["empirical_min"]
        assert report["empirical_max"] <= report["theoretical_hi"] * (1 + 1e-9)

    def test_unbounded(self, fib_tiling, fib_perron):
        params = spectrum_params(fib_tiling, fib_perron, 3.0)
        with pytest.raises(UnboundedRegimeError):
            omega_distortion_report(fib_tiling, params, 10, 10, seed=0)
