import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wrearr import (
    EXPONENTIAL_DENSITY,
    LEBESGUE,
    Measure,
    StepFunction,
    ValidationError,
    distribution,
    ess_sup,
    generalized_inverse,
    integrate,
    rearrange,
    step_add,
    step_equal,
    step_mul,
)

THREE_STEP = StepFunction([0, 1, 2, 3], [3, 2, 1])
DENSITY_21 = StepFunction([0, 1, 3], [2, 1])
WEIGHTED = Measure.with_density(DENSITY_21)
EXP = Measure.with_density(EXPONENTIAL_DENSITY)


def riemann_refinement_integral(f, density, upper=math.inf):
    # midpoint sum over the union grid; exact for step integrands
    grid = np.union1d(f.breakpoints, density.breakpoints)
    if math.isfinite(upper):
        grid = np.union1d(grid, [upper])
        grid = grid[grid <= upper]
    mids = 0.5 * (grid[:-1] + grid[1:])
    return float(np.sum(f(mids) * density(mids) * np.diff(grid)))


def superlevel_measure(f, m, level):
    # direct measure of {f >= level}, enumerating the pieces
    total = 0.0
    for a, b, v in f.pieces():
        if v >= level:
            total += m.interval_mass(a, b)
    return total


def scan_inverse(d, t):
    # the infimum in inf{s : d(s) <= t} is attained at 0 or a breakpoint
    for s in d.breakpoints:
        if d(float(s)) <= t:
            return float(s)
    return d.support_end


@st.composite
def step_functions(draw, max_pieces=5, max_value=5.0):
    k = draw(st.integers(1, max_pieces))
    widths = draw(st.lists(st.floats(0.1, 2.0), min_size=k, max_size=k))
    values = draw(st.lists(st.floats(0.0, max_value), min_size=k, max_size=k))
    return StepFunction(np.concatenate([[0.0], np.cumsum(widths)]), values)


class TestConstruction:
    def test_canonical_merges_equal_neighbours(self):
        f = StepFunction([0, 1, 2, 4], [2, 2, 1])
        assert list(f.breakpoints) == [0, 2, 4]
        assert list(f.values) == [2, 1]

    def test_canonical_strips_zero_tail(self):
        f = StepFunction([0, 1, 2, 3], [1, 0, 0])
        assert list(f.breakpoints) == [0, 1]
        assert list(f.values) == [1]

    def test_zero_function(self):
        z = StepFunction.zero()
        assert z.is_zero()
        assert z(0.0) == 0.0 and z(17.3) == 0.0
        assert StepFunction([0, 1], [0.0]) == z

    def test_interior_zero_survives(self):
        f = StepFunction([0, 1, 2, 3], [1, 0, 2])
        assert f.piece_count == 3
        assert f(1.5) == 0.0

    def test_rejects_bad_breakpoints(self):
        with pytest.raises(ValidationError):
            StepFunction([1, 2], [1.0])
        with pytest.raises(ValidationError):
            StepFunction([0, 2, 2], [1.0, 2.0])
        with pytest.raises(ValidationError):
            StepFunction([0, math.inf], [1.0])
        with pytest.raises(ValidationError):
            StepFunction([0, 1, 2], [1.0])

    def test_rejects_nan_and_minus_inf(self):
        with pytest.raises(ValidationError):
            StepFunction([0, 1], [math.nan])
        with pytest.raises(ValidationError):
            StepFunction([0, 1], [-math.inf])

    def test_plus_inf_is_a_value(self):
        f = StepFunction([0, 1, 2], [math.inf, 1.0])
        assert f(0.5) == math.inf

    def test_indicator(self):
        chi = StepFunction.indicator(1, 2)
        assert chi(0.5) == 0.0 and chi(1.0) == 1.0 and chi(2.0) == 0.0

    @given(step_functions())
    @settings(max_examples=60)
    def test_evaluation_is_right_continuous(self, f):
        for a, _, v in f.pieces():
            assert f(a) == v
        assert f(f.support_end) == 0.0

    @given(step_functions())
    @settings(max_examples=60)
    def test_canonical_form_is_idempotent(self, f):
        again = StepFunction(f.breakpoints, f.values)
        assert again == f


class TestMeasure:
    def test_lebesgue_interval_mass(self):
        assert LEBESGUE.interval_mass(1.0, 4.0) == 3.0
        assert LEBESGUE.interval_mass(2.0, 2.0) == 0.0
        assert LEBESGUE.interval_mass(0.0, math.inf) == math.inf

    def test_step_density_cumulative_is_piecewise_linear(self):
        assert WEIGHTED.cumulative(0.5) == 1.0
        assert WEIGHTED.cumulative(1.0) == 2.0
        assert WEIGHTED.cumulative(2.5) == 3.5
        assert WEIGHTED.cumulative(math.inf) == 4.0

    def test_exponential_density_closed_form(self):
        assert EXP.interval_mass(0.0, math.inf) == pytest.approx(1.0, abs=1e-15)
        assert EXP.interval_mass(1.0, 2.0) == pytest.approx(math.exp(-1) - math.exp(-2), abs=1e-15)

    def test_rejects_bad_density(self):
        with pytest.raises(ValidationError):
            Measure.with_density(StepFunction([0, 1, 2], [1.0, -1.0]))
        with pytest.raises(ValidationError):
            Measure.with_density(StepFunction([0, 1], [math.inf]))


class TestIntegrate:
    def test_indicator_against_exponential_weight(self):
        value = integrate(StepFunction([0, 2], [1.0]), EXP)
        assert value == pytest.approx(1 - math.exp(-2), abs=1e-15)

    def test_zero_function_any_measure(self):
        for m in (LEBESGUE, WEIGHTED, EXP):
            assert integrate(StepFunction.zero(), m) == 0.0

    def test_three_step_against_step_density(self):
        oracle = riemann_refinement_integral(THREE_STEP, DENSITY_21)
        assert oracle == 9.0
        assert integrate(THREE_STEP, WEIGHTED) == pytest.approx(9.0, abs=1e-12)

    def test_partial_upper_limit(self):
        oracle = riemann_refinement_integral(THREE_STEP, DENSITY_21, upper=1.5)
        assert integrate(THREE_STEP, WEIGHTED, upper=1.5) == pytest.approx(oracle, abs=1e-12)
        assert integrate(THREE_STEP, LEBESGUE, upper=0.0) == 0.0

    def test_infinite_value_on_positive_mass(self):
        f = StepFunction([0, 1], [math.inf])
        assert integrate(f, LEBESGUE) == math.inf

    def test_infinite_value_on_null_set_contributes_nothing(self):
        # the density vanishes beyond 3, where f is infinite
        f = StepFunction([0, 1, 3, 4], [1.0, 0.0, math.inf])
        assert integrate(f, WEIGHTED) == pytest.approx(2.0, abs=1e-15)


class TestDistribution:
    def test_indicator_lebesgue(self):
        d = distribution(StepFunction([0, 5], [1.0]), LEBESGUE)
        assert d == StepFunction([0, 1], [5.0])

    def test_three_step_with_density(self):
        d = distribution(THREE_STEP, WEIGHTED)
        for level, expected in [(1.0, 4.0), (2.0, 3.0), (3.0, 2.0)]:
            assert superlevel_measure(THREE_STEP, WEIGHTED, level) == expected
        assert d == StepFunction([0, 1, 2, 3], [4.0, 3.0, 2.0])

    def test_zero_function(self):
        assert distribution(StepFunction.zero(), LEBESGUE).is_zero()

    def test_rejects_negative_values(self):
        with pytest.raises(ValidationError):
            distribution(StepFunction([0, 1], [-1.0]), LEBESGUE)

    def test_rejects_infinite_value_on_positive_mass(self):
        with pytest.raises(ValidationError):
            distribution(StepFunction([0, 1], [math.inf]), LEBESGUE)

    def test_infinite_value_on_null_set_is_invisible(self):
        f = StepFunction([0, 1, 3, 4], [2.0, 1.0, math.inf])
        d = distribution(f, WEIGHTED)
        assert d == StepFunction([0, 1, 2], [4.0, 2.0])

    def test_shape_on_random_inputs(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            k = rng.integers(1, 6)
            f = StepFunction(
                np.concatenate([[0.0], np.cumsum(rng.uniform(0.1, 1.5, k))]),
                rng.uniform(0.0, 4.0, k),
            )
            m = WEIGHTED if rng.random() < 0.5 else LEBESGUE
            d = distribution(f, m)
            assert d.is_nonincreasing()
            for a, _, v in d.pieces():
                assert d(a) == v


class TestRearrange:
    def test_decreasing_function_is_fixed_by_lebesgue(self):
        assert rearrange(THREE_STEP, LEBESGUE) == THREE_STEP

    def test_two_level_sort(self):
        f = StepFunction([0, 1, 2], [1.0, 3.0])
        assert rearrange(f, LEBESGUE) == StepFunction([0, 1, 2], [3.0, 1.0])

    def test_three_step_with_density(self):
        r = rearrange(THREE_STEP, WEIGHTED)
        assert r == StepFunction([0, 2, 3, 4], [3.0, 2.0, 1.0])
        d = distribution(THREE_STEP, WEIGHTED)
        rng = np.random.default_rng(11)
        for t in rng.uniform(0, 5, 200):
            assert r(float(t)) == scan_inverse(d, float(t))

    def test_values_on_null_sets_disappear(self):
        # the density vanishes beyond 3, hiding the value on [3, 4)
        f = StepFunction([0, 3, 4], [1.0, 5.0])
        assert rearrange(f, WEIGHTED) == StepFunction([0, 4], [1.0])

    def test_generalized_inverse_requires_monotone(self):
        with pytest.raises(ValidationError):
            generalized_inverse(StepFunction([0, 1, 2], [1.0, 2.0]))

    @given(step_functions())
    @settings(max_examples=60)
    def test_equimeasurable_under_lebesgue(self, f):
        r = rearrange(f, LEBESGUE)
        assert r.is_nonincreasing()
        d_f = distribution(f, LEBESGUE)
        d_r = distribution(r, LEBESGUE)
        grid = np.union1d(d_f.breakpoints, d_r.breakpoints)
        assert np.allclose(d_f(grid), d_r(grid), atol=1e-10)

    def test_integral_preserved_on_random_inputs(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            k = rng.integers(1, 6)
            f = StepFunction(
                np.concatenate([[0.0], np.cumsum(rng.uniform(0.1, 1.5, k))]),
                rng.uniform(0.0, 4.0, k),
            )
            m = [LEBESGUE, WEIGHTED, EXP][rng.integers(0, 3)]
            assert integrate(rearrange(f, m), LEBESGUE) == pytest.approx(
                integrate(f, m), rel=1e-12, abs=1e-12
            )

    def test_distribution_bound_at_rearrangement(self):
        d = distribution(THREE_STEP, WEIGHTED)
        r = rearrange(THREE_STEP, WEIGHTED)
        for t in np.linspace(0, 5, 101):
            assert d(r(float(t))) <= t + 1e-12


class TestPointwiseOps:
    def test_add_on_refinement(self):
        f = StepFunction([0, 2], [1.0])
        g = StepFunction([0, 1, 3], [2.0, 1.0])
        assert step_add(f, g) == StepFunction([0, 1, 2, 3], [3.0, 2.0, 1.0])

    def test_mul_zero_kills_infinity(self):
        f = StepFunction([0, 1, 2], [math.inf, 1.0])
        g = StepFunction([0, 1, 2], [0.0, 2.0])
        assert step_mul(f, g) == StepFunction([0, 1, 2], [0.0, 2.0])

    def test_scaled_by_zero(self):
        f = StepFunction([0, 1], [math.inf])
        assert f.scaled(0.0).is_zero()

    def test_map_values_requires_zero_fixed_point(self):
        f = StepFunction([0, 1], [2.0])
        with pytest.raises(ValidationError):
            f.map_values(lambda v: v + 1.0)

    def test_ess_sup_ignores_null_sets(self):
        f = StepFunction([0, 3, 4], [1.0, 9.0])
        assert ess_sup(f, LEBESGUE) == 9.0
        assert ess_sup(f, WEIGHTED) == 1.0


class TestStepEqual:
    def test_tolerates_breakpoint_jitter(self):
        f = StepFunction([0, 1, 2], [2.0, 1.0])
        g = StepFunction([0, 1 + 1e-13, 2], [2.0, 1.0])
        assert step_equal(f, g)

    def test_tolerates_value_jitter_across_merges(self):
        f = StepFunction([0, 1, 2], [1.0, 1.0 + 1e-12])
        g = StepFunction([0, 2], [1.0])
        assert f.piece_count != g.piece_count
        assert step_equal(f, g)

    def test_detects_value_gap(self):
        f = StepFunction([0, 1], [1.0])
        g = StepFunction([0, 1], [1.0 + 1e-6])
        assert not step_equal(f, g)

    def test_infinities_compare_equal(self):
        f = StepFunction([0, 1, 2], [math.inf, 1.0])
        assert step_equal(f, f)
