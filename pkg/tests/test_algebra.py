import math

import numpy as np
import pytest

from wrearr import (
    LEBESGUE,
    Algebra,
    InfiniteValueError,
    Operator,
    Projection,
    StepFunction,
    ValidationError,
    absolute,
    apply_function,
    capped,
    distribution,
    generalized_inverse,
    partial_isometry_conjugates,
    power,
    singular_value_function,
    spectral_projection,
    step_equal,
)
from wrearr.generate import (
    random_matrix_algebra,
    random_operator,
    random_positive_operator,
    rng_from_seed,
)

M2 = Algebra.matrix_blocks([2], [1.0])
M3 = Algebra.matrix_blocks([3], [1.0])


def sv_oracle(op):
    """Singular value function via LAPACK singular values and the
    distribution-then-inverse prescription."""
    levels = []
    masses = {}
    for lam, block in zip(op.algebra.trace_weights, op.blocks):
        for s in np.linalg.svd(block, compute_uv=False):
            if s > 0:
                levels.append(s)
                masses[s] = masses.get(s, 0.0) + lam
    if not levels:
        return StepFunction.zero()
    levels = sorted(set(levels))
    mass_ge = [sum(masses[u] for u in levels if u >= level) for level in levels]
    d = StepFunction([0.0] + levels, mass_ge)
    return generalized_inverse(d)


class TestAlgebraValidation:
    def test_caps(self):
        with pytest.raises(ValidationError):
            Algebra.matrix_blocks([65], [1.0])
        with pytest.raises(ValidationError):
            Algebra.matrix_blocks([64] * 9, [1.0] * 9)
        Algebra.matrix_blocks([64] * 8, [1.0] * 8)

    def test_weights_positive(self):
        with pytest.raises(ValidationError):
            Algebra.matrix_blocks([2], [0.0])
        with pytest.raises(ValidationError):
            Algebra.matrix_blocks([2], [-1.0])

    def test_commutative_bound(self):
        with pytest.raises(ValidationError):
            Algebra.commutative(0.0)
        assert Algebra.commutative(2.0).trace_of_identity() == 2.0

    def test_payload_shape_checked(self):
        with pytest.raises(ValidationError):
            Operator(M2, blocks=[np.zeros((3, 3))])
        with pytest.raises(ValidationError):
            Operator(M2, blocks=[np.array([[math.nan, 0], [0, 0]])])
        interval = Algebra.commutative(1.0)
        with pytest.raises(ValidationError):
            Operator(interval, step=StepFunction([0, 2], [1.0]))

    def test_mixing_algebras_rejected(self):
        a = Operator.identity(M2)
        b = Operator.identity(M3)
        with pytest.raises(ValidationError):
            a + b


class TestOperatorArithmetic:
    def test_trace_with_weights(self):
        alg = Algebra.matrix_blocks([1, 2], [0.5, 1.0])
        op = Operator.from_diagonal(alg, [5.0, 4.0, 4.0])
        assert op.trace() == 0.5 * 5 + 4 + 4

    def test_commutative_trace_is_integral(self):
        interval = Algebra.commutative(3.0)
        op = Operator.multiplier(interval, StepFunction([0, 1, 3], [2.0, -1.0]))
        assert op.trace() == pytest.approx(2.0 - 2.0)

    def test_norm(self):
        assert Operator.from_diagonal(M2, [3.0, -4.0]).norm() == pytest.approx(4.0)
        interval = Algebra.commutative(2.0)
        op = Operator.multiplier(interval, StepFunction([0, 1, 2], [-2.0, 1.0]))
        assert op.norm() == 2.0

    def test_matmul_and_transpose(self):
        a = Operator(M2, blocks=[np.array([[0.0, 1.0], [0.0, 0.0]])])
        assert np.allclose((a @ a.T).blocks[0], np.diag([1.0, 0.0]))
        assert np.allclose((a.T @ a).blocks[0], np.diag([0.0, 1.0]))


class TestAbsolute:
    def test_diagonal_sign_flip(self):
        a = Operator.from_diagonal(M2, [-3.0, 2.0])
        assert np.allclose(absolute(a).blocks[0], np.diag([3.0, 2.0]), atol=1e-12)

    def test_nilpotent_2x2(self):
        a = Operator(M2, blocks=[np.array([[0.0, 1.0], [0.0, 0.0]])])
        assert np.allclose(absolute(a).blocks[0], np.array([[0.0, 0.0], [0.0, 1.0]]), atol=1e-12)

    def test_commutative_pointwise(self):
        interval = Algebra.commutative(1.0)
        a = Operator.multiplier(interval, StepFunction([0, 1], [-2.0]))
        assert absolute(a).step == StepFunction([0, 1], [2.0])

    def test_square_recovers_gram_matrix(self):
        rng = rng_from_seed(4)
        a = random_operator(rng, random_matrix_algebra(rng))
        pos = absolute(a)
        for b, p in zip(a.blocks, pos.blocks):
            assert np.allclose(p @ p, b.T @ b, atol=1e-11)


class TestSingularValueFunction:
    def test_sorting_diagonal(self):
        a = Operator.from_diagonal(M3, [1.0, 3.0, 2.0])
        assert singular_value_function(a) == StepFunction([0, 1, 2, 3], [3.0, 2.0, 1.0])

    def test_block_weights_spread_values(self):
        alg = Algebra.matrix_blocks([1, 2], [0.5, 1.0])
        a = Operator.from_diagonal(alg, [5.0, 4.0, 4.0])
        expected = StepFunction([0, 0.5, 2.5], [5.0, 4.0])
        assert singular_value_function(a) == expected
        assert step_equal(sv_oracle(a), expected)

    def test_zero_operator(self):
        assert singular_value_function(Operator.zero(M3)).is_zero()

    def test_matches_oracle_on_random_blocks(self):
        rng = rng_from_seed(12)
        for _ in range(25):
            a = random_operator(rng, random_matrix_algebra(rng))
            assert step_equal(singular_value_function(a), sv_oracle(a), 1e-10, 1e-10)

    def test_commutative_is_rearrangement(self):
        interval = Algebra.commutative(3.0)
        a = Operator.multiplier(interval, StepFunction([0, 1, 2, 3], [1.0, -3.0, 2.0]))
        assert singular_value_function(a) == StepFunction([0, 1, 2, 3], [3.0, 2.0, 1.0])


class TestSpectralProjection:
    def test_diagonal_thresholds(self):
        a = Operator.from_diagonal(M2, [3.0, 1.0])
        assert np.allclose(spectral_projection(a, 2.0).blocks[0], np.diag([1.0, 0.0]))
        assert np.allclose(spectral_projection(a, 5.0).blocks[0], np.zeros((2, 2)))

    def test_rank_one_eigenprojection(self):
        u = np.array([3.0, 4.0]) / 5.0
        a = Operator(M2, blocks=[2.0 * np.outer(u, u)])
        p = spectral_projection(a, 1.0)
        assert np.allclose(p.blocks[0], np.outer(u, u), atol=1e-12)

    def test_commutative_indicator(self):
        interval = Algebra.commutative(3.0)
        a = Operator.multiplier(interval, StepFunction([0, 1, 2, 3], [3.0, 1.0, 2.0]))
        p = spectral_projection(a, 1.5)
        assert p.step == StepFunction([0, 1, 2, 3], [1.0, 0.0, 1.0])

    def test_near_ties_stay_together(self):
        a = Operator.from_diagonal(M2, [1.0, 1.0 + 1e-12])
        p = spectral_projection(a, 1.0)
        assert p.trace() == pytest.approx(2.0)

    def test_support_projection_counts_rank(self):
        rng = rng_from_seed(3)
        alg = Algebra.matrix_blocks([3], [0.5])
        a = Operator.from_diagonal(alg, [2.0, 0.0, 1.0])
        p = spectral_projection(absolute(a), 0.0)
        assert p.trace() == pytest.approx(1.0)  # two non-zero entries, weight 0.5

    def test_distribution_matches_projection_trace(self):
        rng = rng_from_seed(8)
        for _ in range(20):
            a = random_operator(rng, random_matrix_algebra(rng))
            d = distribution(singular_value_function(a), LEBESGUE)
            pos = absolute(a)
            for t in rng.uniform(0, a.norm() * 1.1, size=5):
                assert d(float(t)) == pytest.approx(
                    spectral_projection(pos, float(t)).trace(), abs=1e-10
                )

    def test_requires_positive_input(self):
        a = Operator(M2, blocks=[np.array([[0.0, 1.0], [0.0, 0.0]])])
        with pytest.raises(ValidationError):
            spectral_projection(a, 0.5)
        with pytest.raises(ValidationError):
            spectral_projection(Operator.from_diagonal(M2, [1.0, -1.0]), 0.5)


class TestApplyFunction:
    def test_square_on_diagonal(self):
        a = Operator.from_diagonal(M2, [2.0, 3.0])
        image = apply_function(power(2), a)
        assert np.allclose(image.blocks[0], np.diag([4.0, 9.0]), atol=1e-12)

    def test_zero_fixed_point(self):
        from wrearr import cosh_minus_one

        image = apply_function(cosh_minus_one(), Operator.zero(M3))
        assert all(np.allclose(b, 0.0) for b in image.blocks)

    def test_symmetric_2x2_keeps_eigenvectors(self):
        u = np.array([1.0, 1.0]) / math.sqrt(2)
        w = np.array([1.0, -1.0]) / math.sqrt(2)
        a = Operator(M2, blocks=[1.0 * np.outer(u, u) + 2.0 * np.outer(w, w)])
        image = apply_function(power(2), a)
        expected = 1.0 * np.outer(u, u) + 4.0 * np.outer(w, w)
        assert np.allclose(image.blocks[0], expected, atol=1e-12)

    def test_infinite_value_on_spectrum(self):
        a = Operator.from_diagonal(M2, [2.0, 0.5])
        with pytest.raises(InfiniteValueError):
            apply_function(capped(1.0), a)

    def test_level_sets_commute_with_strictly_increasing_maps(self):
        rng = rng_from_seed(21)
        for _ in range(15):
            alg = random_matrix_algebra(rng)
            a = random_positive_operator(rng, alg)
            t = float(rng.uniform(0, a.norm()))
            psi = power(2)
            lhs = spectral_projection(apply_function(psi, a), psi(t))
            rhs = spectral_projection(a, t)
            for pb, qb in zip(lhs.blocks, rhs.blocks):
                assert np.allclose(pb, qb, atol=1e-10)


class TestProjectionsAndIsometries:
    def test_projection_validation(self):
        with pytest.raises(ValidationError):
            Projection(M2, blocks=[np.array([[0.5, 0.0], [0.0, 1.0]])])
        p = Projection.from_support_mask(M2, [True, False])
        assert p.trace() == 1.0
        assert p.complement().trace() == 1.0

    def test_matrix_unit(self):
        v = Operator(M2, blocks=[np.array([[0.0, 1.0], [0.0, 0.0]])])
        source, rng_proj = partial_isometry_conjugates(v)
        assert np.allclose(source.blocks[0], np.diag([0.0, 1.0]))
        assert np.allclose(rng_proj.blocks[0], np.diag([1.0, 0.0]))

    def test_identity(self):
        one = Operator.identity(M2)
        source, rng_proj = partial_isometry_conjugates(one)
        assert np.allclose(source.blocks[0], np.eye(2))
        assert np.allclose(rng_proj.blocks[0], np.eye(2))

    def test_qr_generated_rank_two_in_m4(self):
        rng = rng_from_seed(17)
        alg = Algebra.matrix_blocks([4], [1.0])
        u = np.linalg.qr(rng.standard_normal((4, 2)))[0]
        w = np.linalg.qr(rng.standard_normal((4, 2)))[0]
        v = Operator(alg, blocks=[u @ w.T])
        assert np.allclose((v @ v.T @ v).blocks[0], v.blocks[0], atol=1e-12)
        source, rng_proj = partial_isometry_conjugates(v)
        assert source.trace() == pytest.approx(2.0, abs=1e-10)
        assert rng_proj.trace() == pytest.approx(2.0, abs=1e-10)

    def test_rejects_non_isometry(self):
        with pytest.raises(ValidationError):
            partial_isometry_conjugates(Operator.from_diagonal(M2, [2.0, 0.0]))


class TestInvariants:
    def test_sv_of_abs_transpose_and_scaling(self):
        rng = rng_from_seed(31)
        for _ in range(20):
            a = random_operator(rng, random_matrix_algebra(rng))
            mu = singular_value_function(a)
            assert step_equal(mu, singular_value_function(absolute(a)), 1e-10, 1e-10)
            assert step_equal(mu, singular_value_function(a.T), 1e-10, 1e-10)
            lam = float(rng.uniform(-3, 3))
            assert step_equal(
                singular_value_function(lam * a), mu.scaled(abs(lam)), 1e-10, 1e-10
            )
