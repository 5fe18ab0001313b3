"""Weights, the weighted trace functional, and weighted rearrangements.

A weight enters every computation through its decreasing density profile
``mu(x)``: the weighted functional integrates singular value functions
against it, and the weighted rearrangement is the decreasing rearrangement
taken with respect to the measure it defines.  Two independent routes to
the weighted rearrangement are provided, plus the exhaustive projection
search that serves as ground truth for diagonal operators.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .algebra import singular_value_function
from .errors import CrossRouteError, ValidationError
from .stepfn import (
    EXPONENTIAL_DENSITY,
    LEBESGUE,
    Measure,
    StepFunction,
    distribution,
    generalized_inverse,
    integrate,
    rearrange,
    step_equal,
)

__all__ = [
    "Weight",
    "StepWeight",
    "ExpWeight",
    "WeightedContext",
    "weighted_trace",
    "weighted_distribution",
    "weighted_rearrangement",
    "weighted_rearrangement_oracle",
    "cross_route_tolerance",
]

TOLERANCE_ENV_VAR = "WREARR_TOLERANCE"
DEFAULT_CROSS_ROUTE_TOLERANCE = 1e-10

ORACLE_DIMENSION_CAP = 20


def cross_route_tolerance():
    """Tolerance for cross-route equality checks; overridable via the
    WREARR_TOLERANCE environment variable."""
    raw = os.environ.get(TOLERANCE_ENV_VAR)
    if raw is None:
        return DEFAULT_CROSS_ROUTE_TOLERANCE
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValidationError(f"{TOLERANCE_ENV_VAR} must be a float, got {raw!r}") from exc
    if not value > 0:
        raise ValidationError(f"{TOLERANCE_ENV_VAR} must be positive")
    return value


class Weight:
    """Base class for weights, exposed through their density profile.

    Concrete weights provide ``density_at``, the cumulative mass function
    (continuous, zero at zero, strictly increasing up to ``support_bound``)
    and its inverse, and the measure with that density.
    """

    kind = None

    def density_at(self, t):
        raise NotImplementedError

    def cumulative(self, t):
        raise NotImplementedError

    def cumulative_inverse(self, u):
        raise NotImplementedError

    @property
    def support_bound(self):
        raise NotImplementedError

    def total(self):
        return self.cumulative(math.inf)

    def measure(self):
        raise NotImplementedError


class StepWeight(Weight):
    """Weight given by a non-increasing step density (exact arithmetic)."""

    kind = "step"

    def __init__(self, density):
        if not isinstance(density, StepFunction):
            raise ValidationError("step weight needs a StepFunction density")
        if density.is_zero():
            raise ValidationError("weight must be non-zero")
        if not density.is_nonincreasing():
            raise ValidationError(
                "weight density must be non-increasing; rearrange the payload first"
            )
        if not np.all(np.isfinite(density.values)):
            raise ValidationError("weight density must be finite")
        self.density = density
        self._measure = Measure.with_density(density)

    def density_at(self, t):
        return self.density(t)

    @property
    def support_bound(self):
        return self.density.support_end

    def cumulative(self, t):
        return self._measure.cumulative(t)

    def cumulative_inverse(self, u):
        uu = np.asarray(u, dtype=float)
        total = self._measure.total()
        if np.any(uu < 0) or np.any(uu > total):
            raise ValidationError("cumulative inverse needs 0 <= u <= total mass")
        out = np.interp(uu, self._measure._cum, self._measure._knots)
        return float(out) if uu.ndim == 0 else out

    def measure(self):
        return self._measure

    def __repr__(self):
        return f"StepWeight({self.density!r})"


class ExpWeight(Weight):
    """The closed-form weight with density exp(-t)."""

    kind = "exp"

    density = EXPONENTIAL_DENSITY

    def density_at(self, t):
        return EXPONENTIAL_DENSITY(t)

    @property
    def support_bound(self):
        return math.inf

    def cumulative(self, t):
        return EXPONENTIAL_DENSITY.cumulative(t)

    def cumulative_inverse(self, u):
        uu = np.asarray(u, dtype=float)
        if np.any(uu < 0) or np.any(uu > 1):
            raise ValidationError("cumulative inverse needs 0 <= u <= 1")
        with np.errstate(divide="ignore"):
            out = -np.log1p(-uu)
        return float(out) if uu.ndim == 0 else out

    def measure(self):
        return Measure.with_density(EXPONENTIAL_DENSITY)

    def __repr__(self):
        return "ExpWeight()"


class WeightedContext:
    """An algebra together with a non-zero weight."""

    __slots__ = ("algebra", "weight")

    def __init__(self, algebra, weight):
        if not isinstance(weight, Weight):
            raise ValidationError("context needs a Weight instance")
        self.algebra = algebra
        self.weight = weight

    def __repr__(self):
        return f"WeightedContext({self.algebra!r}, {self.weight!r})"


def _check_member(ctx, a):
    if a.algebra != ctx.algebra:
        raise ValidationError("operator does not belong to the context's algebra")


def weighted_trace(ctx, a):
    """The weighted functional: integral of the singular value function of
    ``a`` against the weight density.

    Subadditive, homogeneous and faithful, but not additive.
    """
    _check_member(ctx, a)
    return integrate(singular_value_function(a), ctx.weight.measure(), math.inf)


def weighted_distribution(ctx, a):
    """Weighted distribution function: the weighted trace of each spectral
    projection of |a| above the threshold.

    Computed exactly as the cumulative weight mass composed with the
    unweighted distribution, which agrees with evaluating the weighted trace
    on each spectral projection directly.
    """
    _check_member(ctx, a)
    plain = distribution(singular_value_function(a), LEBESGUE)
    return plain.map_values(ctx.weight.cumulative)


def weighted_rearrangement(ctx, a, cross_check=False):
    """Weighted decreasing rearrangement of ``a``.

    Computed as the decreasing rearrangement of the singular value function
    with respect to the weight's measure.  With ``cross_check`` the result is
    also derived as the generalized inverse of the weighted distribution and
    the two routes are required to agree.
    """
    _check_member(ctx, a)
    result = rearrange(singular_value_function(a), ctx.weight.measure())
    if cross_check:
        other = generalized_inverse(weighted_distribution(ctx, a))
        if not step_equal(result, other, cross_route_tolerance(), 1e-12):
            raise CrossRouteError(
                "rearrangement routes disagree: "
                f"direct {result!r} vs inverse-distribution {other!r}"
            )
    return result


def weighted_rearrangement_oracle(ctx, a, t):
    """Ground-truth weighted rearrangement value by exhaustive search.

    Enumerates every coordinate-subset projection ``e`` of a diagonal
    operator, keeps those whose complement has weighted trace at most ``t``,
    and returns the smallest attainable ``||a e||``.  Exponential in the
    dimension, hence refused above {cap} coordinates.
    """
    _check_member(ctx, a)
    if t < 0:
        raise ValidationError("the rearrangement parameter must be >= 0")
    if not ctx.algebra.is_matrix or not a.is_diagonal():
        raise ValidationError("the exhaustive oracle needs diagonal matrix blocks")
    n = ctx.algebra.total_dimension
    if n > ORACLE_DIMENSION_CAP:
        raise ValidationError(
            f"the exhaustive oracle refuses dimensions above {ORACLE_DIMENSION_CAP}"
        )
    entries = np.abs(a.diagonal_entries())
    lam = ctx.algebra.coordinate_weights()
    # tables over all 2^n subsets, bit i set = coordinate i kept
    kept_max = np.zeros(1)
    kept_trace = np.zeros(1)
    for i in range(n):
        kept_max = np.concatenate([kept_max, np.maximum(kept_max, entries[i])])
        kept_trace = np.concatenate([kept_trace, kept_trace + lam[i]])
    dropped_mass = ctx.weight.cumulative(np.maximum(lam.sum() - kept_trace, 0.0))
    admissible = dropped_mass <= t
    return float(kept_max[admissible].min())


weighted_rearrangement_oracle.__doc__ = weighted_rearrangement_oracle.__doc__.format(
    cap=ORACLE_DIMENSION_CAP
)
