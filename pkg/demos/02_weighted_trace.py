"""The weighted trace functional and how it fails to be a trace.

A weight enters through its decreasing density profile.  The weighted
functional integrates an operator's singular value function against that
profile; it is positive, homogeneous, faithful and normal, but only
SUBadditive.  The commutative interval algebra with the exponential weight
gives closed-form numbers that exhibit the strict subadditivity gap.
"""

import math

from wrearr import (
    Algebra,
    ExpWeight,
    Operator,
    StepFunction,
    StepWeight,
    WeightedContext,
    singular_value_function,
    weighted_trace,
)

# The algebra of step multipliers on [0, 2) with the exponential weight.
interval = Algebra.commutative(2.0)
ctx = WeightedContext(interval, ExpWeight())

whole = Operator.multiplier(interval, StepFunction([0, 2], [1.0]))        # chi_[0,2)
first = Operator.multiplier(interval, StepFunction([0, 1], [1.0]))        # chi_[0,1)
second = Operator.multiplier(interval, StepFunction([0, 1, 2], [0.0, 1.0]))  # chi_[1,2)

t_whole = weighted_trace(ctx, whole)
t_first = weighted_trace(ctx, first)
t_second = weighted_trace(ctx, second)

print("weighted trace of chi_[0,2) =", t_whole, " (closed form 1 - e^-2 =", 1 - math.exp(-2), ")")
print("weighted trace of chi_[0,1) =", t_first)
print("weighted trace of chi_[1,2) =", t_second)

# Both halves get the SAME value: the functional only sees the singular
# value function, and both indicators rearrange to chi_[0,1).
print("\nsingular value function of chi_[1,2):", singular_value_function(second))

# Strict subadditivity: splitting the interval increases the total.
gap = t_first + t_second - t_whole
print("\nsubadditivity gap =", gap, " (closed form (1 - e^-1)^2 =", math.expm1(-1) ** 2, ")")
assert gap > 0

# The same functional on a matrix algebra: three eigenvalues weighted by a
# step density.  The cumulative weight function is piecewise linear.
blocks = Algebra.matrix_blocks([3], [1.0])
weight = StepWeight(StepFunction([0, 1, 3], [2.0, 1.0]))
mctx = WeightedContext(blocks, weight)
a = Operator.from_diagonal(blocks, [3.0, 1.0, 2.0])

print("\ncumulative weight at t = 1, 2, 3:", [weight.cumulative(t) for t in (1.0, 2.0, 3.0)])
print("weighted trace of diag(3,1,2) =", weighted_trace(mctx, a))
print("  (by hand: 3*2 + 2*1 + 1*1 = 9; the largest value gets the heaviest mass)")

# Homogeneity and subadditivity hold for arbitrary elements.
b = Operator.from_diagonal(blocks, [0.5, -2.0, 1.0])
print("\ntau(2a) =", weighted_trace(mctx, 2.0 * a), " = 2 tau(a) =", 2 * weighted_trace(mctx, a))
print("tau(a + b) =", weighted_trace(mctx, a + b),
      "<= tau(a) + tau(b) =", weighted_trace(mctx, a) + weighted_trace(mctx, b))
