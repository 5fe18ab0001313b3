"""Desk-scale operator algebra models.

Two kinds of algebra carry the whole theory at desk scale: finite direct
sums of real matrix blocks, each block weighted in the trace, and the
commutative algebra of step-function multipliers on a bounded interval.
Everything is real; all operators are bounded.
"""

from __future__ import annotations

import math

import numpy as np

from .eig import one_sided_svd, symmetric_eigen
from .errors import ValidationError
from .stepfn import LEBESGUE, StepFunction, rearrange, step_add, step_mul

__all__ = [
    "MAX_BLOCK_SIZE",
    "MAX_TOTAL_DIMENSION",
    "Algebra",
    "Operator",
    "Projection",
    "absolute",
    "singular_value_function",
    "spectral_projection",
    "apply_function",
    "partial_isometry_conjugates",
]

MAX_BLOCK_SIZE = 64
MAX_TOTAL_DIMENSION = 512

_ENTRY_TOL = 1e-10


class Algebra:
    """A block matrix algebra with trace weights, or a commutative one.

    ``matrix`` kind: elements are direct sums of real ``n_k x n_k`` blocks and
    the trace is ``sum_k weight_k * Tr(block_k)``.  ``steps`` kind: elements
    are step functions supported on ``[0, bound)`` acting by multiplication,
    and the trace is the Lebesgue integral.
    """

    __slots__ = ("kind", "block_sizes", "trace_weights", "domain_bound")

    def __init__(self, kind, block_sizes=None, trace_weights=None, domain_bound=None):
        if kind == "matrix":
            sizes = tuple(int(n) for n in block_sizes)
            weights = tuple(float(w) for w in trace_weights)
            if len(sizes) != len(weights) or not sizes:
                raise ValidationError("need one trace weight per block")
            if any(n < 1 for n in sizes):
                raise ValidationError("block sizes must be >= 1")
            if any(n > MAX_BLOCK_SIZE for n in sizes):
                raise ValidationError(f"block sizes are capped at {MAX_BLOCK_SIZE}")
            if sum(sizes) > MAX_TOTAL_DIMENSION:
                raise ValidationError(f"total dimension is capped at {MAX_TOTAL_DIMENSION}")
            if any(not (w > 0 and math.isfinite(w)) for w in weights):
                raise ValidationError("trace weights must be positive and finite")
            self.block_sizes = sizes
            self.trace_weights = weights
            self.domain_bound = None
        elif kind == "steps":
            bound = float(domain_bound)
            if not (bound > 0 and math.isfinite(bound)):
                raise ValidationError("domain bound must be positive and finite")
            self.block_sizes = None
            self.trace_weights = None
            self.domain_bound = bound
        else:
            raise ValidationError(f"unknown algebra kind {kind!r}")
        self.kind = kind

    @classmethod
    def matrix_blocks(cls, block_sizes, trace_weights):
        return cls("matrix", block_sizes=block_sizes, trace_weights=trace_weights)

    @classmethod
    def commutative(cls, domain_bound):
        return cls("steps", domain_bound=domain_bound)

    @property
    def is_matrix(self):
        return self.kind == "matrix"

    @property
    def total_dimension(self):
        return sum(self.block_sizes) if self.is_matrix else None

    def trace_of_identity(self):
        if self.is_matrix:
            return float(sum(w * n for w, n in zip(self.trace_weights, self.block_sizes)))
        return self.domain_bound

    def coordinate_weights(self):
        """Trace weight of each diagonal coordinate, flattened across blocks."""
        if not self.is_matrix:
            raise ValidationError("coordinate weights exist only for matrix algebras")
        return np.repeat(self.trace_weights, self.block_sizes)

    def __eq__(self, other):
        if not isinstance(other, Algebra):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.block_sizes == other.block_sizes
            and self.trace_weights == other.trace_weights
            and self.domain_bound == other.domain_bound
        )

    def __hash__(self):
        return hash((self.kind, self.block_sizes, self.trace_weights, self.domain_bound))

    def __repr__(self):
        if self.is_matrix:
            return f"Algebra.matrix_blocks({list(self.block_sizes)}, {list(self.trace_weights)})"
        return f"Algebra.commutative({self.domain_bound})"


def _frozen(array):
    out = np.array(array, dtype=float)
    out.setflags(write=False)
    return out


class Operator:
    """Element of an :class:`Algebra`: matrix blocks or a step multiplier."""

    __slots__ = ("algebra", "blocks", "step", "_sv_cache")

    def __init__(self, algebra, blocks=None, step=None):
        self.algebra = algebra
        self._sv_cache = None
        if algebra.is_matrix:
            if step is not None or blocks is None:
                raise ValidationError("matrix algebra operators need matrix blocks")
            mats = [np.asarray(b, dtype=float) for b in blocks]
            if len(mats) != len(algebra.block_sizes):
                raise ValidationError("wrong number of blocks")
            for k, (mat, n) in enumerate(zip(mats, algebra.block_sizes)):
                if mat.shape != (n, n):
                    raise ValidationError(f"block {k} must have shape ({n}, {n})")
                if not np.all(np.isfinite(mat)):
                    raise ValidationError(f"block {k} has non-finite entries")
            self.blocks = tuple(_frozen(m) for m in mats)
            self.step = None
        else:
            if blocks is not None or step is None:
                raise ValidationError("commutative operators need a step payload")
            if not isinstance(step, StepFunction):
                raise ValidationError("step payload must be a StepFunction")
            if step.support_end > algebra.domain_bound:
                raise ValidationError("step payload exceeds the algebra's domain bound")
            if np.any(np.isinf(step.values)):
                raise ValidationError("step payload must be bounded")
            self.blocks = None
            self.step = step

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, algebra):
        if algebra.is_matrix:
            return cls(algebra, blocks=[np.zeros((n, n)) for n in algebra.block_sizes])
        return cls(algebra, step=StepFunction.zero())

    @classmethod
    def identity(cls, algebra):
        if algebra.is_matrix:
            return cls(algebra, blocks=[np.eye(n) for n in algebra.block_sizes])
        return cls(algebra, step=StepFunction([0.0, algebra.domain_bound], [1.0]))

    @classmethod
    def from_diagonal(cls, algebra, entries):
        """Diagonal operator from entries flattened across the blocks."""
        if not algebra.is_matrix:
            raise ValidationError("diagonal construction needs a matrix algebra")
        flat = np.asarray(entries, dtype=float)
        if flat.size != algebra.total_dimension:
            raise ValidationError("wrong number of diagonal entries")
        blocks = []
        at = 0
        for n in algebra.block_sizes:
            blocks.append(np.diag(flat[at : at + n]))
            at += n
        return cls(algebra, blocks=blocks)

    @classmethod
    def multiplier(cls, algebra, step):
        return cls(algebra, step=step)

    # -- structure ------------------------------------------------------------

    @property
    def is_matrix(self):
        return self.algebra.is_matrix

    def is_diagonal(self):
        if not self.is_matrix:
            return False
        return all(np.count_nonzero(b - np.diag(np.diag(b))) == 0 for b in self.blocks)

    def diagonal_entries(self):
        if not self.is_diagonal():
            raise ValidationError("operator is not diagonal")
        return np.concatenate([np.diag(b) for b in self.blocks])

    def _same_algebra(self, other):
        if self.algebra != other.algebra:
            raise ValidationError("operators live in different algebras")

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        self._same_algebra(other)
        if self.is_matrix:
            return Operator(self.algebra, blocks=[a + b for a, b in zip(self.blocks, other.blocks)])
        return Operator(self.algebra, step=step_add(self.step, other.step))

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float, np.integer, np.floating)):
            return NotImplemented
        c = float(scalar)
        if self.is_matrix:
            return Operator(self.algebra, blocks=[c * b for b in self.blocks])
        return Operator(self.algebra, step=self.step.scaled(c))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        self._same_algebra(other)
        if self.is_matrix:
            return Operator(self.algebra, blocks=[a @ b for a, b in zip(self.blocks, other.blocks)])
        return Operator(self.algebra, step=step_mul(self.step, other.step))

    @property
    def T(self):
        """Adjoint; transposition per block, identity on multipliers."""
        if self.is_matrix:
            return Operator(self.algebra, blocks=[b.T for b in self.blocks])
        return self

    # -- spectral data ----------------------------------------------------------

    def _block_singular_values(self):
        """Per-block singular values, each sorted descending."""
        if self._sv_cache is None:
            self._sv_cache = tuple(
                one_sided_svd(b, block_index=k)[0] for k, b in enumerate(self.blocks)
            )
        return self._sv_cache

    def norm(self):
        """Operator norm."""
        if self.is_matrix:
            svs = self._block_singular_values()
            return float(max((s[0] for s in svs if s.size), default=0.0))
        return self.step.max_abs()

    def trace(self):
        if self.is_matrix:
            return float(
                sum(w * np.trace(b) for w, b in zip(self.algebra.trace_weights, self.blocks))
            )
        v = self.step.values
        return float(np.dot(v, np.diff(self.step.breakpoints))) if v.size else 0.0

    def __abs__(self):
        return absolute(self)

    def is_projection(self, tol=_ENTRY_TOL):
        if self.is_matrix:
            return all(
                np.max(np.abs(b @ b - b)) <= tol and np.max(np.abs(b - b.T)) <= tol
                for b in self.blocks
            )
        v = self.step.values
        return bool(np.all(np.minimum(np.abs(v), np.abs(v - 1.0)) <= tol))

    def __repr__(self):
        if self.is_matrix:
            return f"Operator({self.algebra!r}, blocks={[b.shape[0] for b in self.blocks]})"
        return f"Operator({self.algebra!r}, step={self.step!r})"


class Projection(Operator):
    """An operator validated to be an orthogonal projection."""

    __slots__ = ()

    def __init__(self, algebra, blocks=None, step=None):
        super().__init__(algebra, blocks=blocks, step=step)
        if not self.is_projection():
            raise ValidationError("payload is not an orthogonal projection")

    @classmethod
    def wrap(cls, op):
        if op.is_matrix:
            return cls(op.algebra, blocks=op.blocks)
        return cls(op.algebra, step=op.step)

    @classmethod
    def from_support_mask(cls, algebra, mask):
        """Diagonal projection keeping the coordinates where ``mask`` is true."""
        return cls.wrap(Operator.from_diagonal(algebra, np.asarray(mask, dtype=float)))

    def complement(self):
        return Projection.wrap(Operator.identity(self.algebra) - self)


def _positive_eigen(a, label="operator"):
    """Per-block eigen pairs of a positive operator, negatives clipped.

    Validates symmetry and positivity up to the clustering tolerance.
    """
    tol = 1e-9 * (1.0 + a.norm())
    pairs = []
    for k, b in enumerate(a.blocks):
        if b.size and np.max(np.abs(b - b.T)) > tol:
            raise ValidationError(f"{label} must be symmetric (block {k})")
        w, v = symmetric_eigen(b, block_index=k)
        if w.size and w[0] < -tol:
            raise ValidationError(f"{label} must be positive semidefinite (block {k})")
        pairs.append((np.clip(w, 0.0, None), v))
    return pairs


def absolute(a):
    """The positive part |a| = (a^T a)^(1/2), computed per block."""
    if not a.is_matrix:
        return Operator(a.algebra, step=a.step.absolute())
    blocks = []
    for k, b in enumerate(a.blocks):
        s, v = one_sided_svd(b, block_index=k)
        blocks.append(v @ np.diag(s) @ v.T)
    return Operator(a.algebra, blocks=blocks)


def singular_value_function(a):
    """The singular value function of ``a`` as a decreasing step function.

    Each singular value occupies an interval whose length is the trace weight
    of its block; the intervals are laid out in decreasing value order.  For
    multipliers this is the decreasing rearrangement of |payload|.
    """
    if not a.is_matrix:
        return rearrange(a.step.absolute(), LEBESGUE)
    values = []
    widths = []
    for svs, lam in zip(a._block_singular_values(), a.algebra.trace_weights):
        values.append(svs)
        widths.append(np.full(svs.size, lam))
    values = np.concatenate(values)
    widths = np.concatenate(widths)
    order = np.argsort(-values, kind="stable")
    return StepFunction._raw(
        np.concatenate([[0.0], np.cumsum(widths[order])]), values[order]
    )


def spectral_projection(a, threshold):
    """Spectral projection of a positive operator onto (threshold, oo).

    Eigenvalues within ``1e-9 * (1 + ||a||)`` of each other are clustered and
    kept or dropped together, so ties at the threshold cannot split a nearly
    degenerate eigenspace.
    """
    if threshold < 0:
        raise ValidationError("threshold must be >= 0")
    if not a.is_matrix:
        if np.any(a.step.values < 0):
            raise ValidationError("spectral projection needs a positive multiplier")
        indicator = a.step.map_values(lambda u: np.where(np.asarray(u) > threshold, 1.0, 0.0))
        return Projection(a.algebra, step=indicator)
    tol = 1e-9 * (1.0 + a.norm())
    blocks = []
    for w, v in _positive_eigen(a, "spectral projection argument"):
        keep = np.zeros(w.size, dtype=bool)
        i = w.size - 1
        while i >= 0:  # walk clusters from the top eigenvalue down
            j = i
            while j > 0 and w[j] - w[j - 1] <= tol:
                j -= 1
            if w[i] > threshold:
                keep[j : i + 1] = True
                i = j - 1
            else:
                break
        sel = v[:, keep]
        blocks.append(sel @ sel.T)
    return Projection(a.algebra, blocks=blocks)


def apply_function(psi, a):
    """Functional calculus: apply a non-decreasing ``psi`` with ``psi(0) = 0``
    to a positive operator, eigenvalue by eigenvalue.

    Raises :class:`InfiniteValueError` when ``psi`` is infinite somewhere on
    the spectrum; callers read that as failed space membership.
    """
    from .errors import InfiniteValueError

    if not a.is_matrix:
        if np.any(a.step.values < 0):
            raise ValidationError("functional calculus needs a positive multiplier")
        mapped = psi(a.step.values) if a.step.values.size else a.step.values
        if np.any(np.isinf(mapped)):
            raise InfiniteValueError("function is infinite on the spectrum")
        return Operator(a.algebra, step=StepFunction._raw(a.step.breakpoints, mapped))
    blocks = []
    for w, v in _positive_eigen(a, "functional calculus argument"):
        mapped = np.asarray(psi(w), dtype=float)
        if np.any(np.isinf(mapped)):
            raise InfiniteValueError("function is infinite on the spectrum")
        blocks.append(v @ np.diag(mapped) @ v.T)
    return Operator(a.algebra, blocks=blocks)


def partial_isometry_conjugates(v):
    """Source and range projections (v^T v, v v^T) of a partial isometry."""
    source = v.T @ v
    if not source.is_projection():
        raise ValidationError("operator is not a partial isometry: v^T v is not a projection")
    return Projection.wrap(source), Projection.wrap(v @ v.T)
