"""First-order oracles with call accounting, and the prox-regularized wrapper.

Cost is reported in gradient equivalents: a full gradient counts 1, a single
partial derivative ``1/n``, an exact block minimization ``1/p`` and a value
call ``value_weight`` (0 unless a problem says otherwise).  One-dimensional
line restrictions (used by exact line search) are charged as value calls.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, MissingBlockSolver

__all__ = ["CallCounter", "Line", "Oracle", "ProxOracle", "ms_condition"]


@dataclass
class CallCounter:
    full_gradients: int = 0
    values: int = 0
    partials: int = 0
    block_solves: int = 0

    def grad_equiv(self, n, p=1, value_weight=0.0):
        return (
            self.full_gradients
            + self.partials / n
            + self.block_solves / p
            + self.values * value_weight
        )


class Line:
    """Restriction ``phi(t) = f(x + t d)`` of an objective to a line.

    ``curvature`` is the constant second derivative when the objective is
    quadratic, otherwise ``None``.
    """

    def __init__(self, phi, dphi, curvature=None):
        self.phi = phi
        self.dphi = dphi
        self.curvature = curvature


class Oracle:
    """Smooth objective on R^n exposing values, gradients and partials.

    Subclasses implement ``_value``, ``_gradient`` and ``_partial`` and may
    implement ``_block_argmin``/``_line``.  The public methods do the call
    accounting, so every evaluation made through them is charged.
    """

    quadratic = False

    def __init__(self, dim, blocks=None, value_weight=0.0):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = int(dim)
        self.blocks = None if blocks is None else [np.asarray(b, dtype=np.intp) for b in blocks]
        self.value_weight = value_weight
        self.counter = CallCounter()
        self._grad_memo = None

    # -- accounting -------------------------------------------------------
    def snapshot(self):
        return replace(self.counter)

    def reset(self):
        self.counter = CallCounter()
        self._grad_memo = None

    def grad_equiv(self):
        p = len(self.blocks) if self.blocks else 1
        return self.counter.grad_equiv(self.dim, p, self.value_weight)

    def _check(self, x):
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"expected shape ({self.dim},), got {x.shape}")

    # -- evaluations ------------------------------------------------------
    def value(self, x):
        self._check(x)
        self.counter.values += 1
        return self._value(x)

    def gradient(self, x):
        """Gradient at ``x``; an immediate repeat at the same point is free."""
        self._check(x)
        memo = self._grad_memo
        if memo is not None and np.array_equal(memo[0], x):
            return memo[1].copy()
        self.counter.full_gradients += 1
        g = self._gradient(x)
        self._grad_memo = (x.copy(), g.copy())
        return g

    def partial(self, i, x):
        if not 0 <= i < self.dim:
            raise IndexOutOfRange(f"coordinate {i} outside [0, {self.dim})")
        self.counter.partials += 1
        return self._partial(i, x)

    def block_argmin(self, block, x, reg=0.0, center=None):
        """Exact minimizer of ``f(y) + reg/2 ||y - center||^2`` over one block.

        Coordinates outside ``self.blocks[block]`` are held at ``x``; the
        returned vector holds only the block's coordinates.
        """
        if self.blocks is None or not hasattr(self, "_block_argmin"):
            raise MissingBlockSolver(f"{type(self).__name__} has no block minimizer")
        self._check(x)
        self.counter.block_solves += 1
        return self._block_argmin(self.blocks[block], x, reg, center)

    def line(self, x, d, grad=None):
        """Line restriction through ``x`` along ``d``.

        ``grad`` may pass an already computed gradient at ``x``.
        """
        self._check(x)
        self._check(d)
        if hasattr(self, "_line"):
            self.counter.values += 1
            return self._line(x, d, grad)

        def phi(t):
            return self.value(x + t * d)

        def dphi(t):
            return float(self.gradient(x + t * d) @ d)

        return Line(phi, dphi)

    def _partial(self, i, x):
        return float(self._gradient(x)[i])


class ProxOracle(Oracle):
    """``F(y) = f(y) + (L/2)||y - center||^2`` over an inner oracle.

    Every call is charged to the inner oracle's counter.
    """

    def __init__(self, inner, L, center):
        if not L > 0:
            raise ValueError("regularization parameter must be positive")
        center = np.asarray(center, dtype=float)
        if center.shape != (inner.dim,):
            raise DimensionMismatch(f"center has shape {center.shape}, expected ({inner.dim},)")
        self.inner = inner
        self.L = float(L)
        self.center = center
        self.dim = inner.dim
        self.blocks = inner.blocks
        self.value_weight = inner.value_weight
        self.quadratic = inner.quadratic

    @property
    def counter(self):
        return self.inner.counter

    def reset(self):
        self.inner.reset()

    def value(self, y):
        self._check(y)
        r = y - self.center
        return self.inner.value(y) + 0.5 * self.L * float(r @ r)

    def gradient(self, y):
        self._check(y)
        return self.inner.gradient(y) + self.L * (y - self.center)

    def partial(self, i, y):
        return self.inner.partial(i, y) + self.L * (y[i] - self.center[i])

    def block_argmin(self, block, x, reg=0.0, center=None):
        if center is not None and reg:
            # sum of two quadratic penalties is one penalty around their weighted mean
            center = (self.L * self.center + reg * center) / (self.L + reg)
        else:
            center = self.center
        return self.inner.block_argmin(block, x, reg=self.L + reg, center=center)

    def line(self, x, d, grad=None):
        inner_grad = None if grad is None else grad - self.L * (x - self.center)
        base = self.inner.line(x, d, inner_grad)
        L = self.L
        r0 = x - self.center
        rd = float(r0 @ d)
        rr = float(r0 @ r0)
        dd = float(d @ d)

        def phi(t):
            return base.phi(t) + 0.5 * L * (rr + 2.0 * t * rd + t * t * dd)

        def dphi(t):
            return base.dphi(t) + L * (rd + t * dd)

        curvature = None if base.curvature is None else base.curvature + L * dd
        return Line(phi, dphi, curvature)


def ms_condition(prox, y):
    """Inexactness test ``||grad F(y)|| <= (L/2)||y - center||``.

    Returns ``(holds, lhs, rhs)``.  The gradient evaluation is charged.
    """
    if y.shape != prox.center.shape:
        raise DimensionMismatch(f"point has shape {y.shape}, expected {prox.center.shape}")
    lhs = float(np.linalg.norm(prox.gradient(y)))
    rhs = 0.5 * prox.L * float(np.linalg.norm(y - prox.center))
    return lhs <= rhs, lhs, rhs
