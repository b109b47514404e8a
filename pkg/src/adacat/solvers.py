"""Non-accelerated methods used standalone or as inner solvers.

Every solver runs until a stop predicate ``stop(x, units) -> bool`` fires or
a unit cap is reached.  The predicate is checked before each unit, so no unit
executes after it returns true.  What one unit means depends on the method:

=================  =====================================  =======
method             one unit                               C_n
=================  =====================================  =======
gradient descent   one step                               O(1)
steepest descent   one step with exact line search        O(1)
RACDM              ``n`` random coordinate steps          O(n)
alternating min.   one cyclic sweep over all ``p`` blocks O(p)
=================  =====================================  =======
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import CapExceeded, DoublingCapExceeded, MissingBlockSolver, NoSignChange

__all__ = [
    "SolverKind",
    "SolverDescriptor",
    "SolverRun",
    "RacdmState",
    "scalar_minimize",
    "gd_run",
    "steepest_run",
    "racdm_run",
    "am_run",
    "GradientDescent",
    "SteepestDescent",
    "RACDM",
    "AlternatingMinimization",
    "BETA_FLOOR",
    "MAX_DOUBLINGS",
]

BETA_FLOOR = 1e-12
MAX_DOUBLINGS = 60


class SolverKind(str, Enum):
    GD = "gd"
    SD = "sd"
    RACDM = "racdm"
    AM = "am"


@dataclass(frozen=True)
class SolverDescriptor:
    kind: SolverKind
    c_n_label: str
    iteration_unit: str


DESCRIPTORS = {
    SolverKind.GD: SolverDescriptor(SolverKind.GD, "O(1)", "one gradient step"),
    SolverKind.SD: SolverDescriptor(SolverKind.SD, "O(1)", "one exact line-search step"),
    SolverKind.RACDM: SolverDescriptor(SolverKind.RACDM, "O(n)", "n coordinate steps"),
    SolverKind.AM: SolverDescriptor(SolverKind.AM, "O(p)", "one sweep over all blocks"),
}


@dataclass
class SolverRun:
    final_point: np.ndarray
    units: int
    events: list = field(default_factory=list)  # (units, f_value, grad_equiv)
    steps: list = field(default_factory=list)   # step sizes, when the method has them


@dataclass
class RacdmState:
    """Per-coordinate smoothness estimates carried between runs."""

    beta_hat: np.ndarray

    @classmethod
    def constant(cls, n, beta0):
        return cls(np.full(n, float(beta0)))


def _drive(oracle, x, stop, cap, unit, record, run):
    """Shared unit loop: ``unit(x)`` performs one unit in place."""
    while not stop(x, run.units):
        if run.units >= cap:
            run.final_point = x
            raise CapExceeded(run, cap)
        unit(x)
        run.units += 1
        if record:
            run.events.append((run.units, oracle.value(x), oracle.grad_equiv()))
    run.final_point = x
    return run


def scalar_minimize(phi, phi_prime, h_hint=1.0, dphi0=None):
    """Minimize a convex function of one variable over ``h > 0``.

    Starting from ``h_hint`` the step is doubled until ``phi'`` turns
    non-negative, then the bracket is bisected on the sign of ``phi'``.
    Stops once ``|phi'(h)| <= 1e-8 |phi'(0)|`` or the bracket is narrower
    than ``1e-12 h``.  ``phi`` itself is not evaluated; it is accepted for
    symmetry with callers that carry both.
    """
    d0 = phi_prime(0.0) if dphi0 is None else dphi0
    if not d0 < 0:
        raise ValueError("phi'(0) must be negative (descent direction)")
    target = 1e-8 * abs(d0)
    lo, hi = 0.0, float(h_hint)
    d_hi = phi_prime(hi)
    doublings = 0
    while d_hi < 0:
        if abs(d_hi) <= target:
            return hi
        if doublings == 100:
            raise NoSignChange(f"phi' still negative at h={hi:.3g}")
        lo, hi = hi, 2.0 * hi
        d_hi = phi_prime(hi)
        doublings += 1
    if abs(d_hi) <= target:
        return hi
    h = hi
    for _ in range(200):
        h = 0.5 * (lo + hi)
        d = phi_prime(h)
        if abs(d) <= target:
            return h
        if d < 0:
            lo = h
        else:
            hi = h
        if hi - lo <= 1e-12 * h:
            break
    return h


def gd_run(oracle, x0, step, stop, cap, record=False):
    """Fixed-step gradient descent ``x <- x - step * grad f(x)``."""
    if not step > 0:
        raise ValueError("step must be positive")

    def unit(x):
        x -= step * oracle.gradient(x)

    return _drive(oracle, np.array(x0, dtype=float), stop, cap, unit, record, SolverRun(None, 0))


def steepest_run(oracle, x0, stop, cap, record=False):
    """Gradient descent with the step chosen by exact line search.

    Quadratic oracles use the closed form ``h = g^T g / (g^T H g)``; others
    go through :func:`scalar_minimize`, warm-started at the previous step.
    """
    run = SolverRun(None, 0)
    h_prev = [1.0]

    def unit(x):
        g = oracle.gradient(x)
        gg = float(g @ g)
        if gg == 0.0:
            run.steps.append(0.0)
            return
        line = oracle.line(x, -g, grad=g)
        if line.curvature is not None:
            h = gg / line.curvature
        else:
            h = scalar_minimize(line.phi, line.dphi, h_prev[0], dphi0=-gg)
        h_prev[0] = h
        run.steps.append(h)
        x -= h * g

    return _drive(oracle, np.array(x0, dtype=float), stop, cap, unit, record, run)


def racdm_run(oracle, x0, state, rng, stop, cap, record=False, on_step=None):
    """Random adaptive coordinate descent.

    Each step samples a coordinate ``i`` uniformly and tries
    ``x_i - g_i / beta_hat_i``; while the partial derivative changes sign the
    estimate ``beta_hat_i`` is doubled and the trial recomputed.  After the
    step is accepted ``beta_hat_i`` is halved (never below ``BETA_FLOOR``).
    ``state`` is updated in place.  ``on_step(i, g_old, g_new, beta_hat_i)``
    is called after every accepted step.
    """
    n = oracle.dim
    bh = state.beta_hat
    if bh.shape != (n,) or not np.all(bh > 0):
        raise ValueError("beta_hat must hold n positive entries")
    partial = oracle.partial

    def unit(x):
        for i in rng.integers(n, n):
            i = int(i)
            g = partial(i, x)
            xi = x[i]
            b = bh[i]
            if g != 0.0:
                x[i] = xi - g / b
                g_new = partial(i, x)
                doublings = 0
                while g * g_new < 0:
                    if doublings == MAX_DOUBLINGS:
                        x[i] = xi
                        raise DoublingCapExceeded(f"coordinate {i}: beta_hat reached {b:.3g}")
                    b *= 2.0
                    x[i] = xi - g / b
                    g_new = partial(i, x)
                    doublings += 1
            else:
                g_new = 0.0
            bh[i] = max(0.5 * b, BETA_FLOOR)
            if on_step is not None:
                on_step(i, g, g_new, bh[i])

    return _drive(oracle, np.array(x0, dtype=float), stop, cap, unit, record, SolverRun(None, 0))


def am_run(oracle, x0, stop, cap, record=False, on_block=None):
    """Cyclic alternating minimization over the oracle's blocks."""
    blocks = oracle.blocks
    if blocks is None or len(blocks) < 2:
        raise MissingBlockSolver("alternating minimization needs a layout with p >= 2 blocks")

    def unit(x):
        for b, idx in enumerate(blocks):
            x[idx] = oracle.block_argmin(b, x)
            if on_block is not None:
                on_block(b, x)

    return _drive(oracle, np.array(x0, dtype=float), stop, cap, unit, record, SolverRun(None, 0))


# ---------------------------------------------------------------------------
# solver handles used by the envelope and the bench harness
# ---------------------------------------------------------------------------

class GradientDescent:
    """Step ``1/(lf + L)`` on a prox-regularized oracle, ``step`` otherwise."""

    descriptor = DESCRIPTORS[SolverKind.GD]

    def __init__(self, lf, step=None):
        self.lf = lf
        self.step = step

    def run(self, oracle, x0, stop, cap, record=False):
        L = getattr(oracle, "L", None)
        if L is not None:
            step = 1.0 / (self.lf + L)
        else:
            step = self.step if self.step is not None else 1.0 / self.lf
        return gd_run(oracle, x0, step, stop, cap, record)


class SteepestDescent:
    descriptor = DESCRIPTORS[SolverKind.SD]

    def run(self, oracle, x0, stop, cap, record=False):
        return steepest_run(oracle, x0, stop, cap, record)


class RACDM:
    """Coordinate descent handle owning its RNG and smoothness estimates.

    With ``warm_start`` the estimates persist from one run to the next;
    otherwise every run restarts from ``beta0``.
    """

    descriptor = DESCRIPTORS[SolverKind.RACDM]

    def __init__(self, n, beta0, rng, warm_start=True):
        self.beta0 = beta0
        self.rng = rng
        self.warm_start = warm_start
        self.state = RacdmState.constant(n, beta0)

    def run(self, oracle, x0, stop, cap, record=False):
        if not self.warm_start:
            self.state = RacdmState.constant(oracle.dim, self.beta0)
        return racdm_run(oracle, x0, self.state, self.rng, stop, cap, record)


class AlternatingMinimization:
    descriptor = DESCRIPTORS[SolverKind.AM]

    def run(self, oracle, x0, stop, cap, record=False):
        return am_run(oracle, x0, stop, cap, record)
