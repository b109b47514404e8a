"""Accelerated proximal envelope with adaptive choice of the regularization
parameter (Adaptive Catalyst over a Monteiro-Svaiter step).

Each outer iteration searches for a regularization ``L``: the first trial
is ``min(alpha * L_prev, Lu)``, and each retry divides ``L`` by ``beta``
(floored at ``Ld``).  For every trial the inner method is run on
``F(y) = f(y) + (L/2)||y - x||^2`` from the extrapolated point ``x`` until
``||grad F(y)|| <= (L/2)||y - x||``.  Retries stop once the inner effort
grows by a factor ``gamma`` over the previous trial, or ``L`` hits ``Ld``.
"""

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceeded, DimensionMismatch, InnerCapExceeded
from .oracle import ProxOracle, ms_condition

__all__ = [
    "CatalystConfig",
    "EnvelopeState",
    "OuterRecord",
    "TraceEvent",
    "Trace",
    "ms_coefficients",
    "extrapolate",
    "catalyst_outer_step",
    "catalyst_run",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CatalystConfig:
    L0: float
    Ld: float
    Lu: float
    alpha: float = 2.0
    beta: float = 1.5
    gamma: float = 1.3
    eps: float = 1e-9
    inner_unit_cap: int = 100_000
    outer_cap: int = 1000
    warm_start_state: bool = True

    def __post_init__(self):
        if not self.alpha > self.beta > self.gamma > 0:
            raise ValueError("need alpha > beta > gamma > 0")
        if not 0 < self.Ld <= self.Lu:
            raise ValueError("need 0 < Ld <= Lu")
        if not self.L0 > 0:
            raise ValueError("L0 must be positive")
        if self.gamma <= 1:
            log.warning("gamma=%g <= 1 makes the effort-growth test trivially true "
                        "whenever inner effort does not shrink", self.gamma)


@dataclass
class EnvelopeState:
    y: np.ndarray
    z: np.ndarray
    L_prev: float
    A: float = 0.0
    k: int = 0
    x: np.ndarray = None


@dataclass
class OuterRecord:
    k: int
    L_accepted: float
    attempts: int
    units_per_attempt: list
    A_k: float
    a_k: float
    cert_lhs: float
    cert_rhs: float
    f_y: float
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray


@dataclass
class TraceEvent:
    outer_k: int
    grad_equiv: float
    f_value: float
    gap: float
    L_k: float = None
    A_k: float = None
    inner_units: int = None
    wall_ms: float = 0.0


@dataclass
class Trace:
    events: list = field(default_factory=list)
    terminal_status: str = "converged"
    error: str = None
    records: list = field(default_factory=list)
    f_ref: float = None
    lf: float = None


def ms_coefficients(A_k, L):
    """Step weight ``a`` and new accumulator ``A + a`` for parameter ``L``.

    ``a`` is the positive root of ``L a^2 = A_k + a``.
    """
    inv = 1.0 / L
    a = 0.5 * (inv + math.sqrt(inv * inv + 4.0 * A_k * inv))
    return a, A_k + a


def extrapolate(y, z, A_k, a_next, A_next):
    if y.shape != z.shape:
        raise DimensionMismatch(f"{y.shape} vs {z.shape}")
    return (A_k / A_next) * y + (a_next / A_next) * z


def catalyst_outer_step(state, cfg, inner, oracle, on_inner=None):
    """One outer iteration; updates ``state`` in place and returns its record.

    ``on_inner(y)``, when given, sees every point the inner method visits at
    unit boundaries.
    """
    L = cfg.beta * min(cfg.alpha * state.L_prev, cfg.Lu)
    units = []
    t = 0
    while True:
        t += 1
        L = max(L / cfg.beta, cfg.Ld)
        a, A_next = ms_coefficients(state.A, L)
        x = extrapolate(state.y, state.z, state.A, a, A_next)
        prox = ProxOracle(oracle, L, x)
        cert = [False, math.inf, 0.0]

        def stop(y, _units, prox=prox, cert=cert):
            if on_inner is not None:
                on_inner(y)
            cert[:] = ms_condition(prox, y)
            return cert[0]

        try:
            run = inner.run(prox, x, stop, cfg.inner_unit_cap)
        except CapExceeded as exc:
            raise InnerCapExceeded(L, t, cfg.inner_unit_cap) from exc
        units.append(run.units)
        if (t > 1 and units[-1] >= cfg.gamma * units[-2]) or L == cfg.Ld:
            break

    y = run.final_point
    state.z = state.z - a * oracle.gradient(y)
    state.y = y
    state.x = x
    state.A = A_next
    state.L_prev = L
    state.k += 1
    return OuterRecord(
        k=state.k, L_accepted=L, attempts=t, units_per_attempt=units,
        A_k=A_next, a_k=a, cert_lhs=cert[1], cert_rhs=cert[2],
        f_y=oracle.value(y), x=x, y=y.copy(), z=state.z.copy(),
    )


def catalyst_run(oracle, y0, cfg, inner, f_ref=None, keep_records=True):
    """Run the envelope from ``y0`` until ``f(y) - f_ref <= eps`` or a cap.

    Returns a :class:`Trace` with one event per outer iteration (plus the
    starting point).  Cap hits are reported through ``terminal_status``.
    """
    y0 = np.array(y0, dtype=float)
    if not np.all(np.isfinite(y0)):
        raise ValueError("starting point must be finite")
    state = EnvelopeState(y=y0, z=y0.copy(), L_prev=cfg.L0)
    trace = Trace()
    ref = 0.0 if f_ref is None else f_ref
    t0 = time.perf_counter()
    f0 = oracle.value(y0)
    trace.events.append(TraceEvent(0, oracle.grad_equiv(), f0, f0 - ref, wall_ms=0.0))
    if f_ref is not None and f0 - f_ref <= cfg.eps:
        return trace
    while True:
        if state.k >= cfg.outer_cap:
            trace.terminal_status = "outer_cap"
            break
        try:
            rec = catalyst_outer_step(state, cfg, inner, oracle)
        except InnerCapExceeded as exc:
            trace.terminal_status = "inner_cap"
            trace.error = str(exc)
            break
        if keep_records:
            trace.records.append(rec)
        trace.events.append(TraceEvent(
            rec.k, oracle.grad_equiv(), rec.f_y, rec.f_y - ref, rec.L_accepted,
            rec.A_k, sum(rec.units_per_attempt), (time.perf_counter() - t0) * 1e3))
        if f_ref is not None and rec.f_y - f_ref <= cfg.eps:
            break
    return trace
