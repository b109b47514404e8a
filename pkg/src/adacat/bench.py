"""Benchmark harness: run matrices from a config file and CSV traces.

Config files are INI-style.  Each section is one run, named by its run id;
a ``[DEFAULT]`` section may hold shared keys.  Recognized keys:

=============  ==========================================================
problem        ``quadratic`` or ``logistic``
n              dimension of a generated quadratic
problem_seed   seed of the generated quadratic (defaults to ``seed``)
matrix         path to a saved quadratic (overrides ``n``/``problem_seed``)
data           LIBSVM file for logistic runs, or ``bundled`` (default)
n_features     feature count for logistic data (default 123)
method         ``gd``, ``sd``, ``racdm`` or ``am``
accelerated    wrap the method in the adaptive envelope (bool)
alpha/beta/gamma  L-search factors (2.0 / 1.5 / 1.3)
L0, Ld, Lu     multiples of L_f (1.6 / 0.005 / 10)
beta0          ``1/L0`` (default) or a multiple of L_f; RACDM start estimates
step           gradient-descent step as a multiple of ``1/L_f`` (1.0)
blocks         number of blocks for ``am``
eps            target gap (1e-9)
inner_cap      inner units per attempt (100000)
outer_cap      outer iterations, or units for plain runs (1000)
warm_start     keep RACDM estimates between inner runs (true)
seed           run seed: starting point and coordinate sampling
=============  ==========================================================

Relative parameters are resolved against the problem's smoothness constant
at run time.  Logistic gaps are measured against the lowest objective seen
in the session (including a quasi-Newton reference solve).
"""

import configparser
import csv
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from .envelope import CatalystConfig, Trace, TraceEvent, catalyst_run
from .errors import AdacatError, CapExceeded, ConfigError, MissingFile
from .numkit import Rng
from .problems import (
    A1A_FEATURES,
    even_blocks,
    gen_quadratic,
    lf_estimate,
    load_bundled_subset,
    load_libsvm,
    load_quadratic,
    logistic_oracle,
    logistic_problem,
    quadratic_oracle,
)
from .solvers import RACDM, AlternatingMinimization, GradientDescent, SteepestDescent

log = logging.getLogger(__name__)

CSV_HEADER = ["outer_k", "grad_equiv", "f_value", "gap", "L_k", "A_k", "inner_units", "wall_ms"]
MANIFEST_HEADER = [
    "run_id", "problem", "n", "problem_seed", "matrix", "data", "n_features", "method",
    "accelerated", "alpha", "beta", "gamma", "L0", "Ld", "Lu", "beta0", "step", "blocks",
    "eps", "inner_cap", "outer_cap", "warm_start", "seed",
    "terminal_status", "final_gap", "total_grad_equiv", "error",
]

METHODS = ("gd", "sd", "racdm", "am")
PROBLEMS = ("quadratic", "logistic")


@dataclass(frozen=True)
class RunSpec:
    run_id: str
    problem: str
    method: str
    accelerated: bool
    seed: int
    n: int = None
    problem_seed: int = None
    matrix: str = None
    data: str = "bundled"
    n_features: int = A1A_FEATURES
    alpha: float = 2.0
    beta: float = 1.5
    gamma: float = 1.3
    L0: float = 1.6
    Ld: float = 0.005
    Lu: float = 10.0
    beta0: str = "1/L0"
    step: float = 1.0
    blocks: int = None
    eps: float = 1e-9
    inner_cap: int = 100_000
    outer_cap: int = 1000
    warm_start: bool = True


_FIELD_TYPES = {
    "n": int, "problem_seed": int, "n_features": int, "blocks": int, "inner_cap": int,
    "outer_cap": int, "seed": int,
    "alpha": float, "beta": float, "gamma": float, "L0": float, "Ld": float, "Lu": float,
    "step": float, "eps": float,
    "accelerated": bool, "warm_start": bool,
    "problem": str, "method": str, "matrix": str, "data": str, "beta0": str,
}


def _convert(run_id, key, raw, kind):
    raw = raw.strip()
    if kind is bool:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{run_id}.{key}", f"not a boolean: {raw!r}")
    try:
        if kind is int:
            value = int(float(raw)) if "e" in raw.lower() else int(raw)
        else:
            value = kind(raw)
    except ValueError:
        raise ConfigError(f"{run_id}.{key}", f"expected {kind.__name__}, got {raw!r}") from None
    if kind is float and not math.isfinite(value):
        raise ConfigError(f"{run_id}.{key}", "must be finite")
    return value


def _validate(spec):
    rid = spec.run_id
    if spec.problem not in PROBLEMS:
        raise ConfigError(f"{rid}.problem", f"must be one of {PROBLEMS}")
    if spec.method not in METHODS:
        raise ConfigError(f"{rid}.method", f"must be one of {METHODS}")
    if not 0 <= spec.seed < 2**64:
        raise ConfigError(f"{rid}.seed", "must be an unsigned 64-bit integer")
    if spec.problem == "quadratic" and spec.matrix is None and (spec.n is None or spec.n < 2):
        raise ConfigError(f"{rid}.n", "quadratic problems need n >= 2 (or a matrix file)")
    if spec.method == "am":
        if spec.blocks is None or spec.blocks < 2:
            raise ConfigError(f"{rid}.blocks", "alternating minimization needs blocks >= 2")
        if spec.problem != "quadratic":
            raise ConfigError(f"{rid}.method", "alternating minimization needs a quadratic problem")
    if spec.beta0 != "1/L0":
        try:
            if not float(spec.beta0) > 0:
                raise ValueError
        except ValueError:
            raise ConfigError(f"{rid}.beta0", "must be '1/L0' or a positive multiple of L_f") from None
    for key in ("L0", "Ld", "Lu", "step", "eps"):
        if not getattr(spec, key) > 0:
            raise ConfigError(f"{rid}.{key}", "must be positive")
    if spec.Ld > spec.Lu:
        raise ConfigError(f"{rid}.Ld", "must not exceed Lu")
    if not spec.alpha > spec.beta > spec.gamma > 0:
        raise ConfigError(f"{rid}.alpha", "need alpha > beta > gamma > 0")
    if spec.gamma <= 1:
        log.warning("%s: gamma=%g <= 1 makes the effort-growth test trivially true", rid, spec.gamma)
    if spec.inner_cap < 1 or spec.outer_cap < 1:
        raise ConfigError(f"{rid}.outer_cap", "caps must be positive")


def load_config(path, overrides=None):
    """Read and validate run specs.  ``overrides`` (from CLI flags) win."""
    if not os.path.isfile(path):
        raise MissingFile(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None, strict=True)
    parser.optionxform = str
    try:
        parser.read(path)
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(exc.section, "duplicate run_id") from None
    except configparser.Error as exc:
        raise ConfigError("<file>", str(exc)) from None
    base_dir = os.path.dirname(os.path.abspath(path))
    specs = []
    for run_id in parser.sections():
        section = parser[run_id]
        values = {}
        for key, raw in section.items():
            if key not in _FIELD_TYPES:
                raise ConfigError(f"{run_id}.{key}", "unknown key")
            values[key] = _convert(run_id, key, raw, _FIELD_TYPES[key])
        values.update(overrides or {})
        for required in ("problem", "method", "seed"):
            if required not in values:
                raise ConfigError(f"{run_id}.{required}", "missing")
        values.setdefault("accelerated", False)
        if values.get("problem_seed") is None:
            values["problem_seed"] = values["seed"]
        for key in ("matrix", "data"):
            p = values.get(key)
            if p and p != "bundled" and not os.path.isabs(p):
                values[key] = os.path.join(base_dir, p)
        spec = RunSpec(run_id=run_id, **values)
        _validate(spec)
        specs.append(spec)
    return specs


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _quadratic(n, problem_seed, matrix):
    q = load_quadratic(matrix) if matrix else gen_quadratic(n, Rng(problem_seed))
    return q, lf_estimate(q)


@lru_cache(maxsize=4)
def _logistic(data, n_features):
    d = load_bundled_subset() if data == "bundled" else load_libsvm(data, n_features)
    d.n_features = n_features
    p = logistic_problem(d)
    return p, lf_estimate(p), logistic_reference_value(p)


def logistic_reference_value(problem):
    """Low objective value from a long L-BFGS solve (uncounted, reference only)."""
    oracle = logistic_oracle(problem)
    res = minimize(
        lambda x: (oracle._value(x), oracle._gradient(x)), np.zeros(problem.n), jac=True,
        method="L-BFGS-B", options={"maxiter": 20_000, "gtol": 1e-12, "ftol": 1e-16},
    )
    return float(res.fun)


def _problem_key(spec):
    if spec.problem == "quadratic":
        return ("quadratic", spec.n, spec.problem_seed, spec.matrix)
    return ("logistic", spec.data, spec.n_features)


def _build(spec):
    """Oracle, L_f and reference value for one spec."""
    if spec.problem == "quadratic":
        q, lf = _quadratic(spec.n, spec.problem_seed, spec.matrix)
        blocks = even_blocks(q.n, spec.blocks) if spec.method == "am" else None
        return quadratic_oracle(q, blocks), lf, 0.0
    p, lf, ref = _logistic(spec.data, spec.n_features)
    return logistic_oracle(p), lf, ref


def _solver(spec, oracle, lf, rng):
    if spec.method == "gd":
        return GradientDescent(lf, step=spec.step / lf)
    if spec.method == "sd":
        return SteepestDescent()
    if spec.method == "racdm":
        beta0 = 1.0 / (spec.L0 * lf) if spec.beta0 == "1/L0" else float(spec.beta0) * lf
        return RACDM(oracle.dim, beta0, rng, warm_start=spec.warm_start)
    return AlternatingMinimization()


def _plain_trace(spec, oracle, solver, x0, f_ref):
    trace = Trace()
    t0 = time.perf_counter()

    def stop(x, units):
        f = oracle.value(x)
        trace.events.append(TraceEvent(
            units, oracle.grad_equiv(), f, f - f_ref, wall_ms=(time.perf_counter() - t0) * 1e3))
        return f - f_ref <= spec.eps

    try:
        solver.run(oracle, x0, stop, spec.outer_cap)
    except CapExceeded:
        trace.terminal_status = "outer_cap"
    return trace


def run_one(spec):
    """Execute one spec; failures are reported in the trace, never raised."""
    try:
        oracle, lf, f_ref = _build(spec)
        rng = Rng(spec.seed)
        x0 = rng.uniforms(oracle.dim)
        solver = _solver(spec, oracle, lf, rng)
        if spec.accelerated:
            cfg = CatalystConfig(
                L0=spec.L0 * lf, Ld=spec.Ld * lf, Lu=spec.Lu * lf,
                alpha=spec.alpha, beta=spec.beta, gamma=spec.gamma, eps=spec.eps,
                inner_unit_cap=spec.inner_cap, outer_cap=spec.outer_cap,
                warm_start_state=spec.warm_start,
            )
            trace = catalyst_run(oracle, x0, cfg, solver, f_ref=f_ref, keep_records=False)
        else:
            trace = _plain_trace(spec, oracle, solver, x0, f_ref)
        trace.f_ref = f_ref
        trace.lf = lf
    except (AdacatError, ArithmeticError, ValueError, OSError) as exc:
        trace = Trace(terminal_status="error", error=f"{type(exc).__name__}: {exc}")
        trace.f_ref = None
    return trace


def _rebase(results):
    """Measure gaps against the best value seen per logistic problem."""
    best = {}
    for spec, trace in results:
        if spec.problem != "logistic" or trace.f_ref is None:
            continue
        key = _problem_key(spec)
        low = min([trace.f_ref] + [e.f_value for e in trace.events])
        best[key] = min(best.get(key, math.inf), low)
    for spec, trace in results:
        key = _problem_key(spec)
        if key in best:
            trace.f_ref = best[key]
            for e in trace.events:
                e.gap = e.f_value - best[key]
    return results


def execute_runs(specs, jobs=1):
    """Run every spec; output order matches input order."""
    if jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            traces = list(pool.map(run_one, specs))
    else:
        traces = [run_one(s) for s in specs]
    return _rebase(list(zip(specs, traces)))


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(v, digits=True):
    if v is None:
        return "NA"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g") if digits else repr(v)
    return str(v)


def emit_csv(results, out_dir):
    """Write ``<run_id>.csv`` per run plus ``manifest.csv``; returns paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    manifest = os.path.join(out_dir, "manifest.csv")
    with open(manifest, "w", newline="") as mf:
        mw = csv.writer(mf, lineterminator="\n")
        mw.writerow(MANIFEST_HEADER)
        for spec, trace in results:
            path = os.path.join(out_dir, f"{spec.run_id}.csv")
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(CSV_HEADER)
                for e in trace.events:
                    w.writerow([_fmt(getattr(e, col)) for col in CSV_HEADER])
            paths.append(path)
            last = trace.events[-1] if trace.events else None
            row = asdict(spec)
            mw.writerow(
                [_fmt(row[k], digits=False) for k in MANIFEST_HEADER[:23]]
                + [trace.terminal_status,
                   _fmt(last.gap if last else None),
                   _fmt(last.grad_equiv if last else None),
                   _fmt(trace.error)]
            )
    return paths + [manifest]


def read_trace_csv(path):
    """Parse an emitted trace CSV back into :class:`TraceEvent` objects."""
    conv = {"outer_k": int, "inner_units": int}
    events = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"unexpected header {reader.fieldnames}")
        for row in reader:
            events.append(TraceEvent(**{
                k: None if v == "NA" else conv.get(k, float)(v) for k, v in row.items()
            }))
    return events


def exit_code(results):
    return 0 if all(t.terminal_status == "converged" for _, t in results) else 2

