"""Benchmark problems: a degenerate random quadratic and binary logistic
regression over LIBSVM-format data."""

import io
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy.special import expit

from .errors import DimensionMismatch, MappedLabelError, ParseError
from .numkit import cholesky_solve, power_iteration_lmax, random_orthogonal
from .oracle import Line, Oracle

__all__ = [
    "QuadraticProblem",
    "QuadraticOracle",
    "gen_quadratic",
    "quadratic_oracle",
    "save_quadratic",
    "load_quadratic",
    "Dataset",
    "parse_libsvm",
    "serialize_libsvm",
    "load_libsvm",
    "load_bundled_subset",
    "LogisticProblem",
    "LogisticOracle",
    "logistic_problem",
    "logistic_oracle",
    "lf_estimate",
    "even_blocks",
    "A1A_FEATURES",
    "BLOCK_RIDGE",
]

A1A_FEATURES = 123
BLOCK_RIDGE = 1e-12


# ---------------------------------------------------------------------------
# quadratic  f(x) = 1/2 x^T A x,  A = S^T D S
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadraticProblem:
    A: np.ndarray
    S: np.ndarray = None
    D: np.ndarray = None

    f_ref = 0.0

    @property
    def n(self):
        return self.A.shape[0]


def gen_quadratic(n, rng):
    """Random PSD matrix with spectrum U(0, 1) and one eigenvalue forced to 0."""
    if n < 2:
        raise ValueError("n must be at least 2")
    D = rng.uniforms(n)
    D[int(rng.integers(n, 1)[0])] = 0.0
    S = random_orthogonal(n, rng)
    A = S.T @ (D[:, None] * S)
    A = 0.5 * (A + A.T)
    return QuadraticProblem(A=A, S=S, D=D)


def even_blocks(n, p):
    """Partition ``range(n)`` into ``p`` contiguous blocks of near-equal size."""
    if not 1 <= p <= n:
        raise ValueError(f"need 1 <= p <= n, got p={p}, n={n}")
    return [np.arange(lo, hi) for lo, hi in zip(
        [n * k // p for k in range(p)], [n * (k + 1) // p for k in range(p)])]


class QuadraticOracle(Oracle):
    quadratic = True

    def __init__(self, problem, blocks=None):
        super().__init__(problem.n, blocks)
        if blocks is not None:
            flat = np.sort(np.concatenate(self.blocks))
            if not np.array_equal(flat, np.arange(self.dim)):
                raise ValueError("blocks must partition the coordinates")
        self.A = problem.A
        self.f_ref = 0.0

    def _value(self, x):
        return 0.5 * float(x @ (self.A @ x))

    def _gradient(self, x):
        return self.A @ x

    def _partial(self, i, x):
        return float(self.A[i] @ x)

    def _block_argmin(self, idx, x, reg, center):
        A = self.A
        rest = x.copy()
        rest[idx] = 0.0
        rhs = -(A[idx] @ rest)
        H = A[np.ix_(idx, idx)] + (reg + BLOCK_RIDGE) * np.eye(len(idx))
        if reg:
            rhs = rhs + reg * center[idx]
        return cholesky_solve(0.5 * (H + H.T), rhs)

    def _line(self, x, d, grad):
        g = self.A @ x if grad is None else grad
        f0 = 0.5 * float(x @ g)
        slope = float(d @ g)
        curv = float(d @ (self.A @ d))

        def phi(t):
            return f0 + t * slope + 0.5 * t * t * curv

        def dphi(t):
            return slope + t * curv

        return Line(phi, dphi, curv)


def quadratic_oracle(problem, blocks=None):
    return QuadraticOracle(problem, blocks)


def save_quadratic(problem, path):
    """Write ``A`` as text: a header line holding ``n``, then ``n`` rows."""
    with open(path, "w", newline="\n") as fh:
        fh.write(f"{problem.n}\n")
        for row in problem.A:
            fh.write(" ".join(format(v, ".17g") for v in row) + "\n")


def load_quadratic(path):
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 1:
            raise ParseError(1, "expected a single dimension on the header line")
        n = int(header[0])
        A = np.loadtxt(fh, ndmin=2)
    if A.shape != (n, n):
        raise DimensionMismatch(f"header says {n}x{n}, body is {A.shape[0]}x{A.shape[1]}")
    return QuadraticProblem(A=A)


# ---------------------------------------------------------------------------
# LIBSVM data
# ---------------------------------------------------------------------------

@dataclass
class Dataset:
    labels: list = field(default_factory=list)
    rows: list = field(default_factory=list)  # one {index: value} dict per row, 0-based
    n_features: int = 0

    def __len__(self):
        return len(self.labels)


def parse_libsvm(text):
    """Parse LIBSVM text (``<label> <index>:<value> ...``, 1-based indices).

    Blank lines and lines starting with ``#`` are skipped.
    """
    if isinstance(text, str):
        text = io.StringIO(text)
    data = Dataset()
    max_index = -1
    for lineno, line in enumerate(text, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        try:
            label = float(tokens[0])
        except ValueError:
            raise ParseError(lineno, f"bad label {tokens[0]!r}") from None
        feats = {}
        prev = 0
        for tok in tokens[1:]:
            idx_s, colon, val_s = tok.partition(":")
            if not colon:
                raise ParseError(lineno, f"missing colon in {tok!r}")
            try:
                idx = int(idx_s)
                val = float(val_s)
            except ValueError:
                raise ParseError(lineno, f"non-numeric token {tok!r}") from None
            if idx < 1:
                raise ParseError(lineno, f"index {idx} is not 1-based")
            if idx <= prev:
                raise ParseError(lineno, f"index {idx} not ascending after {prev}")
            if not math.isfinite(val):
                raise ParseError(lineno, f"non-finite value {tok!r}")
            feats[idx - 1] = val
            prev = idx
        max_index = max(max_index, prev - 1)
        data.labels.append(label)
        data.rows.append(feats)
    data.n_features = max_index + 1
    return data


def serialize_libsvm(data):
    out = []
    for label, feats in zip(data.labels, data.rows):
        lab = format(label, "+g") if label in (1.0, -1.0) else format(label, ".17g")
        pairs = " ".join(f"{i + 1}:{v:.17g}" for i, v in sorted(feats.items()))
        out.append(f"{lab} {pairs}".rstrip())
    return "\n".join(out) + "\n"


def load_libsvm(path, n_features=None):
    with open(path) as fh:
        data = parse_libsvm(fh)
    if n_features is not None:
        if data.n_features > n_features:
            raise ParseError(0, f"feature index {data.n_features} exceeds n_features={n_features}")
        data.n_features = n_features
    return data


def load_bundled_subset():
    """The packaged 200-row LIBSVM file (123 features, a1a layout)."""
    text = resources.files("adacat.data").joinpath("a1a_like_subset.txt").read_text()
    data = parse_libsvm(text)
    data.n_features = A1A_FEATURES
    return data


# ---------------------------------------------------------------------------
# logistic regression  f(x) = 1/m sum log(1 + exp(-y_j z_j^T x))
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogisticProblem:
    Z: np.ndarray  # dense m x n design
    labels: np.ndarray

    @property
    def m(self):
        return self.Z.shape[0]

    @property
    def n(self):
        return self.Z.shape[1]


def logistic_problem(data):
    labels = np.asarray(data.labels, dtype=float)
    bad = ~np.isin(labels, (-1.0, 1.0))
    if bad.any():
        raise MappedLabelError(
            f"labels must be -1/+1, found {sorted(set(labels[bad].tolist()))[:5]}")
    Z = np.zeros((len(data), data.n_features))
    for j, feats in enumerate(data.rows):
        for i, v in feats.items():
            if i >= data.n_features:
                raise DimensionMismatch(f"feature {i} >= n_features={data.n_features}")
            Z[j, i] = v
    return LogisticProblem(Z=Z, labels=labels)


def _softplus_neg(t):
    """log(1 + exp(-t)) without overflow."""
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = np.log1p(np.exp(-t[pos]))
    neg = ~pos
    out[neg] = -t[neg] + np.log1p(np.exp(t[neg]))
    return out


class LogisticOracle(Oracle):
    def __init__(self, problem):
        super().__init__(problem.n)
        self.Z = problem.Z
        self.y = problem.labels
        self.m = problem.m
        self._col_rows = [np.flatnonzero(problem.Z[:, i]) for i in range(problem.n)]
        self.f_ref = None

    def _loss(self, margins):
        return math.fsum(_softplus_neg(margins)) / self.m

    def _value(self, x):
        return self._loss(self.y * (self.Z @ x))

    def _gradient(self, x):
        w = expit(-self.y * (self.Z @ x)) * self.y
        return -(self.Z.T @ w) / self.m

    def _partial(self, i, x):
        rows = self._col_rows[i]
        if rows.size == 0:
            return 0.0
        y = self.y[rows]
        s = expit(-y * (self.Z[rows] @ x))
        return -float(np.sum(s * y * self.Z[rows, i])) / self.m

    def _line(self, x, d, grad):
        u = self.y * (self.Z @ x)
        w = self.y * (self.Z @ d)
        counter = self.counter
        m = self.m

        def phi(t):
            counter.values += 1
            return self._loss(u + t * w)

        def dphi(t):
            counter.values += 1
            return -float(np.sum(w * expit(-(u + t * w)))) / m

        return Line(phi, dphi)


def logistic_oracle(data_or_problem):
    if isinstance(data_or_problem, Dataset):
        data_or_problem = logistic_problem(data_or_problem)
    return LogisticOracle(data_or_problem)


def lf_estimate(problem, tol=1e-8):
    """Lipschitz constant of the gradient.

    Quadratic: ``lambda_max(A)``.  Logistic: ``lambda_max(Z^T Z) / (4m)``.
    """
    if isinstance(problem, QuadraticProblem):
        A = problem.A
        return power_iteration_lmax(lambda v: A @ v, problem.n, tol=tol)
    if isinstance(problem, LogisticProblem):
        Z = problem.Z
        scale = 4.0 * problem.m
        return power_iteration_lmax(lambda v: Z.T @ (Z @ v) / scale, problem.n, tol=tol)
    raise TypeError(f"no smoothness estimate for {type(problem).__name__}")
