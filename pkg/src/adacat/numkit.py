"""Dense numerical primitives: seeded PRNG, random orthogonal matrices,
Cholesky solves and dominant-eigenvalue estimation.

The random stream is PCG64 (O'Neill's permuted congruential generator,
128-bit state, 64-bit output, XSL-RR output function) as implemented by
``numpy.random.PCG64``.  Uniform variates take the top 53 bits of each raw
64-bit word, so a given seed yields the same stream on every platform.
"""

import math

import numpy as np
import scipy.linalg

from .errors import NoConvergence, NonPositiveDefinite

__all__ = [
    "Rng",
    "random_orthogonal",
    "householder_qr",
    "cholesky_solve",
    "power_iteration_lmax",
]

_TWO_NEG_53 = 1.0 / 9007199254740992.0


class Rng:
    """Seeded PCG64 stream producing uniforms, Gaussians and indices."""

    def __init__(self, seed=0):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self._bits = np.random.PCG64(seed)

    def uniform(self):
        """Next variate in [0, 1)."""
        return (int(self._bits.random_raw()) >> 11) * _TWO_NEG_53

    def uniforms(self, size):
        raw = self._bits.random_raw(size)
        return (raw >> np.uint64(11)).astype(np.float64) * _TWO_NEG_53

    def integers(self, high, size):
        """``size`` indices drawn uniformly from ``range(high)``."""
        idx = (self.uniforms(size) * high).astype(np.intp)
        # guards the (measure-zero) u*high rounding up to high
        np.minimum(idx, high - 1, out=idx)
        return idx

    def gaussians(self, size):
        """Standard normals via the Box-Muller transform."""
        m = (size + 1) // 2
        u = self.uniforms(2 * m)
        r = np.sqrt(-2.0 * np.log1p(-u[0::2]))
        theta = 2.0 * math.pi * u[1::2]
        out = np.empty(2 * m)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return out[:size]

    def get_state(self):
        return self._bits.state

    def set_state(self, state):
        self._bits.state = state

    @classmethod
    def from_state(cls, state):
        rng = cls(0)
        rng.set_state(state)
        return rng


def householder_qr(G):
    """QR factorization by Householder reflections.

    Returns ``(Q, R)`` with ``Q`` orthogonal and ``R`` upper triangular,
    ``G = Q @ R``.  No sign normalization is applied.
    """
    R = np.array(G, dtype=float)
    n, m = R.shape
    Q = np.eye(n)
    for k in range(min(n - 1, m)):
        x = R[k:, k]
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            continue
        v = x.copy()
        v[0] += math.copysign(norm_x, x[0])
        v /= np.linalg.norm(v)
        R[k:, k:] -= 2.0 * np.outer(v, v @ R[k:, k:])
        Q[:, k:] -= 2.0 * np.outer(Q[:, k:] @ v, v)
        R[k + 1:, k] = 0.0
    return Q, R


def random_orthogonal(n, rng):
    """Random ``n x n`` orthogonal matrix from the QR of a Gaussian matrix.

    The signs of ``diag(R)`` are absorbed into ``Q`` so the factor is unique
    for a given Gaussian draw.
    """
    if n < 1:
        raise ValueError("n must be positive")
    G = rng.gaussians(n * n).reshape(n, n)
    Q, R = householder_qr(G)
    signs = np.where(np.diag(R) < 0.0, -1.0, 1.0)
    return Q * signs


def cholesky_solve(A, b):
    """Solve ``A x = b`` for symmetric positive definite ``A``."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] != b.shape[0]:
        raise ValueError(f"incompatible shapes {A.shape} and {b.shape}")
    if np.max(np.abs(A - A.T), initial=0.0) > 1e-12:
        raise NonPositiveDefinite("matrix is not symmetric")
    try:
        factor = scipy.linalg.cho_factor(A, lower=True, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise NonPositiveDefinite(str(exc)) from None
    return scipy.linalg.cho_solve(factor, b)


def power_iteration_lmax(matvec, n, tol=1e-8, max_iter=100_000, seed=0):
    """Largest eigenvalue of a symmetric PSD operator by power iteration.

    Iterates Rayleigh quotients from a seeded random start and stops once
    successive quotients agree to ``1e-3 * tol`` relative; the extra factor
    covers the geometric tail of the remaining increments.
    """
    v = Rng(seed).gaussians(n)
    v /= np.linalg.norm(v)
    w = np.asarray(matvec(v), dtype=float)
    q = float(v @ w)
    for _ in range(max_iter):
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 0.0
        v = w / norm_w
        w = np.asarray(matvec(v), dtype=float)
        q_next = float(v @ w)
        if abs(q_next - q) <= 1e-3 * tol * abs(q_next):
            return q_next
        q = q_next
    raise NoConvergence(f"power iteration did not settle in {max_iter} iterations")
