import numpy as np
import pytest

from adacat.errors import DimensionMismatch, IndexOutOfRange, MissingBlockSolver
from adacat.numkit import Rng
from adacat.oracle import CallCounter, ProxOracle, ms_condition
from adacat.problems import QuadraticOracle, even_blocks, logistic_oracle, quadratic_oracle
from adacat.solvers import steepest_run

from conftest import quad


def test_prox_value_pure_regularizer():
    p = ProxOracle(quad(np.zeros((2, 2))), 2.0, np.zeros(2))
    assert p.value(np.array([1.0, 1.0])) == 2.0


def test_prox_value_one_dim():
    p = ProxOracle(quad([[1.0]]), 1.0, np.array([2.0]))
    assert p.value(np.array([1.0])) == pytest.approx(1.0)
    assert p.value(np.array([2.0])) == pytest.approx(2.0)


def test_prox_value_counts_one_value_call():
    inner = quad([[1.0]])
    ProxOracle(inner, 1.0, np.array([2.0])).value(np.array([1.0]))
    assert inner.counter == CallCounter(values=1)


def test_prox_gradient_examples():
    p = ProxOracle(quad([[1.0]]), 1.0, np.array([2.0]))
    assert p.gradient(np.array([1.0]))[0] == 0.0
    p0 = ProxOracle(quad(np.zeros((2, 2))), 3.0, np.zeros(2))
    assert np.array_equal(p0.gradient(np.array([1.0, -1.0])), [3.0, -3.0])


def test_prox_gradient_at_center(quad50):
    c = Rng(1).gaussians(50)
    f = quadratic_oracle(quad50)
    assert np.allclose(ProxOracle(f, 5.0, c).gradient(c), quad50.A @ c, rtol=0, atol=1e-14)


def test_prox_partial_example():
    p = ProxOracle(quad(np.zeros((2, 2))), 2.0, np.array([0.0, 5.0]))
    assert p.partial(1, np.array([9.0, 7.0])) == 4.0


def test_prox_partial_matches_gradient(quad50):
    rng = Rng(3)
    p = ProxOracle(quadratic_oracle(quad50), 0.7, rng.gaussians(50))
    y = rng.gaussians(50)
    g = p.gradient(y)
    assert max(abs(p.partial(i, y) - g[i]) for i in range(50)) <= 1e-12


def test_partial_out_of_range():
    p = ProxOracle(quad(np.eye(3)), 1.0, np.zeros(3))
    with pytest.raises(IndexOutOfRange):
        p.partial(3, np.zeros(3))
    with pytest.raises(IndexOutOfRange):
        p.partial(-1, np.zeros(3))


def test_dimension_checks():
    f = quad(np.eye(3))
    with pytest.raises(DimensionMismatch):
        ProxOracle(f, 1.0, np.zeros(2))
    with pytest.raises(DimensionMismatch):
        ProxOracle(f, 1.0, np.zeros(3)).value(np.zeros(4))
    with pytest.raises(ValueError):
        ProxOracle(f, 0.0, np.zeros(3))


def test_counter_lifecycle():
    f = quad(np.eye(4))
    assert f.snapshot() == CallCounter()
    x = np.ones(4)
    f.gradient(x)
    for i in range(4):
        f.partial(i, x)
    assert f.grad_equiv() == 2.0
    snap = f.snapshot()
    f.value(x)
    assert snap.values == 0  # snapshots are copies
    f.reset()
    assert f.snapshot() == CallCounter()


def test_repeat_gradient_is_free_but_new_point_is_not():
    f = quad(np.eye(2))
    x = np.array([1.0, 2.0])
    f.gradient(x)
    f.gradient(x.copy())
    assert f.counter.full_gradients == 1
    f.gradient(x + 1.0)
    assert f.counter.full_gradients == 2


def test_block_and_value_weights():
    c = CallCounter(full_gradients=1, values=10, partials=5, block_solves=2)
    assert c.grad_equiv(n=10, p=4) == pytest.approx(1 + 0.5 + 0.5)
    assert c.grad_equiv(n=10, p=4, value_weight=0.1) == pytest.approx(3.0)


def test_missing_block_solver(logit):
    with pytest.raises(MissingBlockSolver):
        logistic_oracle(logit).block_argmin(0, np.zeros(logit.n))


# -- properties on the bundled problems ---------------------------------------

def _oracles(quad50, logit):
    return [("quadratic", lambda: quadratic_oracle(quad50)), ("logistic", lambda: logistic_oracle(logit))]


def _prox_min(f, L, x):
    p = ProxOracle(f, L, x)

    def stop(y, _):
        return np.linalg.norm(p.gradient(y)) <= 1e-10

    y = steepest_run(p, x, stop, 100_000).final_point
    return p.value(y)


@pytest.mark.parametrize("L", [0.1, 1.0, 10.0])
def test_moreau_envelope_below_f(quad50, logit, L):
    for name, make in _oracles(quad50, logit):
        f = make()
        rng = Rng(100)
        for _ in range(20):
            x = rng.gaussians(f.dim)
            assert _prox_min(f, L, x) <= f.value(x) + 1e-9, name


def test_prox_strong_convexity(quad50, logit):
    for name, make in _oracles(quad50, logit):
        f = make()
        rng = Rng(5)
        for L in (0.1, 1.0, 10.0):
            p = ProxOracle(f, L, rng.gaussians(f.dim))
            for _ in range(10):
                y1, y2 = rng.gaussians(f.dim), rng.gaussians(f.dim)
                d = y2 - y1
                lower = p.value(y1) + p.gradient(y1) @ d + 0.5 * L * (d @ d)
                assert p.value(y2) >= lower - 1e-9, name


def test_prox_gradient_finite_differences(quad50, logit):
    h = 1e-6
    for name, make in _oracles(quad50, logit):
        f = make()
        rng = Rng(9)
        p = ProxOracle(f, 0.5, rng.gaussians(f.dim))
        y = rng.gaussians(f.dim)
        g = p.gradient(y)
        fd = np.empty_like(g)
        for i in range(f.dim):
            e = np.zeros(f.dim)
            e[i] = h
            fd[i] = (p.value(y + e) - p.value(y - e)) / (2 * h)
        assert np.linalg.norm(fd - g) <= 1e-4 * np.linalg.norm(g), name


def test_gradient_partial_agreement(quad50, logit):
    for name, make in _oracles(quad50, logit):
        f = make()
        x = Rng(2).gaussians(f.dim)
        g = f.gradient(x)
        assert max(abs(f.partial(i, x) - g[i]) for i in range(f.dim)) <= 1e-10, name


@pytest.mark.parametrize("reg", [0.0, 2.5])
def test_block_argmin_optimality(quad50, reg):
    f = QuadraticOracle(quad50, even_blocks(50, 4))
    p = ProxOracle(f, 1.0, Rng(4).gaussians(50)) if reg else f
    x = Rng(6).gaussians(50)
    for b, idx in enumerate(f.blocks):
        x[idx] = p.block_argmin(b, x)
        g = p.gradient(x)
        assert np.max(np.abs(g[idx])) <= 1e-8


def test_ms_condition_examples():
    p = ProxOracle(quad([[1.0]]), 1.0, np.array([2.0]))
    assert ms_condition(p, np.array([1.0])) == (True, 0.0, 0.5)
    holds, lhs, rhs = ms_condition(p, np.array([1.1]))
    assert holds and lhs == pytest.approx(0.2) and rhs == pytest.approx(0.45)
    holds, lhs, rhs = ms_condition(p, np.array([1.5]))
    assert not holds and lhs == pytest.approx(1.0) and rhs == pytest.approx(0.25)
    holds, lhs, rhs = ms_condition(p, np.array([2.0]))
    assert not holds and lhs == pytest.approx(2.0) and rhs == 0.0


def test_ms_condition_is_charged():
    f = quad(np.eye(2))
    ms_condition(ProxOracle(f, 1.0, np.zeros(2)), np.ones(2))
    assert f.counter.full_gradients == 1
