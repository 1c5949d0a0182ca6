"""Newton iteration for the implicit Euler stage equation.

Solves y = y_tilde + k * f(t_next, y) for y.  The linear systems are tiny
(dimension <= 4 for every bundled problem), so a dense hand-rolled solve
with partial pivoting is used; no array library is involved.

Dimensions 1 and 2 get straight-line fast paths because the adaptive
benchmarks spend millions of attempts there.  Those paths perform the same
floating-point operations in the same order as the generic code, so results
are bit-identical either way.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

from .core import OdeProblem, SolverConfig, Vector, all_finite, maxnorm
from .errors import NewtonDiverged, NonPositiveStep, SingularLinearSystem

_SQRT_EPS = math.sqrt(2.0 ** -52)
_PIVOT_FLOOR = 1e-300


class NewtonOutcome(NamedTuple):
    y: Vector
    iterations: int
    residual_norm: float


def _fd_jacobian(p: OdeProblem, t: float, y: list[float], f0: Sequence[float]):
    """Forward finite-difference Jacobian columns, increment sqrt(eps)*(1+|y_i|)."""
    d = p.dimension
    cols = []
    for i in range(d):
        h = _SQRT_EPS * (1.0 + abs(y[i]))
        y[i] += h
        fi = p.rhs(t, tuple(y))
        y[i] -= h
        cols.append([(fi[r] - f0[r]) / h for r in range(d)])
    # column-major -> row-major
    return [[cols[c][r] for c in range(d)] for r in range(d)]


def _solve_dense(m: list[list[float]], rhs: list[float]) -> list[float]:
    """Gaussian elimination with partial pivoting, in place."""
    d = len(rhs)
    for col in range(d):
        piv = max(range(col, d), key=lambda r: abs(m[r][col]))
        if abs(m[piv][col]) < _PIVOT_FLOOR:
            raise SingularLinearSystem("Newton matrix is numerically singular")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1.0 / m[col][col]
        for r in range(col + 1, d):
            factor = m[r][col] * inv
            if factor != 0.0:
                for c in range(col + 1, d):
                    m[r][c] -= factor * m[col][c]
                rhs[r] -= factor * rhs[col]
    for r in range(d - 1, -1, -1):
        acc = rhs[r]
        row = m[r]
        for c in range(r + 1, d):
            acc -= row[c] * rhs[c]
        rhs[r] = acc / row[r]
    return rhs


def _stage_dim1(rhs, jac, t_next: float, k_n: float, yt0: float, y0: float,
                ntol: float, max_iter: int) -> NewtonOutcome:
    isfinite = math.isfinite
    iterations = 0
    while True:
        f = rhs(t_next, (y0,))
        g0 = y0 - yt0 - k_n * f[0]
        res = abs(g0)
        if not isfinite(res):
            raise NewtonDiverged(f"non-finite residual at t={t_next!r}")
        if res <= ntol * (1.0 + abs(y0)):
            return NewtonOutcome((y0,), iterations, res)
        if iterations >= max_iter:
            raise NewtonDiverged(
                f"no convergence in {max_iter} iterations at t={t_next!r} "
                f"(residual {res!r})"
            )
        m00 = 1.0 - k_n * jac(t_next, (y0,))[0][0]
        if abs(m00) < _PIVOT_FLOOR:
            raise SingularLinearSystem("Newton matrix is numerically singular")
        y0 += (-g0) / m00
        iterations += 1
        if not isfinite(y0):
            raise NewtonDiverged(f"non-finite iterate at t={t_next!r}")


def _stage_dim2(rhs, jac, t_next: float, k_n: float, yt0: float, yt1: float,
                y0: float, y1: float, ntol: float,
                max_iter: int) -> NewtonOutcome:
    isfinite = math.isfinite
    iterations = 0
    while True:
        f = rhs(t_next, (y0, y1))
        g0 = y0 - yt0 - k_n * f[0]
        g1 = y1 - yt1 - k_n * f[1]
        a0 = abs(g0)
        a1 = abs(g1)
        res = a1 if a1 > a0 else a0
        if not isfinite(res):
            raise NewtonDiverged(f"non-finite residual at t={t_next!r}")
        b0 = abs(y0)
        b1 = abs(y1)
        ynorm = b1 if b1 > b0 else b0
        if res <= ntol * (1.0 + ynorm):
            return NewtonOutcome((y0, y1), iterations, res)
        if iterations >= max_iter:
            raise NewtonDiverged(
                f"no convergence in {max_iter} iterations at t={t_next!r} "
                f"(residual {res!r})"
            )
        j = jac(t_next, (y0, y1))
        jr = j[0]
        m00 = 1.0 - k_n * jr[0]
        m01 = 0.0 - k_n * jr[1]
        jr = j[1]
        m10 = 0.0 - k_n * jr[0]
        m11 = 1.0 - k_n * jr[1]
        r0 = -g0
        r1 = -g1
        # partial pivoting on column 0, then one elimination step
        if abs(m10) > abs(m00):
            m00, m10 = m10, m00
            m01, m11 = m11, m01
            r0, r1 = r1, r0
        if abs(m00) < _PIVOT_FLOOR:
            raise SingularLinearSystem("Newton matrix is numerically singular")
        factor = m10 * (1.0 / m00)
        if factor != 0.0:
            m11 -= factor * m01
            r1 -= factor * r0
        if abs(m11) < _PIVOT_FLOOR:
            raise SingularLinearSystem("Newton matrix is numerically singular")
        d1 = r1 / m11
        d0 = (r0 - m01 * d1) / m00
        y0 += d0
        y1 += d1
        iterations += 1
        if not (isfinite(y0) and isfinite(y1)):
            raise NewtonDiverged(f"non-finite iterate at t={t_next!r}")


def implicit_euler_stage(p: OdeProblem, t_next: float, k_n: float,
                         y_tilde: Sequence[float], y_guess: Sequence[float],
                         cfg: SolverConfig) -> NewtonOutcome:
    """Solve the stage equation y - y_tilde - k_n * f(t_next, y) = 0.

    The iteration starts from y_guess (callers pass the latest accepted
    state) and stops when the residual max-norm falls below
    newton_tol * (1 + maxnorm(y)).  Each update solves
    (I - k_n * J) delta = -g with J the problem Jacobian (analytic when
    provided, else forward finite differences).
    """
    if k_n <= 0.0:
        raise NonPositiveStep(f"implicit stage needs a positive step, got {k_n!r}")
    d = p.dimension
    jac = p.jacobian
    if jac is not None:
        if d == 2:
            return _stage_dim2(p.rhs, jac, t_next, k_n, y_tilde[0], y_tilde[1],
                               y_guess[0], y_guess[1], cfg.newton_tol,
                               cfg.newton_max_iter)
        if d == 1:
            return _stage_dim1(p.rhs, jac, t_next, k_n, y_tilde[0], y_guess[0],
                               cfg.newton_tol, cfg.newton_max_iter)
    rhs = p.rhs
    ntol = cfg.newton_tol
    max_iter = cfg.newton_max_iter
    y = list(y_guess)
    iterations = 0
    while True:
        f = rhs(t_next, tuple(y))
        g = [y[i] - y_tilde[i] - k_n * f[i] for i in range(d)]
        res = maxnorm(g)
        if not math.isfinite(res):
            raise NewtonDiverged(f"non-finite residual at t={t_next!r}")
        if res <= ntol * (1.0 + maxnorm(y)):
            return NewtonOutcome(tuple(y), iterations, res)
        if iterations >= max_iter:
            raise NewtonDiverged(
                f"no convergence in {max_iter} iterations at t={t_next!r} "
                f"(residual {res!r})"
            )
        jm = jac(t_next, tuple(y)) if jac is not None \
            else _fd_jacobian(p, t_next, y, f)
        m = [[(1.0 if r == c else 0.0) - k_n * jm[r][c] for c in range(d)]
             for r in range(d)]
        delta = _solve_dense(m, [-gi for gi in g])
        for i in range(d):
            y[i] += delta[i]
        iterations += 1
        if not all_finite(y):
            raise NewtonDiverged(f"non-finite iterate at t={t_next!r}")
