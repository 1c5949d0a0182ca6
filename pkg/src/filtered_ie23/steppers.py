"""Constant-step integrators.

rk3_step / bootstrap supply the four starting points every filtered
method needs.  solve_ie_pre_2 and solve_ie_pre_post_3 are the fixed-step
second- and third-order filtered implicit Euler methods (the adaptive
driver's embedded pair, run at a constant step).  solve_rk4_reference is
the high-accuracy oracle used where no closed-form solution exists.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .core import (HistoryWindow, OdeProblem, SolverConfig, Trajectory,
                   Vector, all_finite)
from .errors import NonFiniteState, NonPositiveStep
from .filters import alpha_coeff, beta_coeff, error_estimate
from .newton import implicit_euler_stage


class Method(enum.Enum):
    RK3 = "rk3"
    IE_PRE_2 = "ie-pre-2"
    IE_PRE_POST_3 = "ie-pre-post-3"
    RK4_REF = "rk4-ref"


@dataclass(frozen=True)
class ConstantStepRun:
    trajectory: Trajectory
    dt: float
    method: Method


def rk3_step(p: OdeProblem, t: float, y: Vector, h: float) -> Vector:
    """One explicit third-order step (Kutta's tableau)."""
    if h <= 0.0:
        raise NonPositiveStep(f"rk3_step needs h > 0, got {h!r}")
    rhs = p.rhs
    s1 = rhs(t, y)
    s2 = rhs(t + 0.5 * h, tuple(y[i] + 0.5 * h * s1[i] for i in range(p.dimension)))
    s3 = rhs(t + h, tuple(y[i] - h * s1[i] + 2.0 * h * s2[i] for i in range(p.dimension)))
    h6 = h / 6.0
    return tuple(
        y[i] + h6 * (s1[i] + 4.0 * s2[i] + s3[i]) for i in range(p.dimension)
    )


def bootstrap(p: OdeProblem, t0: float, y0: Sequence[float], dt: float) -> HistoryWindow:
    """Three rk3 steps of size dt; returns the resulting 4-point window."""
    y = tuple(float(c) for c in y0)
    times = [t0]
    states = [y]
    for i in range(3):
        y = rk3_step(p, times[-1], y, dt)
        times.append(t0 + (i + 1) * dt)
        states.append(y)
    return HistoryWindow(tuple(times), tuple(states))


def _step_times(cfg: SolverConfig, dt: float) -> list[float]:
    """Times after t_begin: interior points on the uniform grid, then t_end
    (the final step is clamped when dt does not divide the span)."""
    t0, t_end, span = cfg.t_begin, cfg.t_end, cfg.span
    edge = t_end - 1e-14 * span
    times = []
    i = 1
    while True:
        t = t0 + i * dt
        if t >= edge:
            break
        times.append(t)
        i += 1
    times.append(t_end)
    return times


def _solve_ie_filtered(p: OdeProblem, cfg: SolverConfig, y0: Sequence[float],
                       third_order: bool) -> ConstantStepRun:
    dt = cfg.dt0
    d = p.dimension
    times = _step_times(cfg, dt)
    n_start = 3 if third_order else 2
    if len(times) <= n_start:
        raise ValueError("too few steps: the startup leaves no room for a filtered step")

    traj = Trajectory(d)
    y = tuple(float(c) for c in y0)
    traj.append(cfg.t_begin, y, 0.0, 0.0)

    # startup occupies the first grid points.  The third-order method seeds
    # its four-point history with explicit third-order steps (startup error
    # is higher order).  The second-order method seeds its three-point
    # history with plain implicit Euler: the O(dt^2) startup contribution
    # then carries the same order as the method itself, keeping the whole
    # run inside the implicit Euler family.
    history = [y]
    t_prev = cfg.t_begin
    for t in times[:n_start]:
        if third_order:
            y = rk3_step(p, t_prev, y, dt)
        else:
            y = implicit_euler_stage(p, t, dt, y, y, cfg).y
        traj.append(t, y, 0.0, dt)
        history.append(y)
        t_prev = t

    c23 = 5.0 / 11.0
    for idx in range(n_start, len(times)):
        t_next = times[idx]
        k = t_next - t_prev
        y_nm2, y_nm1, y_n = history[-3], history[-2], history[-1]
        final_clamped = abs(k - dt) > 1e-9 * dt
        if not final_clamped:
            # uniform grid: pre-filter with gain 1, post-filter with 5/11
            y_tilde = tuple(
                y_n[i] - 0.5 * (y_n[i] - 2.0 * y_nm1[i] + y_nm2[i]) for i in range(d)
            )
            out = implicit_euler_stage(p, t_next, dt, y_tilde, y_n, cfg)
            y_second = out.y
            if third_order:
                y_next = tuple(
                    y_second[i] - c23 * (
                        y_second[i] - 3.0 * y_n[i] + 3.0 * y_nm1[i] - y_nm2[i]
                    )
                    for i in range(d)
                )
                est = error_estimate(y_second, y_next, p.est_component)
            else:
                y_next, est = y_second, 0.0
        else:
            # the clamped final step keeps the method's variable-step form
            alpha = alpha_coeff(k, dt, dt)
            kappa_prev = tuple(
                y_n[i] - 2.0 * y_nm1[i] + y_nm2[i] for i in range(d)
            )
            y_tilde = tuple(y_n[i] - 0.5 * alpha * kappa_prev[i] for i in range(d))
            out = implicit_euler_stage(p, t_next, k, y_tilde, y_n, cfg)
            y_second = out.y
            if third_order:
                coeffs = beta_coeff(k, dt, dt, dt)
                s = k + dt
                kappa_cur = tuple(
                    (2.0 * dt / s) * y_second[i] - 2.0 * y_n[i] + (2.0 * k / s) * y_nm1[i]
                    for i in range(d)
                )
                y_next = tuple(
                    y_second[i] - coeffs.beta * (kappa_cur[i] - kappa_prev[i])
                    for i in range(d)
                )
                est = error_estimate(y_second, y_next, p.est_component)
            else:
                y_next, est = y_second, 0.0
        traj.append(t_next, y_next, est, k)
        history = [y_nm1, y_n, y_next]
        t_prev = t_next

    return ConstantStepRun(traj, dt, Method.IE_PRE_POST_3 if third_order else Method.IE_PRE_2)


def solve_ie_pre_2(p: OdeProblem, cfg: SolverConfig, y0: Sequence[float]) -> ConstantStepRun:
    """Fixed-step second-order method: pre-filter then implicit Euler."""
    return _solve_ie_filtered(p, cfg, y0, third_order=False)


def solve_ie_pre_post_3(p: OdeProblem, cfg: SolverConfig, y0: Sequence[float]) -> ConstantStepRun:
    """Fixed-step third-order method: pre-filter, implicit Euler, post-filter."""
    return _solve_ie_filtered(p, cfg, y0, third_order=True)


def solve_rk4_reference(p: OdeProblem, cfg: SolverConfig, y0: Sequence[float]) -> ConstantStepRun:
    """Classical fourth-order Runge-Kutta at constant step cfg.dt0.

    Serves as the reference oracle; callers are responsible for choosing
    dt small enough (checked by rerunning at dt/2 and comparing).
    """
    dt = cfg.dt0
    d = p.dimension
    rhs = p.rhs
    times = _step_times(cfg, dt)
    traj = Trajectory(d)
    y = tuple(float(c) for c in y0)
    traj.append(cfg.t_begin, y, 0.0, 0.0)
    t_prev = cfg.t_begin
    half = 0.5 * dt
    sixth = dt / 6.0
    rng = range(d)
    for t_next in times:
        h = t_next - t_prev
        if abs(h - dt) > 1e-9 * dt:
            half, sixth = 0.5 * h, h / 6.0
        else:
            h = dt
        s1 = rhs(t_prev, y)
        s2 = rhs(t_prev + half, tuple(y[i] + half * s1[i] for i in rng))
        s3 = rhs(t_prev + half, tuple(y[i] + half * s2[i] for i in rng))
        s4 = rhs(t_next, tuple(y[i] + h * s3[i] for i in rng))
        y = tuple(
            y[i] + sixth * (s1[i] + 2.0 * (s2[i] + s3[i]) + s4[i]) for i in rng
        )
        if not all_finite(y):
            raise NonFiniteState(f"reference solution blew up near t={t_next!r}")
        traj.append(t_next, y, 0.0, h)
        t_prev = t_next
    return ConstantStepRun(traj, dt, Method.RK4_REF)
