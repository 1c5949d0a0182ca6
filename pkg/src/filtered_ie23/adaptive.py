"""Variable-step driver: filtered implicit Euler with an embedded 2(3)
estimate and a halving/doubling controller.

Each accepted step advances the third-order (post-filtered) value.  A
candidate step is rejected and halved while tol*k < est; it is accepted
otherwise, and when est < tol*k / 2**doubling_exponent the next candidate
step is doubled.  Newton failures and degenerate post-filter coefficients
are handled exactly like est-too-large rejections.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (HistoryWindow, OdeProblem, SolverConfig, Trajectory,
                   Vector, all_finite)
from .errors import (DegenerateBeta, MinStepReached, NewtonDiverged,
                     NonFiniteState, SingularLinearSystem)
from .filters import (alpha_coeff, beta_coeff, error_estimate, post_filter,
                      pre_filter)
from .newton import implicit_euler_stage
from .steppers import rk3_step


class Verdict(enum.Enum):
    ACCEPT = "accept"
    HALVE = "halve"
    ACCEPT_AND_DOUBLE = "accept-and-double"


@dataclass(frozen=True)
class StepAttempt:
    """Outcome of evaluating one candidate step from a given history."""

    k_n: float
    y_second: Optional[Vector]
    y_third: Optional[Vector]
    est: float
    verdict: Verdict


@dataclass
class AdaptiveRunStats:
    accepted: int = 0
    rejected: int = 0
    doublings: int = 0
    min_k_used: float = math.inf
    max_k_used: float = 0.0
    newton_failures: int = 0


def attempt_step(p: OdeProblem, w: HistoryWindow, k_n: float,
                 cfg: SolverConfig) -> StepAttempt:
    """Evaluate one candidate step without committing to it.

    Solver-level failures (Newton divergence, degenerate post-filter)
    yield verdict HALVE with est = inf rather than raising, so the
    controller has a single rejection path.
    """
    alpha = alpha_coeff(k_n, w.k_nm1, w.k_nm2)
    y_tilde = pre_filter(w, alpha)
    t_next = w.t_n + k_n
    try:
        outcome = implicit_euler_stage(p, t_next, k_n, y_tilde, w.y_n, cfg)
        coeffs = beta_coeff(k_n, w.k_nm1, w.k_nm2, w.k_nm3)
    except (NewtonDiverged, SingularLinearSystem, DegenerateBeta):
        return StepAttempt(k_n, None, None, math.inf, Verdict.HALVE)
    y_second = outcome.y
    y_third = post_filter(y_second, w, k_n, coeffs.beta)
    est = error_estimate(y_second, y_third, p.est_component)
    if not math.isfinite(est) or cfg.tol * k_n < est:
        verdict = Verdict.HALVE
    elif est < cfg.tol * k_n / 2.0 ** cfg.doubling_exponent:
        verdict = Verdict.ACCEPT_AND_DOUBLE
    else:
        verdict = Verdict.ACCEPT
    return StepAttempt(k_n, y_second, y_third, est, verdict)


def solve_filtered_ie23(p: OdeProblem, cfg: SolverConfig,
                        y0: Sequence[float]) -> tuple[Trajectory, AdaptiveRunStats]:
    """Integrate p from (t_begin, y0) to t_end adaptively.

    Startup takes three third-order explicit steps of size dt0 (recorded
    with est = 0); filtering and step control begin once four history
    points exist.  The candidate step is clamped to [k_min, k_max] and to
    the remaining span, halved on rejection (bounded by
    max_halvings_per_step and k_min, else MinStepReached), and doubled
    after steps whose estimate is far below tolerance, provided the
    doubled step still fits under k_max.  Consecutive accepted steps
    therefore always differ by a factor of 1/2, 1, or 2, except for the
    final step, which is shortened to land exactly on t_end.

    Attempts that produce a non-finite state or estimate are rejected and
    retried at half the step; a non-finite bootstrap state raises
    NonFiniteState outright.
    """
    d = p.dimension
    comp = p.est_component
    rhs = p.rhs
    tol = cfg.tol
    dt0 = cfg.dt0
    k_min = cfg.k_min
    k_max = cfg.k_max
    newton_tol = cfg.newton_tol
    max_iter = cfg.newton_max_iter
    max_halvings = cfg.max_halvings_per_step
    double_div = 2.0 ** cfg.doubling_exponent
    t_end = cfg.t_end
    span = cfg.span
    t_edge = t_end - 1e-14 * span

    if 3.0 * dt0 >= span:
        raise ValueError("dt0 too large: the three bootstrap steps must fit in the span")

    traj = Trajectory(d)
    stats = AdaptiveRunStats()

    # bootstrap: three explicit third-order steps at dt0
    t = cfg.t_begin
    y = tuple(float(c) for c in y0)
    traj.append(t, y, 0.0, 0.0)
    ts_w = [t]
    ys_w = [y]
    for _ in range(3):
        y = rk3_step(p, t, y, dt0)
        if not all_finite(y):
            raise NonFiniteState(f"bootstrap produced a non-finite state near t={t!r}")
        t = t + dt0
        traj.append(t, y, 0.0, dt0)
        ts_w.append(t)
        ys_w.append(y)

    k = dt0
    while ts_w[3] < t_edge:
        t_n = ts_w[3]
        y_nm2, y_nm1, y_n = ys_w[1], ys_w[2], ys_w[3]
        k_nm1 = ts_w[3] - ts_w[2]
        k_nm2 = ts_w[2] - ts_w[1]
        k_nm3 = ts_w[1] - ts_w[0]

        if k < k_min:
            k = k_min
        if k > k_max:
            k = k_max
        remaining = t_end - t_n
        if k > remaining:
            k = remaining

        # trailing curvature: shared by the pre-filter and the estimator,
        # independent of the candidate k (same expressions as filters.curvature)
        s_prev = k_nm1 + k_nm2
        wn_prev = 2.0 * k_nm2 / s_prev
        wp_prev = 2.0 * k_nm1 / s_prev
        kappa_prev = tuple(
            wn_prev * y_n[i] - 2.0 * y_nm1[i] + wp_prev * y_nm2[i]
            for i in range(d)
        )

        halvings = 0
        while True:
            alpha = k * k / (k_nm1 * k_nm2)
            half_a = 0.5 * alpha
            y_tilde = tuple(y_n[i] - half_a * kappa_prev[i] for i in range(d))
            t_next = t_n + k

            failed = False
            est = math.inf
            y_third = None
            try:
                outcome = implicit_euler_stage(p, t_next, k, y_tilde, y_n, cfg)
            except (NewtonDiverged, SingularLinearSystem):
                stats.newton_failures += 1
                failed = True
            if not failed:
                y_second = outcome.y
                ksum = k + k_nm1
                num = k * k * ksum * (2.0 * k + 2.0 * k_nm1 + k_nm2)
                den = 2.0 * k_nm1 * (
                    k * ksum * (3.0 * k + 2.0 * k_nm1)
                    + k_nm2 * (4.0 * k * k + 2.0 * k * k_nm1 - k_nm1 * k_nm1)
                    - 2.0 * k_nm2 * k_nm2 * ksum
                    + 3.0 * k_nm3 * (k - k_nm2) * ksum
                )
                scale = max(k, k_nm1, k_nm2, k_nm3) ** 4
                if abs(den) < 1e-12 * max(scale, abs(num)):
                    failed = True      # degenerate post-filter at this k
                else:
                    beta = num / den
                    s_cur = k + k_nm1
                    wn_cur = 2.0 * k_nm1 / s_cur
                    wp_cur = 2.0 * k / s_cur
                    y_third = tuple(
                        y_second[i] - beta * (
                            (wn_cur * y_second[i] - 2.0 * y_n[i] + wp_cur * y_nm1[i])
                            - kappa_prev[i]
                        )
                        for i in range(d)
                    )
                    if comp is None:
                        est = max(abs(y_third[i] - y_second[i]) for i in range(d))
                    else:
                        est = abs(y_third[comp] - y_second[comp])

            if (failed or not math.isfinite(est) or tol * k < est
                    or not all_finite(y_third)):
                stats.rejected += 1
                halvings += 1
                k = 0.5 * k
                if halvings > max_halvings or k < k_min:
                    raise MinStepReached(
                        f"step fell to {k!r} at t={t_n!r} without an acceptable attempt"
                    )
                continue

            traj.append(t_next, y_third, est, k)
            ts_w = [ts_w[1], ts_w[2], ts_w[3], t_next]
            ys_w = [ys_w[1], ys_w[2], ys_w[3], y_third]
            stats.accepted += 1
            if k < stats.min_k_used:
                stats.min_k_used = k
            if k > stats.max_k_used:
                stats.max_k_used = k
            if est < tol * k / double_div and 2.0 * k <= k_max:
                k = 2.0 * k
                stats.doublings += 1
            break

    traj.rejections = stats.rejected
    return traj, stats
