"""Core data types shared by every integrator.

States are plain tuples of floats.  The systems here are tiny (dimension
four at most in the bundled problems), so tuples keep the hot loops free
of array-library overhead; trajectories store their rows in flat
'd'-typed arrays so multi-million-step runs stay cheap in memory.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import NonMonotonicTimes

Vector = tuple[float, ...]
Rhs = Callable[[float, Vector], Sequence[float]]
Jacobian = Callable[[float, Vector], Sequence[Sequence[float]]]


@dataclass(frozen=True)
class OdeProblem:
    """A first-order ODE system y' = rhs(t, y).

    dimension: length of the state vector.
    rhs: callable (t, y) -> sequence of length `dimension`.
    jacobian: optional callable (t, y) -> dimension x dimension matrix of
        partials d rhs_i / d y_j.  When absent a forward finite difference
        is used by the implicit stage.
    exact: optional closed-form solution, callable t -> state vector.
    name: identifier used by the CLI and reports.
    est_component: when set, the adaptive error estimator reads only this
        component of the embedded difference instead of the max-norm over
        all components.  Useful for systems whose components carry wildly
        different scales (see the quasi-periodic problem).
    """

    dimension: int
    rhs: Rhs
    jacobian: Optional[Jacobian] = None
    exact: Optional[Callable[[float], Vector]] = None
    name: str = "ode"
    est_component: Optional[int] = None


@dataclass(frozen=True)
class HistoryWindow:
    """The four most recent accepted (t, y) pairs, oldest first.

    Step sizes are derived from the stored times:
    k_nm1 = times[3]-times[2], k_nm2 = times[2]-times[1],
    k_nm3 = times[1]-times[0].
    """

    times: tuple[float, float, float, float]
    states: tuple[Vector, Vector, Vector, Vector]

    @property
    def k_nm1(self) -> float:
        return self.times[3] - self.times[2]

    @property
    def k_nm2(self) -> float:
        return self.times[2] - self.times[1]

    @property
    def k_nm3(self) -> float:
        return self.times[1] - self.times[0]

    @property
    def t_n(self) -> float:
        return self.times[3]

    @property
    def y_n(self) -> Vector:
        return self.states[3]

    def advance(self, t_new: float, y_new: Sequence[float]) -> "HistoryWindow":
        """Slide the window by one accepted step, evicting the oldest entry."""
        if not t_new > self.times[3]:
            raise NonMonotonicTimes(
                f"new time {t_new!r} does not advance past {self.times[3]!r}"
            )
        return HistoryWindow(
            (self.times[1], self.times[2], self.times[3], t_new),
            (self.states[1], self.states[2], self.states[3], tuple(y_new)),
        )


def window_from_points(points) -> HistoryWindow:
    """Build a HistoryWindow from four (t, y) pairs ordered oldest first."""
    if len(points) != 4:
        raise ValueError("a history window needs exactly 4 points")
    times = tuple(float(t) for t, _ in points)
    states = tuple(tuple(float(c) for c in y) for _, y in points)
    for a, b in zip(times, times[1:]):
        if not b > a:
            raise NonMonotonicTimes(f"times {times} are not strictly increasing")
    if len({len(s) for s in states}) != 1:
        raise ValueError("window states have mixed dimensions")
    return HistoryWindow(times, states)


def window_advance(w: HistoryWindow, t_new: float, y_new: Sequence[float]) -> HistoryWindow:
    return w.advance(t_new, y_new)


@dataclass
class SolverConfig:
    """Settings shared by all solvers.

    tol is an error-per-unit-step tolerance: a step of size k is accepted
    when the embedded estimate satisfies est <= tol * k.  dt0 is both the
    constant step of the fixed-step methods and the bootstrap/initial step
    of the adaptive method.

    doubling_exponent controls how far below the acceptance threshold the
    estimate must fall before the controller doubles the step: doubling
    happens when est < tol * k / 2**doubling_exponent.  The default of 6
    is the setting under which the reference trajectories frozen in the
    test suite were produced.
    """

    tol: float = 1e-3
    dt0: float = 1e-2
    t_begin: float = 0.0
    t_end: float = 1.0
    k_min: Optional[float] = None
    k_max: Optional[float] = None
    doubling_exponent: int = 6
    max_halvings_per_step: int = 30
    newton_tol: float = 1e-10
    newton_max_iter: int = 25

    def __post_init__(self):
        span = self.t_end - self.t_begin
        if not span > 0.0:
            raise ValueError("t_end must exceed t_begin")
        if self.k_min is None:
            self.k_min = 1e-12 * span
        if self.k_max is None:
            self.k_max = span / 10.0
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if not self.dt0 > 0.0:
            raise ValueError("dt0 must be positive")
        if not (self.k_min < self.dt0 <= self.k_max):
            raise ValueError(
                f"need k_min < dt0 <= k_max, got {self.k_min!r} / "
                f"{self.dt0!r} / {self.k_max!r}"
            )

    @property
    def span(self) -> float:
        return self.t_end - self.t_begin


class Trajectory:
    """Append-only record of a solve.

    Row i holds the i-th accepted point: times[i], the state (state(i)),
    est[i] -- the embedded error estimate of the step that produced the
    point (0 for the initial point and for bootstrap steps) -- and ks[i],
    the step size that produced the point (0 for the initial point).
    rejections counts discarded step attempts.

    Rows live in flat double arrays; state(i) and the states property
    materialize tuples on demand.
    """

    __slots__ = ("dimension", "rejections", "_times", "_flat", "_est", "_ks")

    def __init__(self, dimension: int):
        self.dimension = dimension
        self.rejections = 0
        self._times = array("d")
        self._flat = array("d")
        self._est = array("d")
        self._ks = array("d")

    def append(self, t: float, y: Sequence[float], est: float, k: float) -> None:
        if self._times and not t > self._times[-1]:
            raise NonMonotonicTimes(
                f"time {t!r} does not advance past {self._times[-1]!r}"
            )
        self._times.append(t)
        self._flat.extend(y)
        self._est.append(est)
        self._ks.append(k)

    def __len__(self) -> int:
        return len(self._times)

    @property
    def times(self) -> array:
        return self._times

    @property
    def est(self) -> array:
        return self._est

    @property
    def ks(self) -> array:
        return self._ks

    def state(self, i: int) -> Vector:
        d = self.dimension
        if i < 0:
            i += len(self._times)
        return tuple(self._flat[i * d:(i + 1) * d])

    @property
    def states(self) -> list[Vector]:
        return [self.state(i) for i in range(len(self._times))]

    @property
    def steps_taken(self) -> int:
        return max(0, len(self._times) - 1)

    def final_time(self) -> float:
        return self._times[-1]

    def final_state(self) -> Vector:
        return self.state(len(self._times) - 1)

    def final_error(self, exact: Callable[[float], Sequence[float]],
                    component: Optional[int] = None) -> float:
        """Max-norm distance (or one component's distance) from `exact`
        at the final time."""
        ref = exact(self._times[-1])
        y = self.final_state()
        if component is not None:
            return abs(y[component] - ref[component])
        return max(abs(a - b) for a, b in zip(y, ref))


def maxnorm(v: Sequence[float]) -> float:
    return max(abs(c) for c in v)


def all_finite(v: Sequence[float]) -> bool:
    return all(map(math.isfinite, v))
