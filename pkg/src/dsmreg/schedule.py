"""Decreasing regularization schedules a(t) = c0 / (c1 + t)**b."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoSolutionError

__all__ = ["Schedule", "ScheduleConditionReport"]

_INVERSE_REL_TOL = 1e-12


@dataclass(frozen=True)
class ScheduleConditionReport:
    """Sampled decay-rate ratios of a schedule on a geometric time grid.

    ``shrink_rate`` holds |a'|/a and ``shrink_rate_vs_square`` holds
    |a'|/a**2; the booleans record whether each sequence is eventually
    monotonically decreasing toward zero.
    """

    times: np.ndarray
    shrink_rate: np.ndarray
    shrink_rate_vs_square: np.ndarray
    shrink_rate_decreasing: bool
    shrink_rate_vs_square_decreasing: bool


def _eventually_decreasing(values: np.ndarray) -> bool:
    diffs = np.diff(values)
    rising = np.where(diffs >= 0)[0]
    start = 0 if rising.size == 0 else int(rising[-1]) + 1
    return start < diffs.size and values[-1] < values[start]


@dataclass(frozen=True)
class Schedule:
    """Power-law regularization schedule with an optional fast initial leg.

    The tail is a(t) = c0 / (c1 + t)**b with c0, c1 > 0 and 0 < b < 1, which
    guarantees |a'|/a -> 0 and |a'|/a**2 -> 0.  ``initial_override``, a pair
    (t_switch, fast_decay_exponent), replaces the schedule on [0, t_switch]
    by a steeper power law spliced continuously at t_switch, so the initial
    leg may decay as fast as desired without affecting the tail conditions.
    """

    c0: float = 1.0
    c1: float = 1.0
    b: float = 0.5
    initial_override: tuple[float, float] | None = None

    def __post_init__(self):
        if not (self.c0 > 0 and self.c1 > 0):
            raise ValueError("c0 and c1 must be positive")
        if not 0 < self.b < 1:
            raise ValueError(f"decay exponent b must lie in (0, 1), got {self.b}")
        if self.initial_override is not None:
            t_switch, fast = self.initial_override
            if t_switch < 0:
                raise ValueError("t_switch must be nonnegative")
            if not fast > 0:
                raise ValueError("fast_decay_exponent must be positive")
            object.__setattr__(self, "initial_override", (float(t_switch), float(fast)))

    @classmethod
    def from_spec(cls, spec: str) -> "Schedule":
        """Parse a schedule from a string like ``"c0=1,c1=1,b=0.5"``."""
        params = {}
        for item in spec.split(","):
            item = item.strip()
            if not item:
                continue
            if "=" not in item:
                raise ValueError(f"bad schedule entry {item!r}; expected key=value")
            key, value = item.split("=", 1)
            key = key.strip()
            if key not in ("c0", "c1", "b"):
                raise ValueError(f"unknown schedule parameter {key!r}")
            params[key] = float(value)
        return cls(**params)

    def _tail(self, t):
        a = self.c0 / (self.c1 + t) ** self.b
        a_dot = -self.b * self.c0 / (self.c1 + t) ** (self.b + 1.0)
        return a, a_dot

    def eval(self, t):
        """Return (a(t), a'(t)); a' is negative for every t >= 0.

        Accepts scalars or arrays; arrays are evaluated elementwise.
        """
        arr = np.asarray(t, dtype=float)
        if np.any(arr < 0):
            raise ValueError("time must be nonnegative")
        a, a_dot = self._tail(arr)
        if self.initial_override is not None:
            t_switch, fast = self.initial_override
            a_at_switch = self.c0 / (self.c1 + t_switch) ** self.b
            head = a_at_switch * ((self.c1 + t_switch) / (self.c1 + arr)) ** fast
            head_dot = -fast * head / (self.c1 + arr)
            early = arr < t_switch
            a = np.where(early, head, a)
            a_dot = np.where(early, head_dot, a_dot)
        if arr.ndim == 0:
            return float(a), float(a_dot)
        return a, a_dot

    def value(self, t):
        """Return a(t) only."""
        return self.eval(t)[0]

    def inverse_time(self, a_target: float) -> float:
        """Return the time t at which a(t) equals ``a_target``.

        Uses the closed form of the power law; with an initial override the
        head segment is inverted by bisection.  The result satisfies
        |a(t) - a_target| <= 1e-12 * a_target.
        """
        a_target = float(a_target)
        if not a_target > 0:
            raise ValueError("a_target must be positive")
        a0 = self.value(0.0)
        if a_target > a0 * (1.0 + 1e-15):
            raise NoSolutionError(
                f"a_target={a_target} exceeds a(0)={a0}; the schedule never attains it"
            )
        if self.initial_override is None:
            t = (self.c0 / a_target) ** (1.0 / self.b) - self.c1
            return max(t, 0.0)
        t_switch, _ = self.initial_override
        if a_target <= self._tail(t_switch)[0]:
            t = (self.c0 / a_target) ** (1.0 / self.b) - self.c1
            return max(t, t_switch)
        lo, hi = 0.0, t_switch
        for _ in range(400):
            mid = 0.5 * (lo + hi)
            a_mid = self.value(mid)
            if abs(a_mid - a_target) <= _INVERSE_REL_TOL * a_target:
                return mid
            if a_mid > a_target:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def check_conditions(self, horizon: float, samples: int) -> ScheduleConditionReport:
        """Sample the decay ratios |a'|/a and |a'|/a**2 up to ``horizon``.

        Both ratios must tend to zero for the stopping theory to apply; the
        report records the sampled sequences on a geometric grid together
        with eventual-monotone-decrease flags.
        """
        if not horizon > 0:
            raise ValueError("horizon must be positive")
        if samples < 2:
            raise ValueError("need at least two samples")
        t_lo = min(1.0, horizon / 100.0)
        times = np.geomspace(t_lo, horizon, samples)
        a, a_dot = self.eval(times)
        ratio = np.abs(a_dot) / a
        ratio_sq = np.abs(a_dot) / a**2
        return ScheduleConditionReport(
            times=times,
            shrink_rate=ratio,
            shrink_rate_vs_square=ratio_sq,
            shrink_rate_decreasing=_eventually_decreasing(ratio),
            shrink_rate_vs_square_decreasing=_eventually_decreasing(ratio_sq),
        )
