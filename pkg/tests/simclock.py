"""A controllable clock for driving the watch scheduler in tests."""

from __future__ import annotations

import threading
import time


class SimulatedClock:
    """Drop-in for the monitor's clock: time moves only via advance().

    wait() blocks until the simulated deadline passes or the interrupt
    event is set; it polls the interrupt so a stop request is honoured
    within ~50 ms of real time. Each parked thread registers the deadline
    it is waiting for, and wait_for_waiters() only counts threads parked
    on a deadline *beyond* the current simulated time. A thread still
    sitting in a wait whose deadline has already passed (it has not
    polled awake yet) is catching up, not quiescent, so counting it
    would let a test advance time before the worker processed the last
    tick. Requiring future-dated parks makes check counts exact.
    """

    def __init__(self) -> None:
        self._now = 0.0
        self._cond = threading.Condition()
        self._parked: dict[int, float] = {}

    def now(self) -> float:
        with self._cond:
            return self._now

    def wait(self, seconds: float, interrupt: threading.Event) -> None:
        me = threading.get_ident()
        with self._cond:
            deadline = self._now + seconds
            self._parked[me] = deadline
            try:
                while self._now < deadline and not interrupt.is_set():
                    self._cond.wait(0.05)
            finally:
                del self._parked[me]

    def advance(self, seconds: float) -> None:
        with self._cond:
            self._now += seconds
            self._cond.notify_all()

    @property
    def waiting(self) -> int:
        with self._cond:
            return len(self._parked)

    def wait_for_waiters(self, count: int, timeout: float = 5.0) -> None:
        """Block (in real time) until `count` threads are parked on a
        deadline later than the current simulated time, i.e. every
        worker has digested all past ticks and waits for a future one."""
        due = time.monotonic() + timeout
        while time.monotonic() < due:
            with self._cond:
                settled = sum(1 for d in self._parked.values() if d > self._now)
                if settled == count:
                    return
            time.sleep(0.002)
        with self._cond:
            state = {k: v for k, v in self._parked.items()}
            now = self._now
        raise TimeoutError(
            f"never reached {count} settled waiters (now={now}, parked={state})"
        )
