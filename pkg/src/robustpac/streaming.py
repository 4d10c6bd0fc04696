"""Bounded-state streaming learners used by the online emulation."""

from __future__ import annotations

import numpy as np

from .core import LinearHypothesis

__all__ = ["StreamingLearner", "OnlinePerceptron"]


class StreamingLearner:
    """init / observe / finalize over a stream, with a fixed-size state.

    ``state_units`` is the size of the working storage in (p+1)-word units.
    ``get_state``/``set_state`` move that storage between machines.
    """

    state_units: int

    def init(self) -> None:
        raise NotImplementedError

    def observe(self, x: np.ndarray, y: int) -> None:
        raise NotImplementedError

    def finalize(self) -> LinearHypothesis:
        raise NotImplementedError

    def get_state(self) -> np.ndarray:
        raise NotImplementedError

    def set_state(self, state: np.ndarray) -> None:
        raise NotImplementedError


class OnlinePerceptron(StreamingLearner):
    """Classic mistake-driven perceptron; the state is (w, b), p + 1 words."""

    def __init__(self, p: int, lr: float = 1.0):
        self.p = p
        self.lr = lr
        self.state_units = p + 1
        self.init()

    def init(self) -> None:
        self._state = np.zeros(self.p + 1)

    def observe(self, x, y) -> None:
        w, b = self._state[:-1], self._state[-1]
        if y * (x @ w + b) <= 0:
            self._state[:-1] += self.lr * y * x
            self._state[-1] += self.lr * y

    def finalize(self) -> LinearHypothesis:
        return LinearHypothesis(self._state[:-1].copy(), self._state[-1])

    def get_state(self) -> np.ndarray:
        return self._state.copy()

    def set_state(self, state) -> None:
        state = np.asarray(state, dtype=float)
        if state.shape != (self.p + 1,):
            raise ValueError("perceptron state must have p + 1 entries")
        self._state = state.copy()
