"""
This module defines functionality common to every walk engine.

The engines differ only in how they weigh the 2d neighbors of the current
site, so stepping, bookkeeping and the run loop live in the abstract base
class and subclasses supply `step_weights`.
"""
from abc import ABC, abstractmethod
from random_memory_walk.algorithm.lattice import Edge
from random_memory_walk.algorithm.memory_law import SplitMemoryLaw
from random_memory_walk.algorithm.regeneration.detection\
 import RegenerationTracker
from random_memory_walk.algorithm.regeneration.subwalk import attach_subwalk
from random_memory_walk.algorithm.serialization.run_summary import RunSummary
from random_memory_walk.algorithm.walk.state_data import StepLog, WalkState
from random_memory_walk.utilities.progress import ProgressReporter
from random_memory_walk.utilities.random_stream import UniformStream


def window_contains(state, edge, k_n):
    """
    Whether `edge` belongs to R_{n, k_n}, the edges crossed in steps
    n - k_n + 1, ..., n. R_{n,0} is empty; k_n > n means the full range.
    """
    if k_n <= 0:
        return False
    last = state.last_traversal.get(edge)
    return last is not None and last >= state.n - k_n + 1


class AbstractWalkEngine(ABC):
    """
    Abstract class for engines stepping a nearest-neighbor walk on Z^d
    whose weights depend on the current site and the crossed edges.
    """

    def __init__(self, config):
        self._config = config
        self._law = config.memory
        self._delta = config.delta
        self._dimension = config.dimension
        self._tracker = None
        self._split_floor = None
        self._split_q = None

    @property
    def config(self):
        return self._config

    @abstractmethod
    def step_weights(self, state, k_n):
        """Weights of the 2d neighbors of state.position, in neighbor order."""

    def new_state(self):
        return WalkState(self._dimension)

    @property
    def effective_law(self):
        """Law of the memories the regeneration structure is built on."""
        if self._split_q is not None:
            return SplitMemoryLaw(self._law, self._split_q)
        return self._law

    def _enable_split(self, floor):
        """
        Ellipticity split with floor c: every step first flips a coin of
        success q = 2d c. On success the step is uniform and its effective
        memory is 0; otherwise the walk jumps with the residual law
        (p(y) - c) / (1 - q) under memory K_n. The trajectory law is
        unchanged and the effective memories are i.i.d. with law
        SplitMemoryLaw(law, q), which puts mass at 0 even when K does not.
        """
        self._split_floor = floor
        self._split_q = 2 * self._dimension * floor

    def step(self, state, stream, log=None):
        """
        Draws K_n, picks a neighbor with the engine's weights and moves.
        Consumes two uniforms of `stream`, three under the split.
        """
        if self._split_q is not None:
            return self._split_step(state, stream, log)
        k_n = self._law.sample_k(stream)
        weights = self.step_weights(state, k_n)
        index = self._select(weights, stream.uniform())
        self._advance(state, index, k_n, log)
        return state

    def _split_step(self, state, stream, log):
        k_n = self._law.sample_k(stream)
        coin = stream.uniform()
        u = stream.uniform()
        sides = 2 * self._dimension
        if coin < self._split_q:
            self._advance(state, min(int(u * sides), sides - 1), 0, log)
            return state
        weights = self.step_weights(state, k_n)
        total = sum(weights)
        residual = [max(w / total - self._split_floor, 0.0) for w in weights]
        self._advance(state, self._select(residual, u), k_n, log)
        return state

    def run(self, stream=None, replica=0, verbose=False):
        """
        Runs `horizon` steps from the origin with empty edge memory.

        Returns
        -------
        tuple
            (final WalkState, StepLog or None, RunSummary)
        """
        config = self._config
        config.check_resources()
        if stream is None:
            stream = UniformStream(config.seed)
        state = self.new_state()
        log = StepLog(config.horizon) if config.needs_log else None
        self._tracker = RegenerationTracker() if config.regen else None
        checkpoints = set(config.checkpoints)
        stride = config.record_stride
        self._record(state, checkpoints, stride)
        reporter = ProgressReporter(config.horizon, label='steps') \
            if verbose else None
        for _ in range(config.horizon):
            self.step(state, stream, log)
            self._record(state, checkpoints, stride)
            if reporter is not None:
                reporter.advance()
        if reporter is not None:
            reporter.close()
        summary = self._summarize(state, log, replica)
        return state, log, summary

    def _select(self, weights, u):
        """Single uniform against the cumulative weights, fixed order."""
        threshold = u * sum(weights)
        cumulative = 0.0
        last = len(weights) - 1
        for index, weight in enumerate(weights):
            cumulative += weight
            if threshold < cumulative:
                return index
        return last

    def _advance(self, state, index, k_n, log):
        if self._tracker is not None:
            self._tracker.observe(state.n, k_n, state.position)
        axis = index // 2
        sign = 1 if index % 2 else -1
        x = state.position
        moved = list(x)
        moved[axis] += sign
        y = tuple(moved)
        edge = Edge(x, axis) if sign > 0 else Edge(y, axis)
        state.n += 1
        state.last_traversal[edge] = state.n
        state.position = y
        if state.edge_trail is not None:
            state.edge_trail.append(edge)
        if not any(y):
            state.return_times.append(state.n)
        if log is not None:
            log.append(k_n, axis, sign)

    def _record(self, state, checkpoints, stride):
        if state.n in checkpoints:
            state.checkpoint_positions[state.n] = state.position
        if stride and state.n % stride == 0:
            state.history.append(state.position)

    def _summarize(self, state, log, replica):
        config = self._config
        k_sequence = log.k_sequence.copy() if log is not None \
            and config.regen else None
        summary = RunSummary(replica, state.position, state.return_times,
                             checkpoints=state.checkpoint_positions,
                             range_size=state.range_size,
                             k_sequence=k_sequence,
                             history=state.history if config.record_stride
                             else None)
        if self._tracker is None:
            return summary
        # K_0..K_{H-1} were drawn, so detection runs at horizon H - 1.
        report = self._tracker.report(max(config.horizon - 1, 0),
                                      law=self.effective_law,
                                      tolerance=config.confirmation_tolerance)
        _, report, returns = attach_subwalk(self._tracker.positions, report,
                                            dimension=self._dimension)
        return summary.with_report(report, subwalk_returns=returns)

    @property
    def regeneration_tracker(self):
        """Tracker of the last run, None unless the config asks for regen."""
        return self._tracker
