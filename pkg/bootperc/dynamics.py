# MIT License

# Copyright (c) 2024 bootperc developers

# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

"""Majority bootstrap percolation dynamics.

Activation is monotone: an active vertex never deactivates, so every run
reaches a fixed point within ``vertex_count`` rounds. Rings and r-wheels
are run by :func:`fixpoints`, a compiled frontier search. :func:`settle` is
the array kernel for any additive neighbor count; the block oracles use it
on open segments.
"""

from __future__ import annotations

from typing import Any, Callable, ClassVar, Iterable, Iterator, Optional, Sequence, Tuple, TYPE_CHECKING
from bootperc.exceptions import ConfigurationMismatchError, ParameterError
from numba import njit

import logging
import numpy as np

if TYPE_CHECKING:
    from bootperc.topology import Rule, Topology

__all__ = (
    'Configuration',
    'Schedule',
    'FixpointResult',
    'settle',
    'fixpoints',
    'step_synchronous',
    'run_to_fixpoint',
    'final_state_of',
)

_log = logging.getLogger(__name__)


class Configuration:
    """An assignment of active (1) or passive (0) to every vertex.

    Configurations are immutable and stored bit-packed, eight vertices per
    byte. :attr:`bits` unpacks into a fresh read-only array.

    Parameters
    ----------
    bits: Iterable[:class:`int`]
        The state of each vertex, indexed by vertex id. A string of ``0``
        and ``1`` characters is also accepted.
    """
    __slots__ = ('_packed', '_length')

    def __init__(self, bits: Iterable[Any]) -> None:
        if isinstance(bits, str):
            bits = [int(c) for c in bits if not c.isspace()]
        arr = np.asarray(bits)
        if arr.ndim != 1:
            raise ParameterError(f'configuration must be one dimensional, got shape {arr.shape}')
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ParameterError('configuration entries must be 0 or 1')
        self._packed: bytes = np.packbits(arr.astype(bool)).tobytes()
        self._length: int = arr.size

    @classmethod
    def zeros(cls, count: int) -> Configuration:
        return cls(np.zeros(count, dtype=bool))

    @classmethod
    def ones(cls, count: int) -> Configuration:
        return cls(np.ones(count, dtype=bool))

    @classmethod
    def unpack(cls, data: bytes, count: int) -> Configuration:
        """Restores a configuration stored with :meth:`pack`.

        Raises
        ------
        ParameterError
            ``data`` holds fewer than ``count`` bits.
        """
        if len(data) * 8 < count:
            raise ParameterError(f'{len(data)} bytes cannot hold {count} vertices')
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), count=count)
        return cls(bits)

    @property
    def bits(self) -> np.ndarray:
        """The state array, unpacked. The returned array is read-only."""
        arr = np.unpackbits(np.frombuffer(self._packed, dtype=np.uint8), count=self._length).astype(bool)
        arr.flags.writeable = False
        return arr

    def pack(self) -> bytes:
        """Returns the ``ceil(len/8)`` bytes the configuration is stored in."""
        return self._packed

    def active_count(self) -> int:
        # padding bits are always zero
        return int(np.unpackbits(np.frombuffer(self._packed, dtype=np.uint8)).sum())

    def __len__(self) -> int:
        return self._length

    def __getitem__(self, vertex: int) -> int:
        if not -self._length <= vertex < self._length:
            raise IndexError(f'vertex {vertex} out of range for a configuration of length {self._length}')
        vertex %= self._length
        return int(self._packed[vertex >> 3] >> (7 - (vertex & 7))) & 1

    def __iter__(self) -> Iterator[int]:
        return (int(b) for b in self.bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return self._length == other._length and self._packed == other._packed

    def __hash__(self) -> int:
        return hash((self._length, self._packed))

    def __le__(self, other: Configuration) -> bool:
        # pointwise order; A <= B means every vertex active in A is active in B
        if not isinstance(other, Configuration):
            return NotImplemented
        if len(self) != len(other):
            raise ConfigurationMismatchError(f'cannot compare configurations of length {len(self)} and {len(other)}')
        mine = np.frombuffer(self._packed, dtype=np.uint8)
        theirs = np.frombuffer(other._packed, dtype=np.uint8)
        return not np.any(mine & ~theirs)

    def __str__(self) -> str:
        return ''.join('1' if b else '0' for b in self.bits)

    def __repr__(self) -> str:
        return f'Configuration({str(self)!r})'


class Schedule:
    """The order in which vertices update.

    :attr:`SYNCHRONOUS` updates every vertex simultaneously from the previous
    round. A sequential schedule visits vertices one at a time in ``order``,
    each update seeing the effect of the earlier ones; one pass over
    ``order`` is a sweep. ``order`` must contain every vertex.
    """
    __slots__ = ('order',)

    SYNCHRONOUS: ClassVar[Schedule]

    def __init__(self, order: Optional[Sequence[int]] = None) -> None:
        self.order = None if order is None else tuple(int(v) for v in order)

    @classmethod
    def sequential(cls, order: Sequence[int]) -> Schedule:
        return cls(order)

    @property
    def is_synchronous(self) -> bool:
        return self.order is None

    def __repr__(self) -> str:
        if self.order is None:
            return 'Schedule.SYNCHRONOUS'
        return f'Schedule.sequential({list(self.order)!r})'


Schedule.SYNCHRONOUS = Schedule()


class FixpointResult:
    """The outcome of running the dynamics to their fixed point.

    Attributes
    ----------
    final: :class:`Configuration`
        The fixed point.
    rounds: :class:`int`
        Number of rounds (synchronous) or sweeps (sequential) in which at
        least one vertex activated.
    active_count: :class:`int`
        Number of active vertices in the fixed point.
    percolated: :class:`bool`
        Whether every vertex is active.
    hub_active: Optional[:class:`bool`]
        State of the hub, None for rings.
    """
    __slots__ = (
        'final',
        'rounds',
        'active_count',
        'percolated',
        'hub_active',
    )

    def __init__(self, final: Configuration, rounds: int, hub: Optional[int]) -> None:
        self.final = final
        self.rounds = rounds
        self.active_count = final.active_count()
        self.percolated = self.active_count == len(final)
        self.hub_active = None if hub is None else bool(final[hub])

    def __repr__(self) -> str:
        return (f'FixpointResult(rounds={self.rounds}, active_count={self.active_count}, '
                f'percolated={self.percolated}, hub_active={self.hub_active})')


def settle(
    states: np.ndarray,
    thresholds: np.ndarray,
    count: Callable[[np.ndarray], np.ndarray],
) -> Tuple[np.ndarray, np.ndarray]:
    """Runs a batch of configurations synchronously to their fixed points.

    Parameters
    ----------
    states: :class:`numpy.ndarray`
        Boolean array of shape ``(rows, cells)``, one initial configuration
        per row.
    thresholds: :class:`numpy.ndarray`
        Activation threshold of each cell, shape ``(cells,)``.
    count:
        Returns the active neighbor counts of a ``(rows, cells)`` batch.
        It must be additive over disjoint sets of active cells; the kernel
        relies on this to update counters from the newly activated cells
        only.

    Returns
    -------
    Tuple[:class:`numpy.ndarray`, :class:`numpy.ndarray`]
        The fixed points, and per row the number of rounds in which at
        least one cell activated.
    """
    states = np.array(states, dtype=bool, copy=True)
    rounds = np.zeros(states.shape[0], dtype=np.int64)
    if states.size == 0:
        return states, rounds

    counts = count(states)
    live = np.arange(states.shape[0])
    while live.size:
        newly = ~states[live] & (counts[live] >= thresholds)
        changed = newly.any(axis=1)
        if not changed.any():
            break
        live = live[changed]
        newly = newly[changed]
        rounds[live] += 1
        states[live] |= newly
        counts[live] += count(newly)

    return states, rounds


@njit(nogil=True)
def _push(state, counts, thresholds, level, queue, tail, w, depth):
    counts[w] += 1
    if not state[w] and counts[w] >= thresholds[w]:
        state[w] = True
        level[w] = depth
        queue[tail] = w
        tail += 1
    return tail


@njit(nogil=True)
def _close_rows(states, thresholds, n, r, hub):
    # frontier search per row; hub < 0 for rings. FIFO order keeps the
    # activation level of every vertex equal to its synchronous round.
    rows, width = states.shape
    counts = np.zeros(width, dtype=np.int64)
    level = np.zeros(width, dtype=np.int64)
    queue = np.empty(width, dtype=np.int64)
    rounds = np.zeros(rows, dtype=np.int64)

    for row in range(rows):
        state = states[row]
        window = 0
        for k in range(-r, r + 1):
            if state[(k + n) % n]:
                window += 1
        for i in range(n):
            counts[i] = window - (1 if state[i] else 0)
            if state[(i - r + n) % n]:
                window -= 1
            if state[(i + r + 1) % n]:
                window += 1
        if hub >= 0:
            active = 0
            for i in range(n):
                if state[i]:
                    active += 1
                if state[hub]:
                    counts[i] += 1
            counts[hub] = active

        tail = 0
        for v in range(width):
            if not state[v] and counts[v] >= thresholds[v]:
                state[v] = True
                level[v] = 1
                queue[tail] = v
                tail += 1

        head = 0
        deepest = 0
        while head < tail:
            v = queue[head]
            head += 1
            depth = level[v]
            if depth > deepest:
                deepest = depth
            if v == hub:
                for w in range(n):
                    tail = _push(state, counts, thresholds, level, queue, tail, w, depth + 1)
                continue
            for k in range(1, r + 1):
                tail = _push(state, counts, thresholds, level, queue, tail, (v + k) % n, depth + 1)
                tail = _push(state, counts, thresholds, level, queue, tail, (v - k + n) % n, depth + 1)
            if hub >= 0:
                tail = _push(state, counts, thresholds, level, queue, tail, hub, depth + 1)
        rounds[row] = deepest

    return rounds


def fixpoints(topology: Topology, states: np.ndarray, rule: Rule) -> Tuple[np.ndarray, np.ndarray]:
    """Runs a batch of configurations of ``topology`` to their fixed points.

    This is the compiled counterpart of :func:`settle` for rings and
    r-wheels. Each row is searched from its frontier of newly activated
    vertices, so a row costs time proportional to ``n`` plus ``r`` times
    the number of activations, and rows never wait for each other. The
    compiled loop releases the GIL.

    Parameters
    ----------
    topology: :class:`Topology`
        The graph.
    states: :class:`numpy.ndarray`
        Boolean array of shape ``(rows, vertex_count)``.
    rule: :class:`Rule`
        The activation rule.

    Returns
    -------
    Tuple[:class:`numpy.ndarray`, :class:`numpy.ndarray`]
        The fixed points, and per row the number of synchronous rounds in
        which at least one vertex activated.

    Raises
    ------
    ConfigurationMismatchError
        The rows do not have one entry per vertex.
    """
    states = np.array(states, dtype=np.bool_, order='C', copy=True)
    if states.ndim != 2 or states.shape[1] != topology.vertex_count:
        raise ConfigurationMismatchError(
            f'expected a batch of shape (rows, {topology.vertex_count}) for {topology!r}, got {states.shape}'
        )
    hub = -1 if topology.hub is None else topology.hub
    thresholds = topology.thresholds(rule).astype(np.int64)
    rounds = _close_rows(states, thresholds, topology.n, topology.r, hub)
    return states, rounds


def _as_configuration(topology: Topology, config: Any) -> Configuration:
    if not isinstance(config, Configuration):
        config = Configuration(config)
    if len(config) != topology.vertex_count:
        raise ConfigurationMismatchError(
            f'configuration has {len(config)} entries but {topology!r} has {topology.vertex_count} vertices'
        )
    return config


def step_synchronous(topology: Topology, config: Configuration, rule: Rule) -> Configuration:
    """Performs a single synchronous round.

    Raises
    ------
    ConfigurationMismatchError
        The configuration length differs from the vertex count.
    """
    config = _as_configuration(topology, config)
    states = config.bits[np.newaxis, :]
    counts = topology.count_active_neighbors(states)[0]
    return Configuration(config.bits | (counts >= topology.thresholds(rule)))


def _run_sequential(topology: Topology, config: Configuration, rule: Rule, order: Tuple[int, ...]) -> Tuple[np.ndarray, int]:
    vertex_count = topology.vertex_count
    for v in order:
        if not 0 <= v < vertex_count:
            raise ParameterError(f'schedule order contains invalid vertex {v}')
    if len(set(order)) != vertex_count:
        raise ParameterError('schedule order must visit every vertex in each sweep')

    state = config.bits.tolist()
    counts = topology.count_active_neighbors(config.bits[np.newaxis, :])[0].tolist()
    thresholds = topology.thresholds(rule).tolist()
    adjacency = [topology.neighbors(v) for v in range(vertex_count)]

    sweeps = 0
    while True:
        changed = False
        for v in order:
            if not state[v] and counts[v] >= thresholds[v]:
                state[v] = True
                changed = True
                for u in adjacency[v]:
                    counts[u] += 1
        if not changed:
            break
        sweeps += 1

    return np.array(state, dtype=bool), sweeps


def run_to_fixpoint(
    topology: Topology,
    config: Configuration,
    rule: Rule,
    schedule: Schedule = Schedule.SYNCHRONOUS,
) -> FixpointResult:
    """Runs the dynamics until no vertex changes.

    The synchronous and sequential schedules reach the same fixed point;
    only the reported number of rounds differs.

    Parameters
    ----------
    topology: :class:`Topology`
        The graph.
    config: :class:`Configuration`
        The initial configuration, one entry per vertex.
    rule: :class:`Rule`
        The activation rule.
    schedule: :class:`Schedule`
        The update schedule. Defaults to :attr:`Schedule.SYNCHRONOUS`.

    Raises
    ------
    ConfigurationMismatchError
        The configuration length differs from the vertex count.
    ParameterError
        A sequential order skips a vertex or names an unknown one.
    """
    config = _as_configuration(topology, config)

    if schedule.is_synchronous:
        final, rounds = fixpoints(topology, config.bits[np.newaxis, :], rule)
        final_bits, round_count = final[0], int(rounds[0])
    else:
        final_bits, round_count = _run_sequential(topology, config, rule, schedule.order)  # type: ignore

    result = FixpointResult(Configuration(final_bits), round_count, topology.hub)
    _log.debug('%r under %s rule: %d -> %d active after %d rounds', topology, rule.value,
               config.active_count(), result.active_count, round_count)
    return result


def final_state_of(topology: Topology, config: Configuration, rule: Rule, vertex: int) -> int:
    """Returns the fixed point state of a single vertex."""
    topology.degree(vertex)  # validates the id
    return run_to_fixpoint(topology, config, rule).final[vertex]
