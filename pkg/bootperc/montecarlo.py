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

"""Monte Carlo estimators with reproducible seeding.

Trial ``i`` of a plan draws one uniform number per vertex from a generator
seeded with ``derive_trial_seed(master_seed, i)`` and activates the vertices
whose draw is below ``p``. Outcomes therefore depend only on the plan:
chunking and the number of worker threads never change a result, and
plans that differ only in ``p`` are coupled (common random numbers).
"""

from __future__ import annotations

from typing import Any, Callable, Iterator, List, NamedTuple, Optional, Sequence, Tuple
from concurrent.futures import ThreadPoolExecutor
from bootperc import configs, fields, validate
from bootperc.configs import SchemaConfig
from bootperc.dynamics import fixpoints
from bootperc.exceptions import BootpercException, BracketError, GridCellError, ParameterError
from bootperc.oracles import ThreeStateParams, classify_blocks, wall_distances
from bootperc.schema import Schema
from bootperc.topology import Family, Rule, Topology, TopologySpec, build_topology
from numba import njit
from scipy import stats

import enum
import functools
import logging
import math
import time
import numpy as np

__all__ = (
    'Target',
    'TrialPlan',
    'EstimateRecord',
    'Proportion',
    'SampleMean',
    'derive_trial_seed',
    'trial_outcomes',
    'run_estimate',
    'wilson_interval',
    'scan_grid',
    'bisect_threshold',
    'simulate_hitting_time',
    'simulate_three_state',
    'estimate_wall_event',
)

_log = logging.getLogger(__name__)

# upper bound on rows * cells simulated together in one work unit
_CELL_BUDGET = 1 << 23

MAX_SEED = 2**64 - 1


class Target(enum.Enum):
    """The event scored by each trial."""

    PERCOLATION = 'pW'
    """Every vertex ends up active."""

    RING_MAJORITY = 'pR'
    """Strictly more than half of the ring ends up active (rings only)."""

    VERTEX0_FINAL = 'EX0'
    """Vertex 0 ends up active (rings only)."""

    BLOCK_SPREADING = 'muS'
    """A random block of ``block_length`` cells is spreading."""


class TrialPlan(Schema):
    """A fully specified Monte Carlo experiment.

    Example::

        plan = TrialPlan({
            'topology': {'family': 'rwheel', 'n': 10000, 'r': 8},
            'p': 0.3,
            'target': 'pW',
            'trials': 10000,
            'master_seed': 42,
        })
    """
    topology = fields.Object(TopologySpec)
    rule = fields.Choice(Rule, default=Rule.STRICT)
    p = fields.Float(validators=[validate.Interval(0, 1)])
    target = fields.Choice(Target, default=Target.PERCOLATION)
    trials = fields.Integer(validators=[validate.Range(1, None)])
    master_seed = fields.Integer(validators=[validate.Range(0, MAX_SEED)])
    confidence = fields.Float(default=0.95, validators=[validate.Interval(0, 1, closed=False)])
    block_length = fields.Integer(none=True, default=None, validators=[validate.Range(1, None)])

    class Config(SchemaConfig):
        frozen = True

    @validate.field('target')
    def _check_target(self, value: Target) -> None:
        topology = self.get_value_for('topology', None)
        if value in (Target.RING_MAJORITY, Target.VERTEX0_FINAL):
            if topology is not None and topology.family is not Family.RING:
                raise ValueError(f'target {value.value!r} requires a ring topology')
        if value is Target.BLOCK_SPREADING and self.get_value_for('block_length', None) is None:
            raise ValueError(f'target {value.value!r} requires block_length')


class EstimateRecord(Schema):
    """The result of :func:`run_estimate`.

    Every field except ``elapsed`` is a pure function of the plan.
    """
    plan = fields.Object(TrialPlan)
    successes = fields.Integer(validators=[validate.Range(0, None)])
    estimate = fields.Float(validators=[validate.Interval(0, 1)])
    ci_low = fields.Float(validators=[validate.Interval(0, 1)])
    ci_high = fields.Float(validators=[validate.Interval(0, 1)])
    elapsed = fields.Float(default=0.0)

    class Config(SchemaConfig):
        frozen = True

    @validate.field('ci_high')
    def _check_interval(self, value: float) -> None:
        low, estimate = self.get_value_for('ci_low', None), self.get_value_for('estimate', None)
        if low is not None and estimate is not None and not low <= estimate <= value:
            raise ValueError(f'interval [{low}, {value}] does not contain the estimate {estimate}')

    @property
    def half_width(self) -> float:
        return (self.ci_high - self.ci_low) / 2


class Proportion(NamedTuple):
    """An estimated probability with its Wilson interval."""
    successes: int
    trials: int
    estimate: float
    ci_low: float
    ci_high: float

    @property
    def half_width(self) -> float:
        return (self.ci_high - self.ci_low) / 2


class SampleMean(NamedTuple):
    """A sample mean with its standard error."""
    mean: float
    stderr: float
    runs: int


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    """Derives the 64-bit seed of one trial.

    The seed is the first word of the :class:`numpy.random.SeedSequence`
    child ``trial_index`` of ``master_seed``.
    """
    seq = np.random.SeedSequence(master_seed, spawn_key=(trial_index,))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def _uniforms(master_seed: int, start: int, stop: int, width: int) -> np.ndarray:
    out = np.empty((stop - start, width), dtype=np.float64)
    for row, index in enumerate(range(start, stop)):
        out[row] = np.random.default_rng(derive_trial_seed(master_seed, index)).random(width)
    return out


def _chunks(trials: int, width: int) -> Iterator[Tuple[int, int]]:
    rows = max(1, min(configs.config.trial_chunk_size, _CELL_BUDGET // max(width, 1)))
    for start in range(0, trials, rows):
        yield start, min(start + rows, trials)


def _score(plan: TrialPlan, topology: Optional[Topology], start: int, stop: int) -> np.ndarray:
    if plan.target is Target.BLOCK_SPREADING:
        words = _uniforms(plan.master_seed, start, stop, plan.block_length) < plan.p
        _, spreading = classify_blocks(words, plan.topology.r)
        return spreading

    assert topology is not None
    initial = _uniforms(plan.master_seed, start, stop, topology.vertex_count) < plan.p
    final, _ = fixpoints(topology, initial, plan.rule)
    if plan.target is Target.PERCOLATION:
        return final.all(axis=1)
    if plan.target is Target.RING_MAJORITY:
        return 2 * final[:, :topology.n].sum(axis=1) > topology.n
    return final[:, 0]


def _run_chunks(func: Callable[[int, int], np.ndarray], chunks: Sequence[Tuple[int, int]]) -> List[np.ndarray]:
    workers = configs.config.worker_threads
    if workers == 1 or len(chunks) == 1:
        return [func(start, stop) for start, stop in chunks]
    _log.debug('dispatching %d chunks to %d threads', len(chunks), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda chunk: func(*chunk), chunks))


def trial_outcomes(plan: TrialPlan) -> np.ndarray:
    """Returns the boolean outcome of every trial of ``plan``, in trial order."""
    if plan.target is Target.BLOCK_SPREADING:
        topology, width = None, plan.block_length
    else:
        topology = build_topology(plan.topology)
        width = topology.vertex_count

    func = functools.partial(_score, plan, topology)
    parts = _run_chunks(func, list(_chunks(plan.trials, width)))
    return np.concatenate(parts)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion, clamped to ``[0, 1]``.

    Raises
    ------
    ParameterError
        ``trials < 1``, ``successes`` outside ``0..trials`` or ``confidence``
        outside ``(0, 1)``.
    """
    if trials < 1:
        raise ParameterError(f'trials must be at least 1 (got {trials})')
    if not 0 <= successes <= trials:
        raise ParameterError(f'successes must be in 0..{trials} (got {successes})')
    if not 0 < confidence < 1:
        raise ParameterError(f'confidence must be in (0, 1) (got {confidence})')

    z = float(stats.norm.ppf(0.5 + confidence / 2))
    phat = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom

    low = 0.0 if successes == 0 else max(0.0, min(center - half, phat))
    high = 1.0 if successes == trials else min(1.0, max(center + half, phat))
    return low, high


def _proportion(successes: int, trials: int, confidence: float) -> Proportion:
    low, high = wilson_interval(successes, trials, confidence)
    return Proportion(successes, trials, successes / trials, low, high)


def run_estimate(plan: TrialPlan) -> EstimateRecord:
    """Estimates the probability of the plan's target event.

    Raises
    ------
    ValidationError
        The plan is inconsistent; raised when the plan is built.
    """
    started = time.perf_counter()
    successes = int(np.count_nonzero(trial_outcomes(plan)))
    low, high = wilson_interval(successes, plan.trials, plan.confidence)
    elapsed = time.perf_counter() - started

    _log.info('%s at p=%s on %s: %d/%d', plan.target.value, plan.p, plan.topology.dump(), successes, plan.trials)
    return EstimateRecord({
        'plan': plan,
        'successes': successes,
        'estimate': successes / plan.trials,
        'ci_low': low,
        'ci_high': high,
        'elapsed': elapsed,
    })


def _cell_seed(master_seed: int, index: int) -> int:
    return master_seed if index == 0 else derive_trial_seed(master_seed, index)


def scan_grid(
    base_plan: TrialPlan,
    p_values: Sequence[float],
    r_values: Sequence[int],
    *,
    n_per_r: Optional[int] = None,
) -> List[EstimateRecord]:
    """Runs :func:`run_estimate` on every ``(p, r)`` cell of a grid.

    Cells are visited with ``p`` in the outer loop. Cell ``0`` runs with the
    base plan's master seed, so a one cell grid is exactly
    ``run_estimate(base_plan)``; cell ``i > 0`` uses
    ``derive_trial_seed(base_plan.master_seed, i)``. When ``n_per_r`` is
    given the ring length of each cell is ``n_per_r * r``.

    Raises
    ------
    GridCellError
        A cell failed; the error carries the cell's index, ``p`` and ``r``.
    """
    records: List[EstimateRecord] = []
    for index, (p, r) in enumerate((p, r) for p in p_values for r in r_values):
        try:
            changes: dict = {'r': r}
            if n_per_r is not None:
                changes['n'] = n_per_r * r
            plan = base_plan.evolve(
                p=p,
                topology=base_plan.topology.evolve(**changes),
                master_seed=_cell_seed(base_plan.master_seed, index),
            )
            records.append(run_estimate(plan))
        except BootpercException as err:
            raise GridCellError(index, p, r, err) from err
    return records


def bisect_threshold(
    plan: TrialPlan,
    target_prob: float = 0.95,
    p_lo: float = 0.0,
    p_hi: float = 1.0,
    tol: float = 1e-3,
    *,
    response: Optional[Callable[[float], float]] = None,
) -> float:
    """Finds the least ``p`` at which the estimated success probability reaches ``target_prob``.

    This is a finite ``n`` surrogate of the critical probability. Every
    evaluation reuses the plan's master seed, so the empirical response is
    monotone in ``p``.

    Parameters
    ----------
    plan: :class:`TrialPlan`
        The template; its ``p`` is ignored.
    target_prob: :class:`float`
        The success probability to reach.
    p_lo, p_hi: :class:`float`
        The initial bracket.
    tol: :class:`float`
        Width of the final bracket.
    response:
        Maps ``p`` to an estimated success probability. Defaults to
        :func:`run_estimate` on ``plan``.

    Raises
    ------
    ParameterError
        ``tol <= 0`` or an invalid bracket or target.
    BracketError
        The bracket does not straddle ``target_prob``.
    """
    if not tol > 0:
        raise ParameterError(f'tol must be positive (got {tol})')
    if not 0 < target_prob < 1:
        raise ParameterError(f'target_prob must be in (0, 1) (got {target_prob})')
    if not 0 <= p_lo < p_hi <= 1:
        raise ParameterError(f'expected 0 <= p_lo < p_hi <= 1 (got p_lo={p_lo}, p_hi={p_hi})')

    if response is None:
        def response(p: float) -> float:
            return run_estimate(plan.evolve(p=p)).estimate

    estimate_lo, estimate_hi = response(p_lo), response(p_hi)
    if not estimate_lo < target_prob <= estimate_hi:
        raise BracketError(p_lo, p_hi, estimate_lo, estimate_hi, target_prob)

    while p_hi - p_lo > tol:
        mid = (p_lo + p_hi) / 2
        estimate = response(mid)
        _log.debug('bisection step p=%s -> %s', mid, estimate)
        if estimate >= target_prob:
            p_hi = mid
        else:
            p_lo = mid
    return (p_lo + p_hi) / 2


def simulate_hitting_time(r: int, p: float, runs: int, seed: int) -> SampleMean:
    """Samples the number of steps the reset chain needs to reach state ``r+1``.

    All runs advance together; each step moves a run up one state with
    probability ``q`` and back to ``0`` with probability ``p``.
    """
    if not 0 < p < 1:
        raise ParameterError(f'p must be in (0, 1) (got p={p})')
    if runs < 2:
        raise ParameterError(f'runs must be at least 2 (got {runs})')

    rng = np.random.default_rng(seed)
    state = np.zeros(runs, dtype=np.int64)
    steps = np.zeros(runs, dtype=np.int64)
    live = np.arange(runs)
    while live.size:
        advance = rng.random(live.size) >= p
        state[live] = np.where(advance, state[live] + 1, 0)
        steps[live] += 1
        live = live[state[live] < r + 1]

    return SampleMean(float(steps.mean()), float(steps.std(ddof=1) / math.sqrt(runs)), runs)


_WALL, _SPREADING, _EMPTY = 0, 1, 2


@njit(nogil=True)
def _three_state_rows(draws, p_w, p_s):
    # synchronous rounds: every empty neighbor of a spreading site turns spreading
    rows, length = draws.shape
    center = (length - 1) // 2
    hits = np.zeros(rows, dtype=np.bool_)
    state = np.empty(length, dtype=np.int8)
    frontier = np.empty(length, dtype=np.int64)
    grown = np.empty(length, dtype=np.int64)

    for row in range(rows):
        size = 0
        for i in range(length):
            u = draws[row, i]
            if u < p_w:
                state[i] = _WALL
            elif u < p_w + p_s:
                state[i] = _SPREADING
                frontier[size] = i
                size += 1
            else:
                state[i] = _EMPTY

        while size:
            count = 0
            for j in range(size):
                i = frontier[j]
                if i > 0 and state[i - 1] == _EMPTY:
                    state[i - 1] = _SPREADING
                    grown[count] = i - 1
                    count += 1
                if i + 1 < length and state[i + 1] == _EMPTY:
                    state[i + 1] = _SPREADING
                    grown[count] = i + 1
                    count += 1
            frontier, grown = grown, frontier
            size = count
        hits[row] = state[center] == _SPREADING

    return hits


def simulate_three_state(params: ThreeStateParams, length: int, trials: int, seed: int, confidence: float = 0.95) -> Proportion:
    """Estimates the probability that the center of a finite segment ends in state ``s``.

    Every trial samples the whole segment, site by site, as a wall, a
    spreading or an empty site, and runs the process in synchronous rounds
    until nothing changes: spreading sites convert their empty neighbors
    and walls never change. Sites beyond the segment act as walls. Trial
    ``i`` draws from ``derive_trial_seed(seed, i)``, so the result does not
    depend on the number of worker threads.

    Raises
    ------
    ParameterError
        ``length`` or ``trials`` is not positive.
    """
    if length < 1 or trials < 1:
        raise ParameterError('length and trials must be positive')
    p_w, p_s = params.p_w, params.p_s

    def score(start: int, stop: int) -> np.ndarray:
        return _three_state_rows(_uniforms(seed, start, stop, length), p_w, p_s)

    parts = _run_chunks(score, list(_chunks(trials, length)))
    return _proportion(int(np.count_nonzero(np.concatenate(parts))), trials, confidence)


def estimate_wall_event(
    spec: TopologySpec,
    p: float,
    delta: float,
    trials: int,
    master_seed: int,
    confidence: float = 0.95,
) -> Proportion:
    """Estimates ``P(X_0 = 1, R >= Δ | σ_0 = 0)`` on a ring under the strict rule.

    ``R`` is the distance to the nearest wall on the right of vertex 0 in
    the initial configuration; a ring without such a wall counts as
    ``R >= Δ``. Vertex 0 is forced passive in every trial.
    """
    topology = build_topology(spec)
    if topology.family is not Family.RING:
        raise ParameterError(f'the wall event is defined on rings only, got {topology!r}')
    r = topology.r

    def score(start: int, stop: int) -> np.ndarray:
        initial = _uniforms(master_seed, start, stop, topology.vertex_count) < p
        initial[:, 0] = False
        final, _ = fixpoints(topology, initial, Rule.STRICT)
        hit = final[:, 0].copy()
        for row in np.flatnonzero(hit):
            right = wall_distances(initial[row], r).right  # type: ignore
            hit[row] = right is None or right >= delta
        return hit

    parts = _run_chunks(score, list(_chunks(trials, topology.vertex_count)))
    return _proportion(int(np.count_nonzero(np.concatenate(parts))), trials, confidence)
