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

"""Exact, brute force and closed form computations.

Everything here is a pure function of its arguments and is used to check
the simulator and the Monte Carlo estimators at small scale.

Blocks are classified by embedding them between ``r`` permanently passive
cells on each side. The dynamics are monotone in the initial set, so an
all-passive exterior is the worst case over every exterior configuration.

Probabilities accept either a :class:`float` or a :class:`fractions.Fraction`
``p``. Fractions give exact rational results; floats are summed with
:func:`math.fsum`.
"""

from __future__ import annotations

from typing import Any, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple, TypeVar
from fractions import Fraction
from bootperc import configs, fields, validate
from bootperc.configs import SchemaConfig
from bootperc.dynamics import Configuration, fixpoints, settle
from bootperc.exceptions import ConfigurationMismatchError, GuardExceededError, ParameterError
from bootperc.schema import Schema
from bootperc.topology import Family, Rule, Topology, window_counts

import enum
import functools
import itertools
import logging
import math
import threading
import numpy as np

__all__ = (
    'BlockClass',
    'BlockWord',
    'WallDistances',
    'ThreeStateParams',
    'EnumerationResult',
    'guard_overrides',
    'wall_distances',
    'classify_block',
    'classify_blocks',
    'paired_word',
    'is_member_tr',
    'enumerate_tr',
    'tr_lower_bound',
    'mu_wall_exact',
    'mu_spreading_exact',
    'spreading_counts',
    'block_activation_lower_bound',
    'markov_hitting_expectation',
    'hitting_time_bound',
    'three_state_activation',
    'binomial_tail',
    'enumerate_outcomes',
    'exact_percolation_probability',
    'default_delta',
    'corollary_bound',
    'dead_block_bound',
    'x0_upper_bound',
)

_log = logging.getLogger(__name__)

ProbabilityT = TypeVar('ProbabilityT', float, Fraction)

_ENUMERATION_CHUNK = 1 << 16

_overrides: Set[str] = set()
_overrides_lock = threading.Lock()


def _check_guard(guard: str, value: int, alternative: str, accept_cost: bool) -> None:
    limit = getattr(configs.config, guard)
    if value <= limit:
        return
    if not accept_cost:
        raise GuardExceededError(guard, limit, value, alternative)
    with _overrides_lock:
        _overrides.add(guard)
    _log.warning('%s=%d exceeded by request of %d, continuing since accept_cost=True', guard, limit, value)


def guard_overrides() -> List[str]:
    """Returns the names of the guards bypassed with ``accept_cost=True`` so far."""
    with _overrides_lock:
        return sorted(_overrides)


def _check_probability(p: Any, *, open_interval: bool = True) -> None:
    if isinstance(p, bool) or not isinstance(p, (int, float, Fraction)):
        raise ParameterError(f'p must be a real number, not {type(p).__name__}')
    if math.isnan(p):
        raise ParameterError('p must not be NaN')
    if open_interval and not 0 < p < 1:
        raise ParameterError(f'p must be in (0, 1) (got p={p})')
    if not 0 <= p <= 1:
        raise ParameterError(f'p must be in [0, 1] (got p={p})')


def _check_radius(r: Any) -> None:
    if isinstance(r, bool) or not isinstance(r, int) or r < 1:
        raise ParameterError(f'r must be an integer of at least 1 (got r={r!r})')


def _weighted_sum(counts: Sequence[int], length: int, p: ProbabilityT) -> ProbabilityT:
    # sum of counts[k] * p^k * q^(length-k)
    q = 1 - p
    if isinstance(p, Fraction):
        return sum((Fraction(c) * p**k * q**(length - k) for k, c in enumerate(counts) if c), Fraction(0))
    terms = sorted((c * p**k * q**(length - k) for k, c in enumerate(counts) if c), key=abs)
    return math.fsum(terms)


def _words(length: int, start: int, stop: int) -> np.ndarray:
    codes = np.arange(start, stop, dtype=np.int64)
    return ((codes[:, np.newaxis] >> np.arange(length, dtype=np.int64)) & 1).astype(bool)


### Walls ###

class WallDistances(NamedTuple):
    """Distances from vertex 0 to the nearest wall on each side.

    A distance ``d`` certifies that the vertex at offset ``d`` is active
    and is followed (moving away from vertex 0) by ``r+1`` passive
    vertices. None means there is no such pattern.
    """
    left: Optional[int]
    right: Optional[int]


def _nearest_wall(bits: np.ndarray, r: int) -> Optional[int]:
    n = bits.size
    zeros = (~bits).astype(np.int32)
    ext = np.concatenate((zeros, zeros[:r + 1]))
    cs = np.zeros(ext.size + 1, dtype=np.int32)
    np.cumsum(ext, out=cs[1:])
    zeros_after = cs[r + 2:r + 2 + n] - cs[1:1 + n]
    matches = np.flatnonzero(bits[1:] & (zeros_after[1:] == r + 1))
    return int(matches[0]) + 1 if matches.size else None


def wall_distances(config: Configuration, r: int, *, topology: Optional[Topology] = None) -> WallDistances:
    """Locates the nearest wall on each side of vertex 0 of a ring configuration.

    Parameters
    ----------
    config: :class:`Configuration`
        A ring configuration of length ``n > 2r+1``.
    r: :class:`int`
        The radius.
    topology: Optional[:class:`Topology`]
        When given, it must be a ring matching the configuration. Without
        it the configuration is read as a ring of length ``len(config)``;
        a bare configuration carries no family.

    Raises
    ------
    ParameterError
        The topology is not a ring or ``n <= 2r+1``.
    ConfigurationMismatchError
        The configuration does not match ``topology``.
    """
    _check_radius(r)
    if topology is not None:
        if topology.family is not Family.RING:
            raise ParameterError(f'wall distances are defined on rings only, got {topology!r}')
        if len(config) != topology.vertex_count:
            raise ConfigurationMismatchError(f'configuration has {len(config)} entries, expected {topology.vertex_count}')
    bits = np.asarray(config.bits if isinstance(config, Configuration) else Configuration(config).bits)
    n = bits.size
    if n <= 2*r + 1:
        raise ParameterError(f'n must exceed 2r+1 (got n={n}, r={r})')

    mirrored = np.roll(bits[::-1], 1)
    return WallDistances(left=_nearest_wall(mirrored, r), right=_nearest_wall(bits, r))


### Blocks ###

class BlockClass(enum.Enum):
    """The class of a block; every block has exactly one."""

    WALL = 'wall'
    SPREADING = 'spreading'
    EMPTY = 'empty'


class BlockWord:
    """A block of ``ℓ`` consecutive initial states.

    Parameters
    ----------
    bits: Iterable[:class:`int`]
        The states, or a string of ``0`` and ``1``.
    r: :class:`int`
        The radius.
    """
    __slots__ = ('bits', 'r')

    def __init__(self, bits: Iterable[Any], r: int) -> None:
        _check_radius(r)
        if isinstance(bits, str):
            if not bits or set(bits) - {'0', '1'}:
                raise ParameterError(f'block must be a non-empty word over 0 and 1, got {bits!r}')
            values = tuple(int(c) for c in bits)
        else:
            values = tuple(int(b) for b in bits)
            if not values or set(values) - {0, 1}:
                raise ParameterError('block must be a non-empty sequence of 0 and 1')
        self.bits: Tuple[int, ...] = values
        self.r = r

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return ''.join(map(str, self.bits))

    def __repr__(self) -> str:
        return f'BlockWord({str(self)!r}, r={self.r})'


def _has_wall(words: np.ndarray, r: int) -> np.ndarray:
    rows, length = words.shape
    if length < r + 1:
        return np.zeros(rows, dtype=bool)
    cs = np.zeros((rows, length + 1), dtype=np.int32)
    np.cumsum((~words).astype(np.int32), axis=1, out=cs[:, 1:])
    return ((cs[:, r + 1:] - cs[:, :length - r]) == r + 1).any(axis=1)


def classify_blocks(words: np.ndarray, r: int) -> Tuple[np.ndarray, np.ndarray]:
    """Classifies a batch of blocks.

    Returns
    -------
    Tuple[:class:`numpy.ndarray`, :class:`numpy.ndarray`]
        Boolean ``wall`` and ``spreading`` masks, one entry per row of
        ``words``. Rows in neither mask are empty blocks.
    """
    words = np.asarray(words, dtype=bool)
    wall = _has_wall(words, r)
    spreading = np.zeros(words.shape[0], dtype=bool)
    candidates = np.flatnonzero(~wall)
    if candidates.size:
        thresholds = np.full(words.shape[1], r + 1, dtype=np.int32)
        final, _ = settle(words[candidates], thresholds, lambda s: window_counts(s, r, circular=False))
        spreading[candidates] = final.all(axis=1)
    return wall, spreading


def classify_block(block: BlockWord) -> BlockClass:
    """Classifies a block as a wall, spreading or empty.

    A block with ``r+1`` consecutive passive cells is a wall. Otherwise it
    is spreading when every cell becomes active under the strict rule with
    a permanently passive exterior, and empty when it is not.
    """
    wall, spreading = classify_blocks(np.array([block.bits], dtype=bool), block.r)
    if wall[0]:
        return BlockClass.WALL
    return BlockClass.SPREADING if spreading[0] else BlockClass.EMPTY


### Dyck style words ###

def _word_of(v: Any) -> Tuple[int, ...]:
    if isinstance(v, str):
        if set(v) - {'0', '1'}:
            raise ParameterError(f'word must contain 0 and 1 only, got {v!r}')
        return tuple(int(c) for c in v)
    return tuple(int(b) for b in v)


def paired_word(v: Any, r: int) -> List[Tuple[int, int]]:
    """Returns the pairs ``(v_i, v_{i+r})`` for ``i = 1..r-1``."""
    word = _word_of(v)
    if len(word) != 2*r + 1:
        raise ParameterError(f'word must have length 2r+1={2*r + 1}, got {len(word)}')
    return [(word[i], word[i + r]) for i in range(1, r)]


def _is_balanced(pairs: Iterable[Tuple[int, int]]) -> bool:
    height = 0
    for a, b in pairs:
        if a == b:
            height += 1 if a == 0 else -1
            if height < 0:
                return False
    return height == 0


def is_member_tr(v: Any, r: int) -> bool:
    """Tests membership in the family ``T_r`` of generalized Dyck words.

    ``v`` (length ``2r+1``) is a member when it has exactly ``r+1`` ones,
    ``v_0 = v_2r = 1`` and ``v_r = 0``, and its paired word, reading
    ``(0,0)`` as an up step and ``(1,1)`` as a down step, is a Dyck path.

    Raises
    ------
    ParameterError
        ``v`` does not have length ``2r+1``.
    """
    _check_radius(r)
    pairs = paired_word(v, r)
    word = _word_of(v)
    if sum(word) != r + 1 or word[0] != 1 or word[2*r] != 1 or word[r] != 0:
        return False
    return _is_balanced(pairs)


def enumerate_tr(r: int, *, accept_cost: bool = False) -> FrozenSet[str]:
    """Enumerates ``T_r``.

    Candidates are generated with the fixed positions already set, leaving
    ``C(2r-2, r-1)`` words to check.

    Raises
    ------
    ParameterError
        ``r < 1``.
    GuardExceededError
        ``r`` exceeds :attr:`GlobalConfig.max_tr_radius`.
    """
    _check_radius(r)
    _check_guard('max_tr_radius', r, 'tr_lower_bound()', accept_cost)

    inner = [i for i in range(1, 2*r) if i != r]
    out = set()
    for ones in itertools.combinations(inner, r - 1):
        word = [0] * (2*r + 1)
        word[0] = word[2*r] = 1
        for i in ones:
            word[i] = 1
        if _is_balanced((word[i], word[i + r]) for i in range(1, r)):
            out.add(''.join(map(str, word)))

    _log.debug('|T_%d| = %d', r, len(out))
    return frozenset(out)


def tr_lower_bound(r: int) -> int:
    """Exact lower bound ``Catalan(k) * C(4k, 2k) * 4^k`` on ``|T_r|`` for ``r = 4k+1``.

    Raises
    ------
    ParameterError
        ``r`` is not of the form ``4k+1`` with ``k >= 1``.
    """
    if isinstance(r, bool) or not isinstance(r, int) or r < 5 or (r - 1) % 4:
        raise ParameterError(f'r must be of the form 4k+1 with k >= 1 (got r={r!r})')
    k = (r - 1) // 4
    catalan = math.comb(2*k, k) // (k + 1)
    return catalan * math.comb(4*k, 2*k) * 4**k


### Block measures ###

def mu_wall_exact(length: int, r: int, p: ProbabilityT) -> ProbabilityT:
    """Probability that a random block of the given length is a wall.

    Each cell is passive with probability ``q = 1-p``. The computation is
    a dynamic program over the length of the trailing run of passive cells.

    Raises
    ------
    ParameterError
        ``length < r+1`` or ``p`` outside ``(0, 1)``.
    """
    _check_radius(r)
    _check_probability(p)
    if length < r + 1:
        raise ParameterError(f'length must be at least r+1={r + 1} (got length={length})')

    q = 1 - p
    zero = p - p
    runs = [zero] * (r + 1)  # runs[j]: no wall yet, trailing run of j zeros
    runs[0] = zero + 1
    wall = zero
    for _ in range(length):
        wall += runs[r] * q
        runs = [p * sum(runs)] + [runs[j - 1] * q for j in range(1, r + 1)]
    return wall


@functools.lru_cache(maxsize=64)
def spreading_counts(length: int, r: int) -> Tuple[int, ...]:
    """Number of spreading blocks of the given length, by number of active cells.

    This enumerates all ``2^length`` blocks; callers apply the size guard.
    """
    counts = np.zeros(length + 1, dtype=np.int64)
    total = 1 << length
    for start in range(0, total, _ENUMERATION_CHUNK):
        words = _words(length, start, min(start + _ENUMERATION_CHUNK, total))
        _, spreading = classify_blocks(words, r)
        ones = words.sum(axis=1)
        counts += np.bincount(ones[spreading], minlength=length + 1)
    return tuple(int(c) for c in counts)


def mu_spreading_exact(length: int, r: int, p: ProbabilityT, *, accept_cost: bool = False) -> ProbabilityT:
    """Probability that a random block of the given length is spreading.

    Raises
    ------
    ParameterError
        Invalid ``length``, ``r`` or ``p``.
    GuardExceededError
        ``length`` exceeds :attr:`GlobalConfig.max_block_length`.
    """
    _check_radius(r)
    _check_probability(p)
    if isinstance(length, bool) or not isinstance(length, int) or length < 1:
        raise ParameterError(f'length must be a positive integer (got length={length!r})')
    _check_guard('max_block_length', length, 'the Monte Carlo block spreading estimator', accept_cost)
    return _weighted_sum(spreading_counts(length, r), length, p)


def block_activation_lower_bound(length: int, r: int, p: ProbabilityT, *, accept_cost: bool = False) -> ProbabilityT:
    """Lower bound ``1 / (1 + μ(W)/μ(S))`` on the limiting mean final state of a vertex.

    Partitioning the ring into blocks of the given length turns the dynamics
    into the three-state model with wall, spreading and empty blocks.
    Returns ``0`` when no block of this length spreads.
    """
    mu_s = mu_spreading_exact(length, r, p, accept_cost=accept_cost)
    mu_w = mu_wall_exact(length, r, p)
    if mu_s == 0:
        return mu_s
    return 1 / (1 + mu_w / mu_s)


### Reset chain ###

def markov_hitting_expectation(r: int, p: ProbabilityT) -> ProbabilityT:
    """Expected steps for the reset chain to reach state ``r+1`` from ``0``.

    From each state the chain advances with probability ``q`` and resets to
    ``0`` with probability ``p``. The expectation is ``Σ_{j=1}^{r+1} q^-j``.
    """
    _check_radius(r)
    _check_probability(p)
    q = 1 - p
    if isinstance(p, Fraction):
        return sum((1 / q**j for j in range(1, r + 2)), Fraction(0))
    return math.fsum(q**-j for j in range(1, r + 2))


def hitting_time_bound(a: int, r: int, p: ProbabilityT) -> ProbabilityT:
    """Upper bound ``q^-r (a q^r + 1/(pq))`` on ``a`` plus the expected hitting time."""
    _check_probability(p)
    q = 1 - p
    return (a * q**r + 1 / (p * q)) / q**r


### Three-state model ###

class ThreeStateParams(Schema):
    """Initial probabilities of the three-state model on the integers.

    ``p_w`` (wall) and ``p_s`` (spreading) must be positive. ``p_e``
    (empty) may be zero. The three must sum to one.
    """
    p_w = fields.Float(validators=[validate.Interval(0, 1, closed=False)])
    p_s = fields.Float(validators=[validate.Interval(0, 1, closed=False)])
    p_e = fields.Float(validators=[validate.Interval(0, 1)])

    class Config(SchemaConfig):
        frozen = True

    @validate.field('p_e')
    def _check_normalized(self, value: float) -> None:
        total = self.get_value_for('p_w', 0.0) + self.get_value_for('p_s', 0.0) + value
        if abs(total - 1) > 1e-9:
            raise ValueError(f'p_w + p_s + p_e must equal 1 (got {total!r})')


def three_state_activation(params: ThreeStateParams) -> Tuple[float, float]:
    """Probability that site 0 of the three-state model ends in state ``s``.

    An empty site takes the state of whichever neighbor is reached first
    by a spreading site, so site 0 ends in ``s`` unless it is a wall or
    both nearest non-empty sites are walls.

    Returns
    -------
    Tuple[:class:`float`, :class:`float`]
        The exact probability and the lower bound ``1 / (1 + p_w/p_s)``.
    """
    p_w, p_s, p_e = params.p_w, params.p_s, params.p_e
    wall_share = p_w / (p_s + p_w)
    exact = p_s + p_e * (1 - wall_share**2)
    bound = 1 / (1 + p_w / p_s)
    return exact, bound


### Binomial tails ###

def binomial_tail(trials: int, p: ProbabilityT, threshold: int) -> ProbabilityT:
    """Exact ``P(Bin(trials, p) >= threshold)``."""
    _check_probability(p, open_interval=False)
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < 0:
        raise ParameterError(f'trials must be a non-negative integer (got {trials!r})')
    counts = [math.comb(trials, k) if k >= threshold else 0 for k in range(trials + 1)]
    return _weighted_sum(counts, trials, p)


### Exhaustive enumeration ###

class EnumerationResult:
    """Outcome counts over every initial configuration of a small topology.

    ``counts[event][k]`` is the number of initial configurations with ``k``
    active vertices for which ``event`` holds after running to the fixed
    point. Events are:

    - ``percolation``: every vertex is finally active.
    - ``ring_majority``: strictly more than half of the ring vertices are
      finally active.
    - ``vertex0``: vertex 0 is finally active.

    Attributes
    ----------
    topology: :class:`Topology`
    rule: :class:`Rule`
    counts: Dict[:class:`str`, Tuple[:class:`int`, ...]]
    """
    __slots__ = ('topology', 'rule', 'counts')

    EVENTS = ('percolation', 'ring_majority', 'vertex0')

    def __init__(self, topology: Topology, rule: Rule, counts: Dict[str, Tuple[int, ...]]) -> None:
        self.topology = topology
        self.rule = rule
        self.counts = counts

    def __repr__(self) -> str:
        return f'EnumerationResult({self.topology!r}, rule={self.rule.value!r})'

    def probability(self, event: str, p: ProbabilityT) -> ProbabilityT:
        """Evaluates the probability of ``event`` when each vertex starts active with probability ``p``."""
        try:
            counts = self.counts[event]
        except KeyError:
            raise ParameterError(f'unknown event {event!r}, expected one of {", ".join(self.EVENTS)}') from None
        _check_probability(p, open_interval=False)
        return _weighted_sum(counts, self.topology.vertex_count, p)


@functools.lru_cache(maxsize=32)
def _enumerate(topology: Topology, rule: Rule) -> EnumerationResult:
    vertex_count, n = topology.vertex_count, topology.n
    totals = {event: np.zeros(vertex_count + 1, dtype=np.int64) for event in EnumerationResult.EVENTS}

    total = 1 << vertex_count
    for start in range(0, total, _ENUMERATION_CHUNK):
        initial = _words(vertex_count, start, min(start + _ENUMERATION_CHUNK, total))
        final, _ = fixpoints(topology, initial, rule)
        ones = initial.sum(axis=1)
        masks = {
            'percolation': final.all(axis=1),
            'ring_majority': 2 * final[:, :n].sum(axis=1) > n,
            'vertex0': final[:, 0],
        }
        for event, mask in masks.items():
            totals[event] += np.bincount(ones[mask], minlength=vertex_count + 1)

    _log.debug('enumerated %d configurations of %r', total, topology)
    counts = {event: tuple(int(c) for c in values) for event, values in totals.items()}
    return EnumerationResult(topology, rule, counts)


def enumerate_outcomes(topology: Topology, rule: Rule, *, accept_cost: bool = False) -> EnumerationResult:
    """Runs every initial configuration of ``topology`` to its fixed point.

    The hub of an r-wheel is enumerated like any other vertex. Results are
    cached per ``(topology, rule)``.

    Raises
    ------
    GuardExceededError
        The vertex count exceeds :attr:`GlobalConfig.max_enumeration_vertices`.
    """
    _check_guard('max_enumeration_vertices', topology.vertex_count, 'run_estimate()', accept_cost)
    return _enumerate(topology, rule)


def exact_percolation_probability(topology: Topology, rule: Rule, p: ProbabilityT, *, accept_cost: bool = False) -> ProbabilityT:
    """Exact probability that every vertex ends up active.

    See :func:`enumerate_outcomes` for the ring majority and vertex 0 events.
    """
    _check_probability(p, open_interval=False)
    return enumerate_outcomes(topology, rule, accept_cost=accept_cost).probability('percolation', p)


### Bounds on the final state of vertex 0 ###

def default_delta(r: int, p: float) -> float:
    """The wall distance cut-off ``C q^-r`` with ``C = 8r/(pq)``."""
    _check_radius(r)
    _check_probability(p)
    q = 1 - p
    return 8 * r / (p * q) / q**r


def corollary_bound(r: int, p: float, delta: float) -> float:
    """Bound ``(1/Δ) q^-r (r q^r + 1/(pq))`` on ``P(X_0 = 1, R >= Δ | σ_0 = 0)``."""
    _check_probability(p)
    if delta <= 0:
        raise ParameterError(f'delta must be positive (got {delta})')
    return hitting_time_bound(r, r, p) / delta


def dead_block_bound(r: int, p: float, delta: float) -> float:
    """Bound ``2Δ (4pq)^r`` on vertex 0 activating with both walls closer than ``Δ``."""
    _check_probability(p)
    return 2 * delta * (4 * p * (1 - p))**r


def x0_upper_bound(r: int, p: float, delta: Optional[float] = None) -> float:
    """Upper bound on the mean final state of vertex 0 on a long ring.

    Combines the initial activation probability, one wall event per side
    and the dead block event. ``delta`` defaults to :func:`default_delta`.
    """
    if delta is None:
        delta = default_delta(r, p)
    return p + 2 * corollary_bound(r, p, delta) + dead_block_bound(r, p, delta)
