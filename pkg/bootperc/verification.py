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

"""Numerical checks of the inequalities the simulator is built around.

Each check instantiates one family of inequalities, with exact oracle
values where enumeration is feasible and Monte Carlo estimates otherwise.
A check fails only when a violation exceeds its tolerance: zero for exact
rational comparisons, a rounding allowance for floating point ones and a
multiple of the interval half-widths for estimates.
"""

from __future__ import annotations

from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union
from fractions import Fraction
from bootperc.exceptions import ParameterError, UnknownCheckError
from bootperc.montecarlo import (
    Target,
    TrialPlan,
    estimate_wall_event,
    run_estimate,
    simulate_hitting_time,
    simulate_three_state,
)
from bootperc.oracles import (
    ThreeStateParams,
    block_activation_lower_bound,
    classify_blocks,
    corollary_bound,
    default_delta,
    enumerate_outcomes,
    enumerate_tr,
    hitting_time_bound,
    markov_hitting_expectation,
    mu_spreading_exact,
    mu_wall_exact,
    binomial_tail,
    three_state_activation,
    tr_lower_bound,
    x0_upper_bound,
)
from bootperc.topology import Rule, TopologySpec, build_topology

import enum
import logging
import math
import numpy as np

__all__ = (
    'Check',
    'InequalityCheck',
    'VerificationReport',
    'verify_lemma',
)

_log = logging.getLogger(__name__)

_PROBABILITY_GRID = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45]


class Check(enum.Enum):
    """The available checks. Values are the identifiers used on the command line."""

    RING_WHEEL_COMPARISON = 'lemma1'
    MAJORITY_SANDWICH = 'lemma2'
    HITTING_TIME = 'lemma3'
    WALL_EVENT = 'corollary4'
    BINOMIAL_TAIL = 'lemma5'
    SUBCRITICAL_VERTEX = 'theorem6'
    THREE_STATE = 'lemma6'
    WALL_MEASURE = 'lemma7'
    DYCK_SPREADING = 'lemma8'
    DYCK_COUNT = 'theorem9'
    ALL = 'all'

    @classmethod
    def parse(cls, value: Union[str, Check]) -> Check:
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            known = ', '.join(c.value for c in cls)
            raise UnknownCheckError(f'unknown check {value!r}, expected one of: {known}') from None


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, np.generic):
        return value.item()
    return value


class InequalityCheck:
    """One instantiated inequality ``lhs <= rhs + tolerance``.

    Attributes
    ----------
    label: :class:`str`
        Human readable description including the parameters.
    lhs, rhs:
        The two sides. :class:`fractions.Fraction` values compare exactly.
    tolerance:
        The allowed excess.
    strict: :class:`bool`
        Whether the inequality is ``<`` rather than ``<=``.
    """
    __slots__ = ('label', 'lhs', 'rhs', 'tolerance', 'strict')

    def __init__(self, label: str, lhs: Any, rhs: Any, tolerance: Any = 0, *, strict: bool = False) -> None:
        self.label = label
        self.lhs = lhs
        self.rhs = rhs
        self.tolerance = tolerance
        self.strict = strict

    def __repr__(self) -> str:
        return f'InequalityCheck({self.label!r}, passed={self.passed})'

    @property
    def passed(self) -> bool:
        bound = self.rhs + self.tolerance
        return bool(self.lhs < bound if self.strict else self.lhs <= bound)

    def to_dict(self) -> Dict[str, Any]:
        out = {
            'label': self.label,
            'lhs': _plain(self.lhs),
            'rhs': _plain(self.rhs),
            'tolerance': _plain(self.tolerance),
            'strict': self.strict,
            'verdict': 'PASS' if self.passed else 'FAIL',
        }
        if isinstance(self.lhs, Fraction) or isinstance(self.rhs, Fraction):
            out['exact'] = f'{self.lhs} {"<" if self.strict else "<="} {self.rhs}'
        return out


class VerificationReport:
    """The outcome of :func:`verify_lemma`.

    Attributes
    ----------
    check: :class:`Check`
    params: Dict[:class:`str`, Any]
        Every parameter the check used, defaults included.
    checks: List[:class:`InequalityCheck`]
    notes: Dict[:class:`str`, Any]
        Derived constants worth recording.
    """
    __slots__ = ('check', 'params', 'checks', 'notes')

    def __init__(self, check: Check, params: Dict[str, Any], checks: List[InequalityCheck], notes: Dict[str, Any]) -> None:
        self.check = check
        self.params = params
        self.checks = checks
        self.notes = notes

    def __repr__(self) -> str:
        return f'VerificationReport({self.check.value!r}, verdict={self.verdict!r}, checks={len(self.checks)})'

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def verdict(self) -> str:
        return 'PASS' if self.passed else 'FAIL'

    def failures(self) -> List[InequalityCheck]:
        return [c for c in self.checks if not c.passed]

    def to_results(self) -> Dict[str, Any]:
        return {
            'verdict': self.verdict,
            'checks': [c.to_dict() for c in self.checks],
            'notes': {k: _plain(v) for k, v in self.notes.items()},
        }


class _Params:
    def __init__(self, raw: Optional[Mapping[str, Any]]) -> None:
        self.raw = dict(raw or {})
        self.resolved: Dict[str, Any] = {}

    def get(self, name: str, default: Any, convert: Callable[[Any], Any] = lambda x: x) -> Any:
        value = convert(self.raw.get(name, default))
        self.resolved[name] = value
        return value

    def _values(self, plural: str, singular: str, default: List[Any], convert: Callable[[Any], Any]) -> List[Any]:
        if plural in self.raw:
            values = self.raw[plural]
            values = values if isinstance(values, (list, tuple)) else [values]
        elif singular in self.raw:
            values = [self.raw[singular]]
            self.resolved[singular] = self.raw[singular]
        else:
            values = default
        values = [convert(v) for v in values]
        self.resolved[plural] = values
        return values

    def radii(self, default: List[int]) -> List[int]:
        return self._values('r_values', 'r', default, int)

    def probabilities(self, default: List[float]) -> List[float]:
        return self._values('p_values', 'p', default, float)

    def unused(self) -> List[str]:
        return sorted(set(self.raw) - set(self.resolved))


def _exact(value: Any) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(str(value))


_Outcome = Tuple[List[InequalityCheck], Dict[str, Any]]


def _ring_wheel_comparison(params: _Params) -> _Outcome:
    n = params.get('n', 10000, int)
    trials = params.get('trials', 2000, int)
    seed = params.get('seed', 0, int)
    rule = params.get('rule', 'strict', Rule)
    checks = []
    for r in params.radii([2, 4, 8]):
        for p in params.probabilities([0.2, 0.3]):
            base = {'p': p, 'trials': trials, 'master_seed': seed, 'rule': rule}
            ring = run_estimate(TrialPlan({**base, 'topology': {'family': 'ring', 'n': n, 'r': r}, 'target': Target.RING_MAJORITY}))
            wheel = run_estimate(TrialPlan({**base, 'topology': {'family': 'rwheel', 'n': n, 'r': r}, 'target': Target.PERCOLATION}))
            checks.append(InequalityCheck(
                f'ring majority <= wheel percolation (r={r}, p={p})',
                ring.estimate, wheel.estimate, 2 * (ring.half_width + wheel.half_width),
            ))
            checks.append(InequalityCheck(
                f'wheel percolation <= p + q * ring majority (r={r}, p={p})',
                wheel.estimate, p + (1 - p) * ring.estimate, 2 * (wheel.half_width + (1 - p) * ring.half_width),
            ))
    return checks, {}


def _majority_sandwich(params: _Params) -> _Outcome:
    n = params.get('n', 12, int)
    r = params.get('r', 2, int)
    p = params.get('p', '0.3', _exact)
    rule = params.get('rule', 'strict', Rule)
    accept_cost = params.get('accept_cost', False, bool)

    topology = build_topology(TopologySpec({'family': 'ring', 'n': n, 'r': r}))
    outcomes = enumerate_outcomes(topology, rule, accept_cost=accept_cost)
    mean_x0 = outcomes.probability('vertex0', p)
    majority = outcomes.probability('ring_majority', p)
    checks = [
        InequalityCheck('2 E[X_0] - 1 <= ring majority', 2*mean_x0 - 1, majority),
        InequalityCheck('ring majority <= 2 E[X_0]', majority, 2*mean_x0),
    ]
    return checks, {'mean_x0': mean_x0, 'ring_majority': majority}


def _hitting_time(params: _Params) -> _Outcome:
    checks = []
    for r in params.radii(list(range(1, 21))):
        for p in params.probabilities(_PROBABILITY_GRID):
            expected = markov_hitting_expectation(r, p)
            excess = max(a + expected - hitting_time_bound(a, r, p) for a in range(1, r + 1))
            checks.append(InequalityCheck(
                f'a + E[N_0] - bound, worst a (r={r}, p={p})',
                excess, 0.0, 1e-12 * hitting_time_bound(r, r, p),
            ))

    runs = params.get('runs', 100000, int)
    seed = params.get('seed', 0, int)
    for r, p in params.get('spots', [[1, 0.5], [2, 0.3], [3, 0.4]]):
        sample = simulate_hitting_time(int(r), float(p), runs, seed)
        expected = markov_hitting_expectation(int(r), float(p))
        checks.append(InequalityCheck(
            f'|sampled - exact hitting time| (r={r}, p={p})',
            abs(sample.mean - expected), 3 * sample.stderr,
        ))
    return checks, {}


def _wall_event(params: _Params) -> _Outcome:
    n = params.get('n', 2000, int)
    r = params.get('r', 2, int)
    p = params.get('p', 0.2, float)
    trials = params.get('trials', 2000, int)
    seed = params.get('seed', 0, int)
    delta = params.get('delta', default_delta(r, p), float)

    spec = TopologySpec({'family': 'ring', 'n': n, 'r': r})
    estimate = estimate_wall_event(spec, p, delta, trials, seed)
    bound = corollary_bound(r, p, delta)
    checks = [InequalityCheck(
        f'P(X_0=1, R>=delta | sigma_0=0) <= bound (r={r}, p={p}, delta={delta:g})',
        estimate.estimate, bound, 2 * estimate.half_width,
    )]
    return checks, {'delta': delta, 'C': 8 * r / (p * (1 - p)), 'bound': bound}


def _binomial_tail(params: _Params) -> _Outcome:
    checks = []
    for r in params.radii(list(range(1, 65))):
        ratios = []
        for p in params.probabilities(_PROBABILITY_GRID):
            ratios.append(binomial_tail(2*r, p, r + 1) / (4 * p * (1 - p))**r)
        checks.append(InequalityCheck(f'P(Bin(2r, p) >= r+1) / (4pq)^r, worst p (r={r})', max(ratios), 1.0, 1e-12))
    return checks, {}


def _subcritical_vertex(params: _Params) -> _Outcome:
    p = params.get('p', 0.2, float)
    n_per_r = params.get('n_per_r', 2000, int)
    trials = params.get('trials', 200, int)
    seed = params.get('seed', 0, int)
    checks = []
    notes = {'n_per_r': n_per_r}
    for r in params.radii([16, 32]):
        plan = TrialPlan({
            'topology': {'family': 'ring', 'n': n_per_r * r, 'r': r},
            'p': p,
            'target': Target.VERTEX0_FINAL,
            'trials': trials,
            'master_seed': seed,
        })
        estimate = run_estimate(plan)
        checks.append(InequalityCheck(f'E[X_0] < 1/4 (r={r}, p={p})', estimate.estimate, 0.25, 2 * estimate.half_width))
        notes[f'x0_upper_bound_r{r}'] = x0_upper_bound(r, p)
    return checks, notes


def _three_state(params: _Params) -> _Outcome:
    samples = params.get('samples', 1000, int)
    sim_points = params.get('sim_points', 5, int)
    length = params.get('length', 100001, int)
    trials = params.get('trials', 10000, int)
    seed = params.get('seed', 0, int)

    rng = np.random.default_rng(seed)
    gaps = []
    worst_mismatch = 0.0
    points = []
    for weights in rng.dirichlet([1.0, 1.0, 1.0], size=samples):
        p_w, p_s, p_e = (float(w) for w in weights)
        state = ThreeStateParams({'p_w': p_w, 'p_s': p_s, 'p_e': p_e})
        exact, bound = three_state_activation(state)
        gaps.append(bound - exact)
        unsimplified = p_s + p_s * (p_s + 2*p_w) * state.p_e / (1 - state.p_e)**2
        worst_mismatch = max(worst_mismatch, abs(exact - unsimplified))
        points.append((state, exact))

    checks = [
        InequalityCheck('bound - exact, worst sample', max(gaps), 0.0, strict=True),
        InequalityCheck('|closed form - unsimplified form|, worst sample', worst_mismatch, 0.0, 1e-12),
    ]
    for index, (state, exact) in enumerate(points[:sim_points]):
        estimate = simulate_three_state(state, length, trials, seed + index + 1)
        stderr = math.sqrt(exact * (1 - exact) / trials)
        checks.append(InequalityCheck(
            f'|simulated - exact| (p_w={state.p_w:.4f}, p_s={state.p_s:.4f}, p_e={state.p_e:.4f})',
            abs(estimate.estimate - exact), 3 * stderr,
        ))
    return checks, {}


def _wall_measure(params: _Params) -> _Outcome:
    checks = []
    p_values = params.probabilities([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    for r in params.radii(list(range(1, 7))):
        excess = max(
            mu_wall_exact(length, r, p) - length * (1 - p)**(r + 1)
            for length in range(r + 1, 3*r + 1)
            for p in p_values
        )
        checks.append(InequalityCheck(f'mu(W) - length * q^(r+1), worst length and p (r={r})', excess, 0.0, 1e-12))

    n = params.get('n', 6000, int)
    trials = params.get('trials', 2000, int)
    seed = params.get('seed', 0, int)
    accept_cost = params.get('accept_cost', False, bool)
    notes = {}
    for r, p, length in params.get('block_spots', [[1, 0.5, 3], [2, 0.4, 6], [3, 0.35, 8]]):
        r, p, length = int(r), float(p), int(length)
        bound = block_activation_lower_bound(length, r, p, accept_cost=accept_cost)
        estimate = run_estimate(TrialPlan({
            'topology': {'family': 'ring', 'n': n, 'r': r},
            'p': p,
            'target': Target.VERTEX0_FINAL,
            'trials': trials,
            'master_seed': seed,
        }))
        checks.append(InequalityCheck(
            f'block bound <= E[X_0] (r={r}, p={p}, block length={length})',
            bound, estimate.estimate, 2 * estimate.half_width,
        ))
        notes[f'block_bound_r{r}'] = bound
    return checks, notes


def _dyck_spreading(params: _Params) -> _Outcome:
    accept_cost = params.get('accept_cost', False, bool)
    checks = []
    notes = {}
    for r in params.radii(list(range(1, 7))):
        words = sorted(enumerate_tr(r, accept_cost=accept_cost))
        bits = np.array([[c == '1' for c in w] for w in words], dtype=bool)
        _, spreading = classify_blocks(bits, r)
        length = 2*r + 1
        spreading_total = mu_spreading_exact(length, r, Fraction(1, 2), accept_cost=accept_cost) * 2**length
        checks.append(InequalityCheck(f'|T_r| <= spreading members of T_r (r={r})', len(words), int(spreading.sum())))
        checks.append(InequalityCheck(f'|T_r| <= spreading blocks of length 2r+1 (r={r})', len(words), int(spreading_total)))
        notes[f'tr_size_r{r}'] = len(words)
    return checks, notes


def _dyck_count(params: _Params) -> _Outcome:
    accept_cost = params.get('accept_cost', False, bool)
    checks = []
    for r in params.radii([5, 9]):
        size = len(enumerate_tr(r, accept_cost=accept_cost))
        checks.append(InequalityCheck(f'counting bound <= |T_r| (r={r})', tr_lower_bound(r), size))
    return checks, {}


_CHECKS: Dict[Check, Callable[[_Params], _Outcome]] = {
    Check.RING_WHEEL_COMPARISON: _ring_wheel_comparison,
    Check.MAJORITY_SANDWICH: _majority_sandwich,
    Check.HITTING_TIME: _hitting_time,
    Check.WALL_EVENT: _wall_event,
    Check.BINOMIAL_TAIL: _binomial_tail,
    Check.SUBCRITICAL_VERTEX: _subcritical_vertex,
    Check.THREE_STATE: _three_state,
    Check.WALL_MEASURE: _wall_measure,
    Check.DYCK_SPREADING: _dyck_spreading,
    Check.DYCK_COUNT: _dyck_count,
}


def verify_lemma(check: Union[str, Check], params: Optional[Mapping[str, Any]] = None) -> VerificationReport:
    """Runs one check, or every check for :attr:`Check.ALL`.

    Parameters
    ----------
    check: Union[:class:`str`, :class:`Check`]
        The check or its identifier, e.g. ``'lemma8'``.
    params: Mapping[:class:`str`, Any]
        Overrides of the check's defaults. ``r``/``p`` are shorthands for
        single element ``r_values``/``p_values``. With :attr:`Check.ALL`
        the same overrides are passed to every check and unknown names are
        ignored.

    Raises
    ------
    UnknownCheckError
        Unknown check identifier.
    ParameterError
        A parameter the check does not understand.
    """
    check = Check.parse(check)
    if check is Check.ALL:
        checks: List[InequalityCheck] = []
        notes: Dict[str, Any] = {}
        for member, func in _CHECKS.items():
            sub, _ = func(_Params(params))
            for item in sub:
                item.label = f'{member.value}: {item.label}'
            checks.extend(sub)
            notes[member.value] = 'PASS' if all(c.passed for c in sub) else 'FAIL'
        return VerificationReport(check, dict(params or {}), checks, notes)

    resolved = _Params(params)
    checks, notes = _CHECKS[check](resolved)
    unused = resolved.unused()
    if unused:
        raise ParameterError(f'unknown parameters for {check.value}: {", ".join(unused)}')

    report = VerificationReport(check, resolved.resolved, checks, notes)
    _log.info('%s: %s (%d inequalities)', check.value, report.verdict, len(checks))
    return report
