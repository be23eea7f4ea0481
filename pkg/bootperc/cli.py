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

"""The ``bootperc`` command line tool.

Every subcommand writes a manifest record followed by its result records to
standard output (or ``--output``). Exit status is 0 on success, 1 on usage
or validation errors and 2 when a verification check fails.
"""

from __future__ import annotations

from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple
from bootperc import configs, oracles
from bootperc.dynamics import Configuration, run_to_fixpoint
from bootperc.exceptions import BootpercException, ValidationError
from bootperc.montecarlo import (
    MAX_SEED,
    TrialPlan,
    bisect_threshold,
    derive_trial_seed,
    run_estimate,
    scan_grid,
)
from bootperc.records import ResultRecord, manifest, plan_params, to_builtin, write_records
from bootperc.topology import Rule, TopologySpec, build_topology
from bootperc.verification import Check, verify_lemma

import argparse
import json
import logging
import sys
import time
import numpy as np
import bootperc

__all__ = (
    'build_parser',
    'main',
)

_log = logging.getLogger(__name__)

# commands that refuse entropy seeding in CI mode
_SEEDED_COMMANDS = ('estimate', 'scan', 'bisect')

_BISECT_NOTE = 'finite-n surrogate: least p whose estimated success probability reaches target_prob'


class _Run(NamedTuple):
    params: Dict[str, Any]
    master_seed: Optional[int]
    records: List[ResultRecord]
    failed: bool = False


class _UsageError(BootpercException):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore
        self.exit(1, f'{self.prog}: error: {message}\n')


def _float_list(value: str) -> List[float]:
    try:
        values = [float(v) for v in value.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected a comma separated list of numbers, got {value!r}') from None
    if not values:
        raise argparse.ArgumentTypeError('expected at least one value')
    return values


def _int_list(value: str) -> List[int]:
    try:
        values = [int(v) for v in value.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected a comma separated list of integers, got {value!r}') from None
    if not values:
        raise argparse.ArgumentTypeError('expected at least one value')
    return values


def _key_value(value: str) -> Tuple[str, Any]:
    key, sep, raw = value.partition('=')
    if not sep or not key:
        raise argparse.ArgumentTypeError(f'expected KEY=VALUE, got {value!r}')
    try:
        parsed = json.loads(raw)
    except ValueError:
        parsed = raw
    return key, parsed


def build_parser() -> argparse.ArgumentParser:
    """Builds the argument parser of the ``bootperc`` tool."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=('jsonl', 'csv'), default='jsonl', help='output format')
    common.add_argument('--output', metavar='PATH', help='write records to PATH instead of stdout')
    common.add_argument('-v', '--verbose', action='count', default=0, help='log to stderr (repeat for debug)')
    common.add_argument('--accept-cost', action='store_true', help='bypass exhaustive enumeration guards')

    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument('--family', choices=('ring', 'rwheel'), default='ring')
    graph.add_argument('--n', type=int)
    graph.add_argument('--r', type=int)
    graph.add_argument('--rule', choices=('strict', 'simple'), default='strict')

    plan = argparse.ArgumentParser(add_help=False)
    plan.add_argument('--target', default='pW', help='pW, pR, EX0 or muS')
    plan.add_argument('--trials', type=int, default=10000)
    plan.add_argument('--confidence', type=float, default=0.95)
    plan.add_argument('--block-length', type=int)
    plan.add_argument('--seed', type=int)

    parser = _ArgumentParser(prog='bootperc', description='Majority bootstrap percolation on rings and r-wheels.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {bootperc.__version__}')
    commands = parser.add_subparsers(dest='command', required=True, parser_class=_ArgumentParser)

    sim = commands.add_parser('simulate', parents=[common, graph], help='run one configuration to its fixed point')
    sim.add_argument('--p', type=float, required=True)
    sim.add_argument('--seed', type=int)

    est = commands.add_parser('estimate', parents=[common, graph, plan], help='Monte Carlo estimate')
    est.add_argument('--p', type=float, required=True)

    scan = commands.add_parser('scan', parents=[common, graph, plan], help='estimates over a (p, r) grid')
    scan.add_argument('--p-values', type=_float_list, required=True)
    scan.add_argument('--r-values', type=_int_list, required=True)
    scan.add_argument('--n-per-r', type=int, help='ring length per unit radius (default 2000 when --n is absent)')

    bis = commands.add_parser('bisect', parents=[common, graph, plan], help='bisect for a finite-n threshold')
    bis.add_argument('--target-prob', type=float, default=0.95)
    bis.add_argument('--p-lo', type=float, default=0.0)
    bis.add_argument('--p-hi', type=float, default=1.0)
    bis.add_argument('--tol', type=float, default=1e-3)

    oracle = commands.add_parser('oracle', help='exact and closed form computations')
    kinds = oracle.add_subparsers(dest='kind', required=True, parser_class=_ArgumentParser)

    tr = kinds.add_parser('enumerate-tr', parents=[common])
    tr.add_argument('--r', type=int, required=True)
    block = kinds.add_parser('classify-block', parents=[common])
    block.add_argument('--block', required=True)
    block.add_argument('--r', type=int, required=True)
    for name in ('mu-wall', 'mu-spreading', 'block-bound'):
        mu = kinds.add_parser(name, parents=[common])
        mu.add_argument('--length', type=int, required=True)
        mu.add_argument('--r', type=int, required=True)
        mu.add_argument('--p', type=float, required=True)
    hitting = kinds.add_parser('hitting', parents=[common])
    hitting.add_argument('--r', type=int, required=True)
    hitting.add_argument('--p', type=float, required=True)
    three = kinds.add_parser('three-state', parents=[common])
    three.add_argument('--p-w', type=float, required=True)
    three.add_argument('--p-s', type=float, required=True)
    three.add_argument('--p-e', type=float, required=True)
    tail = kinds.add_parser('binom-tail', parents=[common])
    tail.add_argument('--r', type=int, help='shorthand for --trials 2r --threshold r+1')
    tail.add_argument('--trials', type=int)
    tail.add_argument('--threshold', type=int)
    tail.add_argument('--p', type=float, required=True)
    perc = kinds.add_parser('exact-perc', parents=[common, graph])
    perc.add_argument('--p', type=float, required=True)
    bound = kinds.add_parser('tr-bound', parents=[common])
    bound.add_argument('--r', type=int, required=True)

    ver = commands.add_parser('verify', parents=[common], help='numerical checks of the percolation inequalities')
    ver.add_argument('--lemma', default='all', help=', '.join(c.value for c in Check))
    ver.add_argument('--r', type=int)
    ver.add_argument('--p', type=float)
    ver.add_argument('--n', type=int)
    ver.add_argument('--trials', type=int)
    ver.add_argument('--seed', type=int)
    ver.add_argument('--param', type=_key_value, action='append', default=[], metavar='KEY=VALUE',
                     help='override a check parameter (JSON values)')

    return parser


def _drop_none(data: Dict[str, Any]) -> Dict[str, Any]:
    return {k: v for k, v in data.items() if v is not None}


def _topology_data(args: argparse.Namespace) -> Dict[str, Any]:
    return _drop_none({'family': args.family, 'n': args.n, 'r': args.r})


def _master_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    if configs.config.ci_mode and args.command in _SEEDED_COMMANDS:
        raise _UsageError('--seed is required when BOOTPERC_CI=1')
    return int(np.random.SeedSequence().entropy) & MAX_SEED


def _plan(args: argparse.Namespace, seed: int, **overrides: Any) -> TrialPlan:
    data = _drop_none({
        'topology': _topology_data(args),
        'rule': args.rule,
        'p': getattr(args, 'p', None),
        'target': args.target,
        'trials': args.trials,
        'master_seed': seed,
        'confidence': args.confidence,
        'block_length': args.block_length,
    })
    data.update(overrides)
    return TrialPlan(data)


def _simulate(args: argparse.Namespace) -> _Run:
    seed = _master_seed(args)
    started = time.perf_counter()
    spec = TopologySpec(_topology_data(args))
    TrialPlan({'topology': spec, 'p': args.p, 'trials': 1, 'master_seed': seed})  # validates p and the seed
    topology = build_topology(spec)

    # same draw as trial 0 of an estimate with this seed
    rng = np.random.default_rng(derive_trial_seed(seed, 0))
    initial = Configuration(rng.random(topology.vertex_count) < args.p)
    result = run_to_fixpoint(topology, initial, Rule(args.rule))

    params = {**spec.dump(), 'p': args.p, 'rule': args.rule, 'master_seed': seed}
    record = ResultRecord({
        'command': 'simulate',
        'params': params,
        'results': {
            'initial_active': initial.active_count(),
            'active_count': result.active_count,
            'rounds': result.rounds,
            'percolated': result.percolated,
            'hub_active': result.hub_active,
        },
        'elapsed_seconds': time.perf_counter() - started,
    })
    return _Run(params, seed, [record])


def _estimate(args: argparse.Namespace) -> _Run:
    seed = _master_seed(args)
    plan = _plan(args, seed)
    record = ResultRecord.from_estimate('estimate', run_estimate(plan))
    return _Run(plan_params(plan), seed, [record])


def _scan(args: argparse.Namespace) -> _Run:
    seed = _master_seed(args)
    n_per_r = args.n_per_r
    if n_per_r is None and args.n is None:
        n_per_r = 2000
    r_first = args.r_values[0]
    topology = _topology_data(args)
    topology['r'] = r_first
    if n_per_r is not None:
        topology['n'] = n_per_r * r_first

    base = _plan(args, seed, topology=topology, p=args.p_values[0])
    cells = scan_grid(base, args.p_values, args.r_values, n_per_r=n_per_r)
    records = [ResultRecord.from_estimate('scan', cell, cell=index) for index, cell in enumerate(cells)]
    params = {
        **plan_params(base),
        'p_values': args.p_values,
        'r_values': args.r_values,
        'n_per_r': n_per_r,
    }
    for key in ('p', 'r', 'master_seed'):
        params.pop(key)
    return _Run(params, seed, records)


def _bisect(args: argparse.Namespace) -> _Run:
    seed = _master_seed(args)
    started = time.perf_counter()
    plan = _plan(args, seed, p=args.p_lo)
    p_hat = bisect_threshold(plan, args.target_prob, args.p_lo, args.p_hi, args.tol)

    params = plan_params(plan)
    params.pop('p')
    params.update(target_prob=args.target_prob, p_lo=args.p_lo, p_hi=args.p_hi, tol=args.tol)
    record = ResultRecord({
        'command': 'bisect',
        'params': params,
        'results': {'p_hat': p_hat, 'note': _BISECT_NOTE},
        'elapsed_seconds': time.perf_counter() - started,
    })
    return _Run(params, seed, [record])


def _oracle_results(args: argparse.Namespace) -> Dict[str, Any]:
    kind, accept_cost = args.kind, args.accept_cost
    if kind == 'enumerate-tr':
        words = sorted(oracles.enumerate_tr(args.r, accept_cost=accept_cost))
        return {'size': len(words), 'words': words}
    if kind == 'classify-block':
        return {'class': oracles.classify_block(oracles.BlockWord(args.block, args.r)).value}
    if kind == 'mu-wall':
        return {'probability': oracles.mu_wall_exact(args.length, args.r, args.p)}
    if kind == 'mu-spreading':
        return {'probability': oracles.mu_spreading_exact(args.length, args.r, args.p, accept_cost=accept_cost)}
    if kind == 'block-bound':
        return {'bound': oracles.block_activation_lower_bound(args.length, args.r, args.p, accept_cost=accept_cost)}
    if kind == 'hitting':
        return {'expectation': oracles.markov_hitting_expectation(args.r, args.p)}
    if kind == 'three-state':
        params = oracles.ThreeStateParams({'p_w': args.p_w, 'p_s': args.p_s, 'p_e': args.p_e})
        exact, bound = oracles.three_state_activation(params)
        return {'exact': exact, 'bound': bound}
    if kind == 'binom-tail':
        trials, threshold = args.trials, args.threshold
        if args.r is not None:
            trials = 2 * args.r if trials is None else trials
            threshold = args.r + 1 if threshold is None else threshold
        if trials is None or threshold is None:
            raise _UsageError('binom-tail needs --r or both --trials and --threshold')
        return {'tail': oracles.binomial_tail(trials, args.p, threshold), 'trials': trials, 'threshold': threshold}
    if kind == 'exact-perc':
        topology = build_topology(TopologySpec(_topology_data(args)))
        outcomes = oracles.enumerate_outcomes(topology, Rule(args.rule), accept_cost=accept_cost)
        return {event: outcomes.probability(event, args.p) for event in outcomes.EVENTS}
    if kind == 'tr-bound':
        return {'bound': oracles.tr_lower_bound(args.r)}
    raise _UsageError(f'unknown oracle {kind!r}')  # pragma: no cover


def _oracle(args: argparse.Namespace) -> _Run:
    started = time.perf_counter()
    skip = {'command', 'kind', 'format', 'output', 'verbose', 'accept_cost'}
    params = {'oracle': args.kind, **_drop_none({k: v for k, v in vars(args).items() if k not in skip})}
    record = ResultRecord({
        'command': 'oracle',
        'params': params,
        'results': to_builtin(_oracle_results(args)),
        'elapsed_seconds': time.perf_counter() - started,
    })
    return _Run(params, None, [record])


def _verify(args: argparse.Namespace) -> _Run:
    started = time.perf_counter()
    params: Dict[str, Any] = _drop_none({'r': args.r, 'p': args.p, 'n': args.n, 'trials': args.trials, 'seed': args.seed})
    params.update(dict(args.param))
    if args.accept_cost:
        params['accept_cost'] = True

    report = verify_lemma(args.lemma, params)
    record = ResultRecord.from_report(report, time.perf_counter() - started)
    for failure in report.failures():
        _log.warning('FAIL %s: lhs=%s rhs=%s tolerance=%s', failure.label, failure.lhs, failure.rhs, failure.tolerance)
    return _Run({'lemma': report.check.value, **params}, args.seed, [record], failed=not report.passed)


_COMMANDS: Dict[str, Callable[[argparse.Namespace], _Run]] = {
    'simulate': _simulate,
    'estimate': _estimate,
    'scan': _scan,
    'bisect': _bisect,
    'oracle': _oracle,
    'verify': _verify,
}


def _configure_logging(verbosity: int) -> None:
    if verbosity <= 0:
        return
    level = logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def _fail(message: str) -> int:
    print(f'bootperc: error: {message.splitlines()[0] if message else "unknown error"}', file=sys.stderr)
    return 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Runs the tool and returns its exit status."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)

    try:
        env = configs.GlobalConfig.from_env()
    except TypeError as err:
        return _fail(str(err))
    configs.config.worker_threads = env.worker_threads
    configs.config.ci_mode = env.ci_mode

    try:
        run = _COMMANDS[args.command](args)
    except ValidationError as err:
        return _fail(err.first_message())
    except BootpercException as err:
        return _fail(str(err))

    header = manifest(args.command, run.params, run.master_seed, oracles.guard_overrides(), configs.config)
    payload = write_records(run.records, args.format, manifest=header)
    if args.output:
        with open(args.output, 'wb') as fp:
            fp.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    return 2 if run.failed else 0
