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


from __future__ import annotations

from typing import Any, List
from bootperc.cli import main

import bootperc
import json
import pathlib
import pytest

GOLDEN = pathlib.Path(__file__).parent / 'golden'

# volatile fields left out of the golden files
VOLATILE = ['elapsed_seconds', 'tool_version']


@pytest.fixture(autouse=True)
def _environment(config: bootperc.GlobalConfig, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.delenv('BOOTPERC_CI', raising=False)
    monkeypatch.delenv('BOOTPERC_THREADS', raising=False)


def _run(tmp_path: pathlib.Path, *argv: str, name: str = 'out.jsonl') -> List[bootperc.ResultRecord]:
    path = tmp_path / name
    assert main([*argv, '--output', str(path)]) == 0
    return bootperc.read_records(path.read_bytes())

def _without_elapsed(records: List[bootperc.ResultRecord]):
    return [r.dump(exclude=['elapsed_seconds']) for r in records]

def test_enumerate_tr(tmp_path: pathlib.Path):
    head, record = _run(tmp_path, 'oracle', 'enumerate-tr', '--r', '3')
    assert head.command == 'manifest'
    assert head.params == {'command': 'oracle', 'oracle': 'enumerate-tr', 'r': 3, 'master_seed': None}
    assert record.params == {'oracle': 'enumerate-tr', 'r': 3}
    assert record.results == {
        'size': 5,
        'words': ['1000111', '1010011', '1010101', '1100011', '1110001'],
    }

def test_output_to_stdout(capsysbinary: pytest.CaptureFixture[bytes]):
    assert main(['oracle', 'tr-bound', '--r', '5']) == 0
    _, record = bootperc.read_records(capsysbinary.readouterr().out)
    assert record.results == {'bound': 24}

def test_oracle_closed_forms(tmp_path: pathlib.Path):
    _, record = _run(tmp_path, 'oracle', 'three-state', '--p-w', '0.25', '--p-s', '0.25', '--p-e', '0.5')
    assert record.results['exact'] == pytest.approx(0.625)
    assert record.results['exact'] > record.results['bound']

    _, record = _run(tmp_path, 'oracle', 'binom-tail', '--r', '1', '--p', '0.5')
    assert record.results['tail'] == pytest.approx(0.25)
    assert (record.results['trials'], record.results['threshold']) == (2, 2)

    _, record = _run(tmp_path, 'oracle', 'classify-block', '--block', '0101', '--r', '1')
    assert record.results == {'class': bootperc.BlockClass.EMPTY.value}

    _, record = _run(tmp_path, 'oracle', 'exact-perc', '--family', 'ring', '--n', '6', '--r', '1', '--p', '1')
    assert record.results['percolation'] == 1.0

def test_binom_tail_needs_sizes(capsys: pytest.CaptureFixture[str]):
    assert main(['oracle', 'binom-tail', '--p', '0.5']) == 1
    assert 'needs --r or both --trials and --threshold' in capsys.readouterr().err

def test_simulate_is_reproducible(tmp_path: pathlib.Path):
    argv = ['simulate', '--family', 'rwheel', '--n', '30', '--r', '2', '--p', '0.4', '--seed', '5']
    first = _run(tmp_path, *argv, name='a.jsonl')
    second = _run(tmp_path, *argv, name='b.jsonl')
    assert _without_elapsed(first) == _without_elapsed(second)

    record = first[1]
    assert record.params == {'family': 'rwheel', 'n': 30, 'r': 2, 'p': 0.4, 'rule': 'strict', 'master_seed': 5}
    assert set(record.results) == {'initial_active', 'active_count', 'rounds', 'percolated', 'hub_active'}
    assert record.results['active_count'] >= record.results['initial_active']

def test_estimate_ignores_thread_count(tmp_path: pathlib.Path, monkeypatch: pytest.MonkeyPatch):
    argv = ['estimate', '--n', '20', '--r', '2', '--p', '0.3', '--trials', '300', '--seed', '11']
    serial = _run(tmp_path, *argv, name='serial.jsonl')
    monkeypatch.setenv('BOOTPERC_THREADS', '3')
    threaded = _run(tmp_path, *argv, name='threaded.jsonl')
    assert _without_elapsed(serial) == _without_elapsed(threaded)

    record = serial[1]
    assert record.params['master_seed'] == 11
    assert record.params['target'] == 'pW'
    assert record.results['ci_low'] <= record.results['estimate'] <= record.results['ci_high']

def test_estimate_without_seed_records_it(tmp_path: pathlib.Path):
    head, record = _run(tmp_path, 'estimate', '--n', '12', '--r', '1', '--p', '0.5', '--trials', '10')
    seed = head.params['master_seed']
    assert isinstance(seed, int) and 0 <= seed <= bootperc.montecarlo.MAX_SEED
    assert record.params['master_seed'] == seed

def test_ci_mode_requires_seed(monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]):
    monkeypatch.setenv('BOOTPERC_CI', '1')
    assert main(['estimate', '--n', '12', '--r', '1', '--p', '0.5']) == 1
    assert '--seed is required when BOOTPERC_CI=1' in capsys.readouterr().err

def test_validation_error(capsys: pytest.CaptureFixture[str]):
    assert main(['estimate', '--n', '5', '--r', '2', '--p', '0.3', '--seed', '1']) == 1
    assert 'n must exceed 2r+1' in capsys.readouterr().err

def test_usage_errors(capsys: pytest.CaptureFixture[str]):
    with pytest.raises(SystemExit) as exc:
        main(['estimate', '--n', '12', '--r', '1'])
    assert exc.value.code == 1

    with pytest.raises(SystemExit) as exc:
        main(['scan', '--n', '12', '--r-values', '1,x', '--p-values', '0.5'])
    assert exc.value.code == 1
    assert 'comma separated list of integers' in capsys.readouterr().err

def test_verify(tmp_path: pathlib.Path, capsys: pytest.CaptureFixture[str]):
    head, record = _run(tmp_path, 'verify', '--lemma', 'lemma8', '--r', '4')
    assert head.params == {'command': 'verify', 'lemma': 'lemma8', 'r': 4, 'master_seed': None}
    assert record.results['verdict'] == 'PASS'
    assert record.results['notes'] == {'tr_size_r4': 14}

    _, record = _run(tmp_path, 'verify', '--lemma', 'lemma5', '--param', 'r_values=[1,2]', '--param', 'p_values=[0.5]')
    assert record.params['r_values'] == [1, 2]
    assert len(record.results['checks']) == 2

    assert main(['verify', '--lemma', 'lemma42']) == 1
    assert "unknown check 'lemma42'" in capsys.readouterr().err

    assert main(['verify', '--lemma', 'lemma7', '--param', 'bogus=1']) == 1
    assert 'unknown parameters for lemma7: bogus' in capsys.readouterr().err

def test_csv_output(tmp_path: pathlib.Path):
    path = tmp_path / 'out.csv'
    assert main(['oracle', 'hitting', '--r', '2', '--p', '0.5', '--format', 'csv', '--output', str(path)]) == 0
    lines = path.read_text(encoding='utf-8').splitlines()
    assert lines[0].startswith('# {')
    assert lines[1].startswith('schema_version,command,params.oracle')
    assert len(lines) == 3

def test_enumeration_guard(tmp_path: pathlib.Path, config: bootperc.GlobalConfig, capsys: pytest.CaptureFixture[str]):
    config.max_tr_radius = 2
    assert main(['oracle', 'enumerate-tr', '--r', '3']) == 1
    assert 'max_tr_radius' in capsys.readouterr().err

    head, record = _run(tmp_path, 'oracle', 'enumerate-tr', '--r', '3', '--accept-cost')
    assert 'max_tr_radius' in head.results['guard_overrides']
    assert head.results['config'] == {'max_tr_radius': 2}
    assert record.results['size'] == 5

def test_scan(tmp_path: pathlib.Path):
    head, *cells = _run(
        tmp_path, 'scan', '--n-per-r', '10', '--r-values', '1,2', '--p-values', '0.2,0.8',
        '--trials', '50', '--seed', '3',
    )
    assert head.params['p_values'] == [0.2, 0.8]
    assert head.params['r_values'] == [1, 2]
    assert head.params['n_per_r'] == 10
    assert head.params['master_seed'] == 3
    assert [c.params['cell'] for c in cells] == [0, 1, 2, 3]
    assert {(c.params['p'], c.params['r'], c.params['n']) for c in cells} == {
        (0.2, 1, 10), (0.8, 1, 10), (0.2, 2, 20), (0.8, 2, 20),
    }

def test_bisect(tmp_path: pathlib.Path):
    _, record = _run(
        tmp_path, 'bisect', '--family', 'rwheel', '--n', '20', '--r', '2', '--trials', '100',
        '--seed', '1', '--target-prob', '0.5', '--tol', '0.05',
    )
    assert 0.0 < record.results['p_hat'] < 1.0
    assert 'finite-n surrogate' in record.results['note']
    assert record.params['target_prob'] == 0.5
    assert 'p' not in record.params

def test_invalid_thread_count(monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]):
    monkeypatch.setenv('BOOTPERC_THREADS', '0')
    assert main(['oracle', 'tr-bound', '--r', '5']) == 1
    err = capsys.readouterr().err
    assert 'worker_threads must be a positive integer' in err
    assert 'Traceback' not in err

def _matches(actual: Any, expected: Any) -> bool:
    if isinstance(expected, dict):
        return isinstance(actual, dict) and actual.keys() == expected.keys() and all(
            _matches(actual[k], v) for k, v in expected.items()
        )
    if isinstance(expected, list):
        return isinstance(actual, list) and len(actual) == len(expected) and all(
            _matches(a, e) for a, e in zip(actual, expected)
        )
    if isinstance(expected, float) and not isinstance(actual, bool):
        return actual == pytest.approx(expected, rel=1e-9, abs=1e-9)
    return type(actual) is type(expected) and actual == expected

@pytest.mark.parametrize(('name', 'argv'), [
    ('oracle_tr_bound', ['oracle', 'tr-bound', '--r', '5']),
    ('oracle_enumerate_tr', ['oracle', 'enumerate-tr', '--r', '3']),
    ('oracle_classify_block', ['oracle', 'classify-block', '--block', '0101', '--r', '1']),
    ('oracle_mu_wall', ['oracle', 'mu-wall', '--length', '3', '--r', '1', '--p', '0.5']),
    ('oracle_mu_spreading', ['oracle', 'mu-spreading', '--length', '3', '--r', '1', '--p', '0.5']),
    ('oracle_block_bound', ['oracle', 'block-bound', '--length', '3', '--r', '1', '--p', '0.5']),
    ('oracle_hitting', ['oracle', 'hitting', '--r', '2', '--p', '0.5']),
    ('oracle_binom_tail', ['oracle', 'binom-tail', '--r', '1', '--p', '0.5']),
    ('oracle_three_state', ['oracle', 'three-state', '--p-w', '0.25', '--p-s', '0.25', '--p-e', '0.5']),
    ('oracle_exact_perc', ['oracle', 'exact-perc', '--family', 'ring', '--n', '6', '--r', '1', '--p', '1']),
    ('simulate', ['simulate', '--family', 'rwheel', '--n', '6', '--r', '1', '--p', '1', '--seed', '9']),
    ('estimate', ['estimate', '--n', '8', '--r', '1', '--p', '1', '--trials', '100', '--seed', '4']),
    ('scan', [
        'scan', '--family', 'rwheel', '--n-per-r', '8', '--r-values', '1', '--p-values', '1',
        '--trials', '100', '--seed', '2',
    ]),
    ('bisect', [
        'bisect', '--n', '6', '--r', '1', '--trials', '20', '--seed', '7',
        '--target-prob', '0.5', '--tol', '1',
    ]),
    ('verify', ['verify', '--lemma', 'theorem9', '--r', '5']),
])
def test_golden_output(tmp_path: pathlib.Path, monkeypatch: pytest.MonkeyPatch, name: str, argv: List[str]):
    monkeypatch.setattr(bootperc.oracles, '_overrides', set())
    records = _run(tmp_path, *argv)
    expected = [json.loads(line) for line in (GOLDEN / f'{name}.jsonl').read_text(encoding='utf-8').splitlines()]
    actual = [r.dump(exclude=VOLATILE) for r in records]
    assert len(actual) == len(expected)
    for got, want in zip(actual, expected):
        assert _matches(got, want), (got, want)
