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

from fractions import Fraction
from hypothesis import given, strategies as st

import bootperc
import csv
import io
import json
import numpy as np
import pytest


def _record(**results: object) -> bootperc.ResultRecord:
    return bootperc.ResultRecord({
        'command': 'estimate',
        'params': {'family': 'ring', 'n': 12, 'r': 2},
        'results': results,
        'elapsed_seconds': 0.25,
    })

def test_to_builtin():
    value = {
        'rule': bootperc.Rule.SIMPLE,
        'p': Fraction(1, 4),
        'count': np.int64(3),
        'mean': np.float64(0.5),
        'row': np.array([1, 0, 1]),
        'pair': (1, 2),
        3: 'key',
    }
    assert bootperc.to_builtin(value) == {
        'rule': 'simple',
        'p': 0.25,
        'count': 3,
        'mean': 0.5,
        'row': [1, 0, 1],
        'pair': [1, 2],
        '3': 'key',
    }
    assert type(bootperc.to_builtin(np.int64(3))) is int

def test_result_record_defaults():
    record = bootperc.ResultRecord({'command': 'estimate'})
    assert record.schema_version == bootperc.SCHEMA_VERSION
    assert record.params == {}
    assert record.results == {}
    assert record.elapsed_seconds == 0.0
    assert record.tool_version == bootperc.__version__

    with pytest.raises(bootperc.FrozenError):
        record.command = 'simulate'

    with pytest.raises(bootperc.ValidationError, match='unsupported type set'):
        bootperc.ResultRecord({'command': 'estimate', 'results': {'vertices': {1, 2}}})

def test_jsonl_roundtrip_with_manifest():
    head = bootperc.manifest('estimate', {'n': 12}, 7)
    records = [_record(estimate=0.5), _record(estimate=0.75)]
    data = bootperc.write_records(records, 'jsonl', manifest=head)

    lines = data.decode('utf-8').splitlines()
    assert len(lines) == 3
    assert json.loads(lines[0])['command'] == 'manifest'
    assert list(json.loads(lines[1])) == ['schema_version', 'command', 'params', 'results', 'elapsed_seconds', 'tool_version']

    parsed = bootperc.read_records(data)
    assert parsed[0] == head
    assert parsed[1:] == records
    assert bootperc.read_records(io.BytesIO(data)) == parsed
    assert bootperc.read_records(data.decode('utf-8') + '\n\n') == parsed

def test_write_empty():
    assert bootperc.write_records([], 'jsonl') == b''
    assert bootperc.write_records([], 'csv') == b''

def test_csv_export():
    head = bootperc.manifest('estimate', {'n': 12}, 7)
    data = bootperc.write_records([_record(estimate=0.5, path=[1, 2])], 'csv', manifest=head).decode('utf-8')

    first, rest = data.split('\r\n', 1)
    assert first.startswith('# ')
    assert bootperc.ResultRecord(json.loads(first[2:])) == head

    rows = list(csv.reader(io.StringIO(rest)))
    assert rows[0] == [
        'schema_version', 'command', 'params.family', 'params.n', 'params.r',
        'results.estimate', 'results.path', 'elapsed_seconds', 'tool_version',
    ]
    assert rows[1] == ['1', 'estimate', 'ring', '12', '2', '0.5', '[1,2]', '0.25', bootperc.__version__]

def test_write_records_errors():
    with pytest.raises(bootperc.ParameterError, match="unknown format 'xml'"):
        bootperc.write_records([_record(estimate=0.5)], 'xml')

    with pytest.raises(bootperc.ParameterError, match='record 1 has different keys than record 0'):
        bootperc.write_records([_record(estimate=0.5), _record(successes=3)], 'csv')

    with pytest.raises(ValueError):
        bootperc.write_records([_record(estimate=float('nan'))], 'jsonl')

def test_manifest_drops_scheduling_options():
    config = bootperc.GlobalConfig(worker_threads=4, trial_chunk_size=64, max_block_length=30)
    head = bootperc.manifest('scan', {'r_values': [1, 2]}, None, ['max_tr_radius'], config)
    assert head.command == 'manifest'
    assert head.params == {'command': 'scan', 'r_values': [1, 2], 'master_seed': None}
    assert head.results == {'guard_overrides': ['max_tr_radius'], 'config': {'max_block_length': 30}}

    head = bootperc.manifest('scan', {}, 1)
    assert head.results == {'guard_overrides': [], 'config': {}}

def test_record_from_estimate():
    plan = bootperc.TrialPlan({
        'topology': {'family': 'rwheel', 'n': 10, 'r': 1},
        'p': 0.5,
        'trials': 50,
        'master_seed': 3,
    })
    estimate = bootperc.run_estimate(plan)
    record = bootperc.ResultRecord.from_estimate('estimate', estimate, note='x')

    assert record.command == 'estimate'
    assert record.params['family'] == 'rwheel'
    assert record.params['master_seed'] == 3
    assert record.params['note'] == 'x'
    assert 'block_length' not in record.params
    assert record.results == {
        'successes': estimate.successes,
        'estimate': estimate.estimate,
        'ci_low': estimate.ci_low,
        'ci_high': estimate.ci_high,
    }
    assert record.elapsed_seconds == estimate.elapsed

def test_record_from_report():
    report = bootperc.verify_lemma('lemma8', {'r': 3})
    record = bootperc.ResultRecord.from_report(report, elapsed=1.5)
    assert record.command == 'verify'
    assert record.params['lemma'] == 'lemma8'
    assert record.results['verdict'] == 'PASS'
    assert record.results['notes'] == {'tr_size_r3': 5}
    assert record.elapsed_seconds == 1.5

_json_scalars = st.one_of(
    st.none(),
    st.booleans(),
    st.integers(-(2**63), 2**63),
    st.floats(allow_nan=False, allow_infinity=False),
    st.text(max_size=8),
)
_json_values = st.recursive(
    _json_scalars,
    lambda inner: st.lists(inner, max_size=4) | st.dictionaries(st.text(max_size=6), inner, max_size=4),
    max_leaves=12,
)

@given(results=st.dictionaries(st.text(max_size=6), _json_values, max_size=6))
def test_jsonl_preserves_results(results: dict):
    record = bootperc.ResultRecord({'command': 'estimate', 'results': results})
    [parsed] = bootperc.read_records(bootperc.write_records([record]))
    assert parsed.results == results
    assert list(parsed.results) == list(results)
