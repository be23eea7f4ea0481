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

"""Persistent result records.

JSON Lines is the canonical format: one :class:`ResultRecord` per line,
keys in declaration order. CSV is a flattened export for spreadsheets
and plotting tools.
"""

from __future__ import annotations

from typing import IO, TYPE_CHECKING, Any, Dict, Iterable, List, Optional, Union
from fractions import Fraction
from bootperc import fields
from bootperc.configs import GlobalConfig, SchemaConfig
from bootperc.exceptions import ParameterError
from bootperc.schema import Schema

import bootperc
import csv
import enum
import io
import json
import numpy as np

if TYPE_CHECKING:
    from bootperc.montecarlo import EstimateRecord, TrialPlan
    from bootperc.verification import VerificationReport

__all__ = (
    'SCHEMA_VERSION',
    'ResultRecord',
    'to_builtin',
    'plan_params',
    'write_records',
    'read_records',
    'manifest',
)

SCHEMA_VERSION = 1

# options that only affect scheduling and never the records
_SCHEDULING_OPTIONS = ('worker_threads', 'trial_chunk_size')


def to_builtin(value: Any) -> Any:
    """Converts numpy, fraction and enum values to JSON compatible builtins."""
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, dict):
        return {str(k): to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    return value


class ResultRecord(Schema):
    """The envelope of every line written by the command line tool.

    ``elapsed_seconds`` is the only field that differs between two runs
    with the same inputs.
    """
    schema_version = fields.Integer(default=SCHEMA_VERSION)
    command = fields.String()
    params = fields.Dict(default=lambda _: {})
    results = fields.Dict(default=lambda _: {})
    elapsed_seconds = fields.Float(default=0.0)
    tool_version = fields.String(default=lambda _: bootperc.__version__)

    class Config(SchemaConfig):
        frozen = True

    @classmethod
    def from_estimate(cls, command: str, record: EstimateRecord, **extra_params: Any) -> ResultRecord:
        """Wraps an :class:`EstimateRecord`."""
        return cls({
            'command': command,
            'params': to_builtin({**plan_params(record.plan), **extra_params}),
            'results': {
                'successes': record.successes,
                'estimate': record.estimate,
                'ci_low': record.ci_low,
                'ci_high': record.ci_high,
            },
            'elapsed_seconds': record.elapsed,
        })

    @classmethod
    def from_report(cls, report: VerificationReport, elapsed: float = 0.0) -> ResultRecord:
        """Wraps a :class:`VerificationReport`."""
        return cls({
            'command': 'verify',
            'params': to_builtin({'lemma': report.check.value, **report.params}),
            'results': to_builtin(report.to_results()),
            'elapsed_seconds': elapsed,
        })


def plan_params(plan: TrialPlan) -> Dict[str, Any]:
    """Flattens a trial plan into record parameters."""
    out = {
        'family': plan.topology.family.value,
        'n': plan.topology.n,
        'r': plan.topology.r,
        'p': plan.p,
        'rule': plan.rule.value,
        'target': plan.target.value,
        'trials': plan.trials,
        'confidence': plan.confidence,
        'master_seed': plan.master_seed,
    }
    if plan.block_length is not None:
        out['block_length'] = plan.block_length
    return out


def _flatten(record: ResultRecord) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for key, value in record.dump().items():
        if isinstance(value, dict):
            for sub, item in value.items():
                out[f'{key}.{sub}'] = json.dumps(item, separators=(',', ':')) if isinstance(item, (dict, list)) else item
        else:
            out[key] = value
    return out


def _dumps(record: ResultRecord) -> str:
    return json.dumps(record.dump(), ensure_ascii=False, separators=(',', ':'), allow_nan=False)


def write_records(records: Iterable[ResultRecord], fmt: str = 'jsonl', *, manifest: Optional[ResultRecord] = None) -> bytes:
    """Serializes records to UTF-8 bytes.

    Parameters
    ----------
    records: Iterable[:class:`ResultRecord`]
        The records.
    fmt: :class:`str`
        ``'jsonl'`` or ``'csv'``.
    manifest: Optional[:class:`ResultRecord`]
        A run manifest to put first. In CSV output it is written as a
        single ``#`` comment line holding its JSON form.

    Raises
    ------
    ParameterError
        Unknown format, or CSV records with differing keys.
    """
    records = list(records)
    if fmt == 'jsonl':
        lines = [_dumps(r) + '\n' for r in ([manifest] if manifest is not None else []) + records]
        return ''.join(lines).encode('utf-8')
    if fmt != 'csv':
        raise ParameterError(f'unknown format {fmt!r}, expected jsonl or csv')

    buffer = io.StringIO(newline='')
    if manifest is not None:
        buffer.write('# ' + _dumps(manifest) + '\r\n')
    if records:
        rows = [_flatten(r) for r in records]
        header = list(rows[0])
        for index, row in enumerate(rows[1:], start=1):
            if list(row) != header:
                raise ParameterError(f'record {index} has different keys than record 0; csv needs homogeneous records')
        writer = csv.writer(buffer)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row.values())
    return buffer.getvalue().encode('utf-8')


def read_records(source: Union[bytes, str, IO[Any]]) -> List[ResultRecord]:
    """Parses JSON Lines produced by :func:`write_records`."""
    if hasattr(source, 'read'):
        source = source.read()  # type: ignore
    if isinstance(source, bytes):
        source = source.decode('utf-8')
    # str.splitlines would also split on U+2028 and friends, which json leaves unescaped
    return [ResultRecord(json.loads(line)) for line in source.split('\n') if line.strip()]  # type: ignore


def manifest(
    command: str,
    params: Dict[str, Any],
    master_seed: Optional[int],
    guard_overrides: Iterable[str] = (),
    config: Optional[GlobalConfig] = None,
) -> ResultRecord:
    """Builds the manifest record that heads every output.

    The manifest records the resolved parameters, the master seed, the
    guards bypassed with ``accept_cost`` and any non-default configuration
    that can affect results.
    """
    options = config.overrides() if config is not None else {}
    for name in _SCHEDULING_OPTIONS:
        options.pop(name, None)
    return ResultRecord({
        'command': 'manifest',
        'params': to_builtin({'command': command, **params, 'master_seed': master_seed}),
        'results': {
            'guard_overrides': sorted(guard_overrides),
            'config': to_builtin(options),
        },
    })
