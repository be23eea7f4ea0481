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
from bootperc import Check, InequalityCheck, verify_lemma

import bootperc
import pytest


def test_check_parse():
    assert Check.parse('lemma8') is Check.DYCK_SPREADING
    assert Check.parse('LEMMA2') is Check.MAJORITY_SANDWICH
    assert Check.parse(Check.ALL) is Check.ALL

    with pytest.raises(bootperc.UnknownCheckError, match="unknown check 'lemma99'"):
        Check.parse('lemma99')

    with pytest.raises(ValueError):
        verify_lemma('theorem1')

def test_inequality_check():
    check = InequalityCheck('a <= b', Fraction(1, 3), Fraction(1, 2))
    assert check.passed
    assert check.to_dict() == {
        'label': 'a <= b',
        'lhs': 1 / 3,
        'rhs': 0.5,
        'tolerance': 0,
        'strict': False,
        'verdict': 'PASS',
        'exact': '1/3 <= 1/2',
    }

    assert not InequalityCheck('strict', 1.0, 1.0, strict=True).passed
    assert InequalityCheck('tolerated', 1.05, 1.0, 0.1).passed
    assert InequalityCheck('equal', 1.0, 1.0).passed
    assert 'exact' not in InequalityCheck('floats', 0.1, 0.2).to_dict()

def test_majority_sandwich_is_exact():
    report = verify_lemma('lemma2')
    assert report.passed
    assert report.verdict == 'PASS'
    assert report.params == {'n': 12, 'r': 2, 'p': Fraction(3, 10), 'rule': bootperc.Rule.STRICT, 'accept_cost': False}
    assert isinstance(report.notes['mean_x0'], Fraction)
    assert all('exact' in c.to_dict() for c in report.checks)

@pytest.mark.parametrize(('n', 'r'), [(n, r) for r in (1, 2, 3) for n in range(2*r + 2, 13)])
@pytest.mark.parametrize('p', ['0.2', '0.3', '0.4'])
def test_majority_sandwich_grid(n: int, r: int, p: str):
    assert verify_lemma('lemma2', {'n': n, 'r': r, 'p': p}).passed

def test_dyck_checks():
    report = verify_lemma('lemma8', {'r': 4})
    assert report.passed
    assert report.notes == {'tr_size_r4': 14}

    report = verify_lemma('lemma8')
    assert report.passed
    assert [report.notes[f'tr_size_r{r}'] for r in range(1, 7)] == [1, 2, 5, 14, 42, 132]

    report = verify_lemma('theorem9')
    assert report.passed
    assert [(c.lhs, c.rhs) for c in report.checks] == [(24, 42), (2240, 4862)]

def test_closed_form_checks():
    for check in ('lemma5', 'lemma7'):
        report = verify_lemma(check)
        assert report.passed, report.failures()

    block_checks = [c for c in report.checks if c.label.startswith('block bound')]
    assert len(block_checks) == 3
    assert len(report.checks) == 6 + 3
    assert report.notes['block_bound_r1'] == pytest.approx(0.4)
    assert block_checks[0].rhs == pytest.approx(0.625, abs=0.05)

    report = verify_lemma('lemma5', {'r': 12, 'p': 0.25})
    [single] = report.checks
    assert single.lhs <= 1.0
    assert report.params == {'r': 12, 'r_values': [12], 'p': 0.25, 'p_values': [0.25]}

def test_hitting_time_check():
    report = verify_lemma('lemma3', {'r_values': [1, 2, 5], 'runs': 20000, 'seed': 4})
    assert report.passed, report.failures()
    assert len(report.checks) == 3 * 9 + 3

def test_three_state_check():
    report = verify_lemma('lemma6', {'samples': 200, 'sim_points': 2, 'trials': 5000, 'length': 2001})
    assert report.passed, report.failures()
    assert len(report.checks) == 4

def test_ring_wheel_comparison():
    report = verify_lemma('lemma1', {'n': 40, 'trials': 200, 'r': 2, 'p': 0.3})
    assert report.passed, report.failures()
    assert len(report.checks) == 2

def test_wall_event_check():
    report = verify_lemma('corollary4', {'n': 200, 'r': 2, 'p': 0.2, 'trials': 200})
    assert report.passed, report.failures()
    assert report.notes['delta'] == pytest.approx(bootperc.default_delta(2, 0.2))
    assert report.notes['C'] == pytest.approx(8 * 2 / (0.2 * 0.8))

def test_unknown_parameters():
    with pytest.raises(bootperc.ParameterError, match='unknown parameters for lemma7: bogus'):
        verify_lemma('lemma7', {'bogus': 1})

def test_report_results():
    report = verify_lemma('lemma8', {'r': 2})
    results = report.to_results()
    assert results['verdict'] == 'PASS'
    assert len(results['checks']) == 2
    assert results['notes'] == {'tr_size_r2': 2}
    assert report.failures() == []

def test_failing_report():
    report = bootperc.VerificationReport(Check.WALL_MEASURE, {}, [InequalityCheck('broken', 2, 1)], {})
    assert not report.passed
    assert report.verdict == 'FAIL'
    assert [c.label for c in report.failures()] == ['broken']

@pytest.mark.slow
def test_subcritical_vertex():
    report = verify_lemma('theorem6')
    assert report.passed, report.failures()

@pytest.mark.slow
def test_full_suite():
    report = verify_lemma('all')
    assert report.passed, report.failures()
    assert set(report.notes) == {c.value for c in Check if c is not Check.ALL}
    assert all(c.label.split(':')[0] in report.notes for c in report.checks)

def test_default_check_sizes():
    report = verify_lemma('lemma1', {'trials': 50, 'p': 0.3})
    assert report.passed, report.failures()
    assert report.params['n'] == 10000
    assert report.params['r_values'] == [2, 4, 8]
    assert len(report.checks) == 6

    report = verify_lemma('lemma3', {'r_values': [1], 'p_values': [0.3]})
    assert report.passed, report.failures()
    assert report.params['runs'] == 100000
    assert len(report.checks) == 1 + 3

    report = verify_lemma('lemma6', {'samples': 50, 'trials': 2000, 'length': 2001})
    assert report.params['sim_points'] == 5
    assert len(report.checks) == 2 + 5
