import unittest

from mock import patch

from qgt.inequalities import LimitProfile
from qgt.result import render_selftest
from qgt.selftest import (DECOUPLING_Q_GRID, CheckResult,
                          check_decoupling_limit, run_selftest)


class TestDecouplingLimit(unittest.TestCase):

    def test_first_order_decay(self):
        result = check_decoupling_limit(3, 4)
        self.assertEqual('decoupling_limit', result.name)
        self.assertEqual(4 * len(DECOUPLING_Q_GRID), result.cases)
        self.assertTrue(result.passed, result)

    def test_note_names_directions(self):
        result = check_decoupling_limit(3, 2)
        parts = result.note.split(', ')
        self.assertEqual(len(DECOUPLING_Q_GRID), len(parts))
        self.assertEqual('q=1 ', parts[0][:4])
        self.assertIn('q=2 constant', parts)

    def test_not_monotone_fails(self):
        broken = LimitProfile((1e-1, 1e-2), (1e-3, 1e-2), False, 1.0)
        with patch('qgt.selftest.decoupling_limit_profile',
                   return_value=broken):
            result = check_decoupling_limit(3, 1)
        self.assertFalse(result.passed)

    def test_in_run_selftest(self):
        names = [r.name for r in run_selftest(seed=1, trials=2)]
        self.assertEqual('decoupling_limit', names[-1])


class TestRender(unittest.TestCase):

    def test_notes_follow_the_table(self):
        text = render_selftest([CheckResult('plain', 1, 0.0, 1.0),
                                CheckResult('noted', 2, 0.0, 1.0, 'q=2 flat')])
        lines = text.splitlines()
        self.assertEqual(5, len(lines))
        self.assertEqual('', lines[3])
        self.assertEqual('noted: q=2 flat', lines[4])
