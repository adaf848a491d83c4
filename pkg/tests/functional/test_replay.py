import os
import json

from mock import patch

from qgt.campaign import Theorem1Suite, replay_record
from qgt.inequalities import verdict

from .base import TestBase


def violated():
    return patch.object(Theorem1Suite, 'evaluate',
                        return_value=verdict(2.0, 1.0, -1.0))


class ReplayTest(TestBase):

    def failures(self, *argv):
        directory = self.path('failures')
        with violated():
            self.assertFail('verify', 'theorem1', '--q', '1.5', '--dim', '2',
                            '--trials', '2', '--failures-dir', directory,
                            *argv)
        return [os.path.join(directory, name)
                for name in sorted(os.listdir(directory))]

    def test_reproduced(self):
        path = self.failures()[0]
        with violated():
            stdout, _ = self.run_ok('replay', path)
        self.assertIn('theorem1 q=1.5 dim=2 trial=0:', stdout)
        self.assertIn('violated, reproduced', stdout)

    def test_mismatch(self):
        stdout, _ = self.assertFail('replay', self.failures()[0])
        self.assertIn('MISMATCH', stdout)

    def test_inputs_are_replayed(self):
        path = self.failures()[1]
        with open(path) as reader:
            record = json.load(reader)
        outcome = replay_record(record)
        record['lhs'] = outcome.verdict.lhs
        record['rhs'] = outcome.verdict.rhs
        with open(path, 'w') as writer:
            json.dump(record, writer)
        stdout, _ = self.run_ok('replay', path)
        self.assertIn('trial=1:', stdout)
        self.assertIn('holds, reproduced', stdout)

    def test_whole_report(self):
        out = self.path('report.json')
        self.failures('--out', out)
        stdout, _ = self.assertFail('replay', out)
        self.assertEqual(2, len(stdout.splitlines()))

    def test_bad_files(self):
        self.assertError('replay', self.path('missing.json'))
        broken = self.path('broken.json')
        with open(broken, 'w') as writer:
            writer.write('{"suite": "theorem1"')
        self.assertError('replay', broken)
        unknown = self.path('unknown.json')
        with open(unknown, 'w') as writer:
            json.dump({'suite': 'nope', 'q': 1.5, 'dim': 1, 'trial_index': 0,
                       'seed': 1, 'lhs': 1.0, 'rhs': 1.0}, writer)
        self.assertError('replay', unknown)

    def test_q_out_of_range(self):
        path = self.failures()[0]
        with open(path) as reader:
            record = json.load(reader)
        record['q'] = 5.0
        with open(path, 'w') as writer:
            json.dump(record, writer)
        stderr = self.assertError('replay', path)
        self.assertIn('q must lie in [1, 3]', stderr)
