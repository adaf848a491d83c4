from .base import TestBase


class SelftestTest(TestBase):

    def test_all_checks_pass(self):
        stdout, _ = self.run_ok('selftest', '--trials', '5', '--seed', '1')
        table, notes = stdout.split('\n\n')
        lines = table.splitlines()
        self.assertTrue(lines[0].startswith('check'))
        names = [line.split()[0] for line in lines[1:]]
        self.assertEqual(['frechet_finite_difference', 'trace_identity',
                          'scalar_oracle', 'euler_relation',
                          'phi_derivative_finite_difference',
                          'phi_q1_continuity', 'entropy_q1_limit',
                          'decoupling_limit'], names)
        self.assertTrue(all(line.endswith(' ok') for line in lines[1:]))
        self.assertNotIn('FAILED', stdout)
        self.assertTrue(notes.startswith('decoupling_limit: q=1 '))
        self.assertIn('q=2 constant', notes)
