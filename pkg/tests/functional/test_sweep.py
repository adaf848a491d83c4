from .base import TestBase


class SweepTest(TestBase):

    def test_worked_point(self):
        stdout, _ = self.run_ok('sweep', '--dim', '1', '--eig-range', '1,1',
                                '--q-grid', '1.5,2,2.5')
        lines = stdout.splitlines()
        self.assertEqual('q,lhs,rhs,gap,relative_margin', lines[0])
        self.assertEqual(4, len(lines))
        q, lhs, rhs, gap, _ = (float(i) for i in lines[1].split(','))
        self.assertEqual(1.5, q)
        self.assertAlmostEqual(4.0, lhs, places=13)
        self.assertAlmostEqual(4.125, rhs, places=13)
        self.assertAlmostEqual(0.125, gap, places=13)

    def test_sign_flips_at_two(self):
        stdout, _ = self.run_ok('sweep', '--dim', '3', '--seed', '7',
                                '--q-grid', '1,1.5,1.9,2.1,2.5,3')
        gaps = [float(line.split(',')[3]) for line in stdout.splitlines()[1:]]
        self.assertTrue(all(gap > 0 for gap in gaps[:3]), gaps)
        self.assertTrue(all(gap < 0 for gap in gaps[3:]), gaps)

    def test_out_file(self):
        out = self.path('sweep.csv')
        stdout, _ = self.run_ok('sweep', '--q-grid', '1.5', '--out', out)
        self.assertEqual('', stdout)
        with open(out, newline='') as reader:
            text = reader.read()
        self.assertTrue(text.startswith('q,lhs,rhs,gap,relative_margin\n'))
        self.assertNotIn('\r', text)

    def test_bad_arguments(self):
        self.assertError('sweep', '--dim', '2')
        self.assertError('sweep', '--q-grid', '0.5')
        self.assertError('sweep', '--q-grid', 'a,b')

    def test_side_seeds(self):
        whole, _ = self.run_ok('sweep', '--seed', '7', '--q-grid', '1.5,2.5')
        split, _ = self.run_ok('sweep', '--seed', '1', '--a-seed', '7',
                               '--b-seed', '7', '--q-grid', '1.5,2.5')
        self.assertEqual(whole, split)
        moved, _ = self.run_ok('sweep', '--seed', '7', '--b-seed', '8',
                               '--q-grid', '1.5,2.5')
        self.assertNotEqual(whole, moved)
