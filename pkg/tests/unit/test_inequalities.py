import math
import unittest

import numpy as np
from mock import patch

from qgt.conf import settings
from qgt.deformed import maximally_mixed, random_density
from qgt.functionals import (SUB, FunctionalPoint, carlen_lieb,
                             make_isometry_family, phi)
from qgt.inequalities import (CrossCheckError, DecouplingParameter,
                              check_carlen_lieb_concavity,
                              check_classical_gt, check_concavity,
                              check_corollary6, check_differential_inequality,
                              check_entropy_forms, check_euler_relation,
                              check_homogeneity, check_phi_concavity,
                              check_phi_with_l_concavity, check_reduced_pair,
                              check_theorem1, corollary6_rhs, curvature,
                              decoupled_bound, decoupled_rhs,
                              decoupling_limit_check, decoupling_limit_profile,
                              decoupling_monotonicity, derivative_cross_check,
                              directional_derivative_phi, equality_verdict,
                              phi_finite_difference, theorem1_scalar_sides,
                              theorem1_sides, verdict)
from qgt.spectral import (RandomEnsembleSpec, SymmetricMatrix, random_pd,
                          random_symmetric, trace)


Q_GRID = (1.0, 1.1, 1.5, 1.9, 2.0, 2.1, 2.5, 3.0)


def pd(dim, seed, low=0.05, high=20.0):
    return random_pd(RandomEnsembleSpec(dim, (low, high), seed))


def point(k, dim, seed, low=0.05, high=20.0):
    return FunctionalPoint(pd(dim, seed * 100 + i, low, high)
                           for i in range(k))


class TestVerdict(unittest.TestCase):

    def test_holds(self):
        v = verdict(1.0, 2.0, 1.0)
        self.assertTrue(v.holds)
        self.assertEqual(2.0, v.scale)
        self.assertEqual(0.5, v.relative_margin)
        self.assertEqual(2e-9, v.tol)

    def test_slack(self):
        self.assertTrue(verdict(0.0, 0.0, -0.5e-9).holds)
        self.assertFalse(verdict(0.0, 0.0, -2e-9).holds)
        self.assertTrue(verdict(1e6, 1e6, -1e-4).holds)
        self.assertFalse(verdict(1e6, 1e6, -1e-4, 1e-12).holds)

    def test_scale_aware(self):
        big = verdict(1e6, 1e6, -5e-4)
        self.assertEqual(1e6, big.scale)
        self.assertTrue(big.holds)

    def test_equality(self):
        v = equality_verdict(3.0, 3.0 + 1e-12)
        self.assertTrue(v.holds)
        self.assertLessEqual(v.gap, 0.0)
        self.assertFalse(equality_verdict(3.0, 3.1).holds)


class TestTheorem1(unittest.TestCase):

    def test_scalar_worked_point(self):
        self.assertEqual((4.0, 4.125), theorem1_scalar_sides(1.0, 1.0, 1.5))
        v = check_theorem1([[1.0]], [[1.0]], 1.5)
        self.assertAlmostEqual(4.0, v.lhs, places=13)
        self.assertAlmostEqual(4.125, v.rhs, places=13)
        self.assertAlmostEqual(0.125, v.gap, places=13)
        self.assertTrue(v.holds)

    def test_scalar_oracle(self):
        points = (0.05, 0.5, 1.0, 3.0, 20.0)
        for q in (1.0, 1.5, 2.0, 2.5):
            for a in points:
                for b in points:
                    v = check_theorem1([[a]], [[b]], q)
                    lhs, rhs = theorem1_scalar_sides(a, b, q)
                    self.assertLessEqual(abs(v.lhs - lhs), 1e-12 * lhs)
                    self.assertLessEqual(abs(v.rhs - rhs), 1e-12 * rhs)

    def test_q2_equality(self):
        for seed in range(20):
            a = pd(1 + seed % 8, seed)
            b = pd(a.dim, seed + 1000)
            lhs, rhs = theorem1_sides(a, b, 2.0)
            expected = trace(a) + trace(b) + a.dim
            scale = max(1.0, abs(lhs), abs(rhs))
            self.assertLessEqual(abs(lhs - rhs), 1e-10 * scale)
            self.assertLessEqual(abs(lhs - expected), 1e-10 * scale)

    def test_holds_on_grid(self):
        for q in Q_GRID:
            for seed in range(25):
                a = pd(1 + seed % 5, seed)
                b = pd(a.dim, seed + 500)
                v = check_theorem1(a, b, q)
                self.assertTrue(v.holds, (q, seed, v))

    def test_orientation(self):
        a = SymmetricMatrix([[1.0]])
        low = check_theorem1(a, a, 1.5)
        high = check_theorem1(a, a, 2.5)
        self.assertEqual(low.rhs - low.lhs, low.gap)
        self.assertEqual(high.lhs - high.rhs, high.gap)
        self.assertTrue(high.holds)

    def test_classical_commuting(self):
        a = np.diag([0.5, 2.0, 7.0])
        b = np.diag([3.0, 0.1, 1.0])
        v = check_theorem1(a, b, 1.0)
        self.assertLessEqual(abs(v.gap), 1e-10 * v.scale)

    def test_continuity_across_two(self):
        a = pd(3, 1, 0.5, 5.0)
        b = pd(3, 2, 0.5, 5.0)
        below = [check_theorem1(a, b, 2.0 - d).gap for d in (1e-2, 1e-4)]
        above = [check_theorem1(a, b, 2.0 + d).gap for d in (1e-2, 1e-4)]
        self.assertLess(abs(below[1]), abs(below[0]))
        self.assertLess(abs(above[1]), abs(above[0]))


class TestClassicalGoldenThompson(unittest.TestCase):

    def test_b_zero(self):
        v = check_classical_gt(random_symmetric(3, 1), np.zeros((3, 3)))
        self.assertLessEqual(abs(v.gap), 1e-10 * v.scale)

    def test_commuting(self):
        v = check_classical_gt(np.diag([-1.0, 0.5]), np.diag([2.0, -3.0]))
        self.assertLessEqual(abs(v.gap), 1e-10 * v.scale)

    def test_strict(self):
        v = check_classical_gt([[0.0, 1.0], [1.0, 0.0]], np.diag([1.0, -1.0]))
        self.assertGreater(v.gap, 1e-3)
        self.assertTrue(v.holds)

    def test_arbitrary_symmetric(self):
        for seed in range(100):
            dim = 1 + seed % 8
            v = check_classical_gt(random_symmetric(dim, seed),
                                   random_symmetric(dim, seed + 10 ** 6))
            self.assertTrue(v.holds, (seed, v))


class TestDifferential(unittest.TestCase):

    def test_derivative_matches_difference(self):
        for q in (1.0, 1.5, 2.0, 2.5, 3.0):
            family = make_isometry_family(2, 3, 8)
            x = point(2, 3, 1, 0.5, 5.0)
            h = point(2, 3, 2, 0.5, 5.0)
            exact = directional_derivative_phi(family, x, h, q)
            estimate = phi_finite_difference(family, x, h, q)
            self.assertLessEqual(abs(exact - estimate),
                                 1e-6 * max(1.0, abs(exact)))

    def test_euler(self):
        for q in Q_GRID:
            family = make_isometry_family(2, 3, 4)
            x = point(2, 3, 4)
            self.assertTrue(check_euler_relation(family, x, q, 1e-8).holds)
            v = check_differential_inequality(family, x, x, q, 1e-8)
            self.assertLessEqual(abs(v.gap), 1e-8 * v.scale)

    def test_q2_equality(self):
        family = make_isometry_family(2, 4, 5)
        v = check_differential_inequality(family, point(2, 4, 1),
                                          point(2, 4, 2), 2.0)
        self.assertLessEqual(abs(v.gap), 1e-9 * v.scale)

    def test_holds(self):
        for q in Q_GRID:
            for seed in range(10):
                family = make_isometry_family(2, 3, seed)
                v = check_differential_inequality(
                    family, point(2, 3, seed), point(2, 3, seed + 50), q,
                    1e-8)
                self.assertTrue(v.holds, (q, seed, v))

    def test_cross_check(self):
        family = make_isometry_family(2, 3, 6)
        x = point(2, 3, 6)
        h = point(2, 3, 7)
        for q in Q_GRID:
            self.assertLessEqual(derivative_cross_check(family, x, h, q),
                                 settings.DERIVATIVE_CROSS_CHECK_TOLERANCE)

    def test_cross_check_rejects_a_wrong_derivative(self):
        family = make_isometry_family(2, 3, 6)
        x = point(2, 3, 6)
        h = point(2, 3, 7)
        wrong = directional_derivative_phi(family, x, h, 1.5) * 1.01
        with patch('qgt.inequalities.directional_derivative_phi',
                   return_value=wrong):
            self.assertRaises(CrossCheckError, check_differential_inequality,
                              family, x, h, 1.5)
            v = check_differential_inequality(family, x, h, 1.5,
                                              cross_check=False)
        self.assertEqual(wrong, v.lhs)


class TestCorollary6(unittest.TestCase):

    def test_b_equals_a(self):
        family = make_isometry_family(2, 3, 3)
        a = point(2, 3, 3)
        for q in Q_GRID:
            v = check_corollary6(family, a, a, q)
            self.assertLessEqual(abs(v.gap), 1e-9 * v.scale)

    def test_q2_equality(self):
        family = make_isometry_family(2, 3, 6)
        a = point(2, 3, 1)
        b = point(2, 3, 2)
        self.assertAlmostEqual(phi(family, b, 2.0),
                               corollary6_rhs(family, a, b, 2.0),
                               delta=1e-9 * phi(family, b, 2.0))

    def test_holds(self):
        for q in (1.0, 1.3, 1.7, 2.0, 2.3, 2.7, 3.0):
            for seed in range(10):
                family = make_isometry_family(2, 3, seed)
                v = check_corollary6(family, point(2, 3, seed),
                                     point(2, 3, seed + 70), q)
                self.assertTrue(v.holds, (q, seed, v))

    def test_reduced_pair(self):
        for q in (1.0, 1.5, 2.0, 2.5, 3.0):
            for seed in range(10):
                family = make_isometry_family(2, 3, seed)
                v = check_reduced_pair(family, point(2, 3, seed), q)
                self.assertTrue(v.holds, (q, seed, v))

    def test_reduced_pair_needs_two(self):
        family = make_isometry_family(3, 2, 1)
        self.assertRaises(ValueError, check_reduced_pair, family,
                          point(3, 2, 1), 1.5)


class TestConcavity(unittest.TestCase):

    def test_generic_segment(self):
        x = FunctionalPoint([np.diag([1.0])])
        y = FunctionalPoint([np.diag([9.0])])

        def root(p):
            return math.sqrt(p[0].entries[0, 0])
        self.assertTrue(check_concavity(root, x, y, 0.5).holds)
        self.assertFalse(check_concavity(root, x, y, 0.5, concave=False).holds)

    def test_phi(self):
        for q in (1.0, 1.5, 2.0, 2.5, 3.0):
            for seed in range(10):
                family = make_isometry_family(2, 3, seed)
                for lam in settings.SEGMENT_LAMBDAS:
                    v = check_phi_concavity(family, point(2, 3, seed),
                                            point(2, 3, seed + 30), q, lam)
                    self.assertTrue(v.holds, (q, seed, lam, v))

    def test_carlen_lieb(self):
        for p in (0.3, 0.7, 1.0, 1.4, 2.0):
            for seed in range(10):
                weights = [random_symmetric(3, seed).entries, np.eye(3)]
                v = check_carlen_lieb_concavity(weights, point(2, 3, seed),
                                                point(2, 3, seed + 40), p)
                self.assertTrue(v.holds, (p, seed, v))

    def test_carlen_lieb_p1_linear(self):
        weights = [np.eye(2), np.eye(2)]
        x = point(2, 2, 1)
        y = point(2, 2, 2)
        mid = carlen_lieb(weights, x.combine(y, 0.5), 1.0)
        chord = (carlen_lieb(weights, x, 1.0) + carlen_lieb(weights, y, 1.0))
        self.assertAlmostEqual(chord / 2, mid, delta=1e-12 * mid)

    def test_curvature(self):
        self.assertTrue(curvature(1.0))
        self.assertTrue(curvature(1.9))
        self.assertIsNone(curvature(2.0))
        self.assertFalse(curvature(2.1))

    def test_affine_claim(self):
        x = FunctionalPoint([np.diag([1.0])])
        y = FunctionalPoint([np.diag([9.0])])

        def root(p):
            return math.sqrt(p[0].entries[0, 0])
        self.assertFalse(check_concavity(root, x, y, 0.5, None).holds)
        self.assertTrue(check_concavity(lambda p: 2 * p[0].entries[0, 0],
                                        x, y, 0.5, None).holds)

    def test_equality_where_linear(self):
        x = point(2, 3, 2)
        y = point(2, 3, 32)
        weights = [random_symmetric(3, 2).entries, np.eye(3)]
        verdicts = [
            check_phi_concavity(make_isometry_family(2, 3, 2), x, y, 2.0,
                                0.25),
            check_phi_with_l_concavity(make_isometry_family(2, 3, 2, SUB),
                                       pd(3, 9), x, y, 2.0, 0.25),
            check_carlen_lieb_concavity(weights, x, y, 1.0, 0.25),
        ]
        for v in verdicts:
            self.assertTrue(v.holds, v)
            self.assertEqual(-abs(v.lhs - v.rhs), v.gap)

    def test_homogeneity(self):
        family = make_isometry_family(2, 4, 3)
        for q in Q_GRID:
            for t in settings.HOMOGENEITY_FACTORS:
                self.assertTrue(check_homogeneity(family, point(2, 4, 3), q,
                                                  t).holds)


class TestDecoupling(unittest.TestCase):

    def test_parameter(self):
        self.assertEqual(0.5, float(DecouplingParameter(0.5)))
        self.assertRaises(ValueError, DecouplingParameter, 0.0)
        self.assertRaises(ValueError, DecouplingParameter, 1.0)
        self.assertRaises(ValueError, decoupled_rhs, np.eye(2), np.eye(2),
                          1.5, 1.5)

    def test_limit_matches_theorem1(self):
        for q in (1.0, 1.5, 2.5, 3.0):
            l1 = pd(3, 1)
            l2 = pd(3, 2)
            _, rhs = theorem1_sides(l1, l2, q)
            self.assertLessEqual(abs(decoupled_rhs(l1, l2, q, 1e-8) - rhs),
                                 1e-6 * max(1.0, abs(rhs)))

    def test_gap_tracks_theorem1(self):
        for seed in range(5):
            l1 = pd(3, seed)
            l2 = pd(3, seed + 9)
            for q in (1.5, 2.5):
                decoupled = decoupled_bound(l1, l2, q, 1e-8)
                direct = check_theorem1(l1, l2, q)
                self.assertLessEqual(abs(decoupled.gap - direct.gap),
                                     1e-6 * direct.scale)

    def test_q2_independent_of_epsilon(self):
        l1 = pd(2, 3)
        l2 = pd(2, 4)
        expected = trace(l1) + trace(l2) + 2
        for epsilon in (0.9, 0.5, 1e-3):
            self.assertAlmostEqual(expected, decoupled_rhs(l1, l2, 2.0,
                                                           epsilon),
                                   delta=1e-10 * expected)

    def test_holds(self):
        for q in (1.0, 1.5, 2.0, 2.5, 3.0):
            for epsilon in settings.EPSILON_GRID:
                v = decoupled_bound(pd(3, 5), pd(3, 6), q, epsilon)
                self.assertTrue(v.holds, (q, epsilon, v))

    def test_scalar_monotonicity(self):
        grid = np.linspace(0.01, 0.9, 40)
        up = decoupling_monotonicity([[1.0]], 1.5, grid)
        self.assertEqual('increasing', up.direction)
        down = decoupling_monotonicity([[1.0]], 2.5, grid)
        self.assertEqual('decreasing', down.direction)
        self.assertEqual((40, 1), down.values.shape)

    def test_constant_at_q2(self):
        flat = decoupling_monotonicity(pd(3, 7, 0.5, 5.0), 2.0,
                                       settings.EPSILON_GRID)
        self.assertEqual('constant', flat.direction)
        self.assertEqual(tuple(sorted(settings.EPSILON_GRID)), flat.epsilons)

    def test_limit_q2(self):
        profile = decoupling_limit_profile(pd(3, 7, 0.5, 5.0), 2.0,
                                           (1e-1, 1e-2, 1e-3))
        for epsilon, deviation in zip(profile.epsilons, profile.deviations):
            self.assertAlmostEqual(epsilon, deviation, delta=1e-10)

    def test_limit_scalar(self):
        self.assertLessEqual(decoupling_limit_check([[1.0]], 1.5, (1e-4,)),
                             1e-3)

    def test_limit_profile(self):
        profile = decoupling_limit_profile(pd(4, 8, 0.5, 5.0), 2.5,
                                           (1e-2, 1e-3, 1e-4))
        self.assertTrue(profile.monotone)
        self.assertAlmostEqual(1.0, profile.slope, delta=0.2)
        self.assertEqual(profile.deviations[0],
                         decoupling_limit_check(pd(4, 8, 0.5, 5.0), 2.5,
                                                (1e-2, 1e-3, 1e-4)))

    def test_limit_grid_must_decrease(self):
        self.assertRaises(ValueError, decoupling_limit_profile, np.eye(2),
                          1.5, (1e-3, 1e-2))


class TestEntropyForms(unittest.TestCase):

    def test_maximally_mixed(self):
        v = check_entropy_forms(maximally_mixed(4), 2.0)
        self.assertTrue(v.holds)
        self.assertAlmostEqual(0.75, v.lhs, delta=1e-12)

    def test_random(self):
        for q in (1.0, 1.5, 2.0, 2.5, 3.0):
            for seed in range(20):
                rho = random_density(RandomEnsembleSpec(1 + seed % 6,
                                                        (0.05, 20.0), seed))
                self.assertTrue(check_entropy_forms(rho, q, 1e-10).holds)
