import unittest
from fractions import Fraction

import numpy as np

from walsh_summability.dyadic import DyadicInterval, GridSpec
from walsh_summability.lebesgue import (
    FAILS_WL1,
    FAILS_WL2,
    FAILS_WL3,
    PASSES,
    classical_lebesgue_avg,
    classify_wlp,
    h0,
    h1,
    mt2_convergence_experiment,
    w1,
    w2d,
    w_table,
    wl1_sides,
    wl2_sides,
    wl3_sides,
    wl4_constant,
    zz_sides,
)
from walsh_summability.matrix import FejerMatrix
from walsh_summability.tensor import GridFunction2D, square_indicator
from walsh_summability.walsh import GridFunction1D

SPEC = GridSpec(8)
DEPTHS = range(1, 9)


def _half_plane(axis):
    samples = np.zeros((SPEC.size, SPEC.size))
    if axis == 0:
        samples[:128, :] = 1.0
    else:
        samples[:, :128] = 1.0
    return GridFunction2D(SPEC, samples)


def _random_function_2d(spec, seed):
    samples = np.random.default_rng(seed).random((spec.size, spec.size))
    return GridFunction2D(spec, samples)


class TestFunctionals(unittest.TestCase):
    def test_w1(self):
        spec = GridSpec(3)
        f = GridFunction1D.indicator(spec, DyadicInterval(1, 0))
        self.assertEqual(w1(f, 0, 0), 0.5)
        for n in range(1, 4):
            self.assertEqual(w1(f, 0, n), 2.0**-n)
        self.assertEqual(w1(GridFunction1D.constant(spec, 2.0), 5, 3), 0.0)
        with self.assertRaisesRegex(ValueError, "exceeds resolution"):
            w1(f, 0, 4)

    def test_h_functionals(self):
        F = square_indicator(SPEC, Fraction(1, 2))
        for n in DEPTHS:
            self.assertAlmostEqual(h0(F, 64, 64, n), 1.0, places=12)
            self.assertAlmostEqual(h1(F, 64, 64, n), 1.0, places=12)

    def test_half_plane(self):
        F = _half_plane(1)
        for n in DEPTHS:
            self.assertAlmostEqual(h1(F, 64, 64, n), 2.0**-n, places=14)
            self.assertAlmostEqual(
                h0(F, 64, 64, n), (2 ** (n + 1) - 1) / 2 ** (n + 1), places=14
            )
            self.assertAlmostEqual(
                w2d(F, 64, 64, n, n), (2 ** (n + 1) - 1) / 4**n, places=14
            )

    def test_w_table(self):
        F = _random_function_2d(GridSpec(4), 1)
        table = w_table(F, 3, 9, [1, 2, 4])
        self.assertEqual(len(table), 3)
        self.assertEqual(table[1][2], w2d(F, 3, 9, 2, 4))

    def test_separable_w(self):
        # W of f(x) g(y) with g constant reduces to the one-dimensional W.
        spec = GridSpec(5)
        f = GridFunction1D(spec, np.random.default_rng(2).random(spec.size))
        F = GridFunction2D.separable(f, GridFunction1D.constant(spec, 1.0))
        for n in range(spec.resolution + 1):
            self.assertAlmostEqual(h0(F, 7, 0, n), w1(f, 7, n), places=12)

    def test_classical_average(self):
        spec = GridSpec(4)
        f = GridFunction1D(spec, np.arange(16.0))
        self.assertEqual(classical_lebesgue_avg(f, 4, 2), 1.5)
        self.assertEqual(classical_lebesgue_avg(f, 4, 4), 0.0)
        with self.assertRaisesRegex(ValueError, "leaves"):
            classical_lebesgue_avg(f, 15, 2)


class TestClassify(unittest.TestCase):
    def test_square_half_passes(self):
        F = square_indicator(SPEC, Fraction(1, 2))
        diagnostic = classify_wlp(F, (64, 64), DEPTHS)
        self.assertEqual(diagnostic.verdict, PASSES)
        self.assertTrue(diagnostic.passes)
        self.assertAlmostEqual(diagnostic.h0_sup, 1.0, places=12)
        values = diagnostic.as_dict()
        self.assertEqual(values["point"], [64, 64])
        self.assertEqual(values["depths"], list(DEPTHS))
        self.assertEqual(len(values["W_values"]), 8)
        self.assertEqual(values["thresholds"], {"decay": 4.0, "growth": 4.0})

    def test_square_third_fails_wl1(self):
        F = square_indicator(SPEC, Fraction(1, 3))
        diagnostic = classify_wlp(F, (85, 85), DEPTHS)
        self.assertEqual(diagnostic.verdict, FAILS_WL1)
        self.assertFalse(diagnostic.passes)
        first, last = diagnostic.w_table[0][0], diagnostic.w_table[-1][-1]
        self.assertGreater(last, first / 4.0)

    def test_fails_wl2(self):
        diagnostic = classify_wlp(_half_plane(0), (64, 64), DEPTHS, growth=1.2)
        self.assertEqual(diagnostic.verdict, FAILS_WL2)

    def test_fails_wl3(self):
        diagnostic = classify_wlp(_half_plane(1), (64, 64), DEPTHS, growth=1.2)
        self.assertEqual(diagnostic.verdict, FAILS_WL3)

    def test_invalid(self):
        F = square_indicator(SPEC, Fraction(1, 2))
        with self.assertRaisesRegex(ValueError, "at least two depths"):
            classify_wlp(F, (0, 0), [3])
        with self.assertRaisesRegex(ValueError, "out of range"):
            classify_wlp(F, (256, 0), DEPTHS)


class TestInequalities(unittest.TestCase):
    def test_wl_sides(self):
        spec = GridSpec(6)
        depths = range(spec.resolution + 1)
        for seed in range(10):
            rng = np.random.default_rng([6, seed])
            points = rng.integers(0, spec.size, size=(20, 2))
            samples = rng.random((spec.size, spec.size))
            # (wl1) compares against W at points where F vanishes.
            samples[points[:, 0], points[:, 1]] = 0.0
            F = GridFunction2D(spec, samples)
            for x0, x1 in points.tolist():
                for s0 in depths:
                    for s1 in depths:
                        for sides in (wl1_sides, wl2_sides, wl3_sides):
                            lhs, rhs = sides(F, x0, x1, s0, s1)
                            self.assertLessEqual(
                                lhs, rhs + 1e-12, msg=(sides.__name__, x0, x1, s0, s1)
                            )

    def test_wl4_constant(self):
        spec = GridSpec(4)
        F = _random_function_2d(spec, 4)
        depths = range(spec.resolution + 1)
        constant = wl4_constant(F, 2, 13, depths)
        distance = np.max(np.abs(F.samples - F.samples[2, 13]))
        self.assertLessEqual(constant, 4.0 * distance)
        for s0 in depths:
            for s1 in depths:
                bound = constant * 2 ** (s0 + s1)
                self.assertLessEqual(w2d(F, 2, 13, s0, s1), bound * (1 + 1e-12))

    def test_zz(self):
        spec = GridSpec(6)
        F = _random_function_2d(spec, 5)
        for l0 in range(1, spec.size + 1):
            for l1 in range(1, spec.size + 1):
                lhs, rhs = zz_sides(F, 9, 22, l0, l1)
                self.assertLessEqual(lhs, rhs * (1 + 1e-9), msg=(l0, l1))
        with self.assertRaisesRegex(ValueError, "Fejer index 0"):
            zz_sides(F, 0, 0, 0, 1)
        with self.assertRaisesRegex(ValueError, "Fejer index 65"):
            zz_sides(F, 0, 0, 1, 65)


class TestConvergenceExperiment(unittest.TestCase):
    def test_square_half(self):
        F = square_indicator(SPEC, Fraction(1, 2))
        report = mt2_convergence_experiment(
            FejerMatrix(), FejerMatrix(), "powers:0..8", "powers:0..8", F, [(64, 64)]
        )
        (row,) = report.points
        self.assertEqual(row.verdict, PASSES)
        for m, error in enumerate(row.diagonal):
            expected = 1.0 - (1.0 - 2.0 ** (-m - 1)) ** 2
            self.assertAlmostEqual(error, expected, places=12)
        self.assertTrue(row.converging)
        self.assertEqual(report.indices0, [1 << m for m in range(9)])
        self.assertEqual(report.t0_values0[:3], [1.0, 0.5, 0.25])
        values = report.as_dict()
        self.assertEqual(values["families"], ["fejer", "fejer"])
        self.assertEqual(len(values["points"][0]["errors"]), 9)

    def test_several_points(self):
        F = square_indicator(SPEC, Fraction(1, 3))
        report = mt2_convergence_experiment(
            FejerMatrix(),
            FejerMatrix(),
            "powers:0..8",
            "powers:0..8",
            F,
            [(85, 85), (20, 20)],
        )
        verdicts = [row.verdict for row in report.points]
        self.assertEqual(verdicts[0], FAILS_WL1)
        self.assertEqual(verdicts[1], PASSES)
        # Only the plateau over x + 1/2 leaves the square at the finest level.
        expected = 1.0 - (1.0 - 2.0**-9) ** 2
        self.assertAlmostEqual(report.points[1].diagonal[-1], expected, places=12)
        for row in report.points:
            tails = row.tail_sups
            self.assertTrue(all(x >= y for x, y in zip(tails, tails[1:])))


if __name__ == "__main__":
    unittest.main(verbosity=2)
