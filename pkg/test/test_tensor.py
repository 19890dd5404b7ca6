import math
import unittest
from fractions import Fraction

import numpy as np

from walsh_summability.dyadic import GridSpec
from walsh_summability.matrix import CesaroMatrix, FejerMatrix, NorlundLogMatrix
from walsh_summability.maximal import IndexSubsequence, dyadic_maximal
from walsh_summability.summability import apply_mean
from walsh_summability.tensor import (
    GridFunction2D,
    apply_axis,
    hybrid_maximal,
    iterated_majorant,
    llogl_2d,
    llogl_weak_type_experiment,
    random_ensemble_function_2d,
    square_indicator,
    tensor_maximal,
    tensor_mean,
    weak_quasinorm_2d,
)
from walsh_summability.walsh import GridFunction1D


def _random_function_2d(spec, seed):
    samples = np.random.default_rng(seed).normal(size=(spec.size, spec.size))
    return GridFunction2D(spec, samples)


class TestGridFunction2D(unittest.TestCase):
    def test_invalid(self):
        with self.assertRaisesRegex(ValueError, "Expected 4x4 samples"):
            GridFunction2D(GridSpec(2), np.zeros((4, 2)))
        with self.assertRaisesRegex(ValueError, "non-finite"):
            GridFunction2D(GridSpec(1), [[1.0, np.inf], [0.0, 0.0]])

    def test_separable(self):
        spec = GridSpec(2)
        f = GridFunction1D(spec, [1.0, 2.0, 0.0, -1.0])
        g = GridFunction1D(spec, [2.0, 0.0, 0.0, 2.0])
        F = GridFunction2D.separable(f, g)
        self.assertEqual(F[1, 3], 4.0)
        self.assertEqual(F[3, 0], -2.0)
        self.assertAlmostEqual(F.integral(), f.integral() * g.integral(), places=14)
        self.assertEqual(abs(F).l1_norm(), F.l1_norm())
        with self.assertRaisesRegex(ValueError, "Mismatched"):
            GridFunction2D.separable(f, GridFunction1D.constant(GridSpec(3), 1.0))

    def test_index_range(self):
        F = GridFunction2D.constant(GridSpec(2), 1.0)
        with self.assertRaises(ValueError):
            F[4, 0]
        self.assertEqual(F, GridFunction2D.constant(GridSpec(2), 1.0))
        self.assertFalse(F == "what?")

    def test_square_indicator(self):
        spec = GridSpec(8)
        F = square_indicator(spec, Fraction(1, 3))
        self.assertEqual(F[85, 85], 1.0)
        self.assertEqual(F[86, 0], 0.0)
        self.assertEqual(F[0, 86], 0.0)
        self.assertAlmostEqual(F.integral(), (86 / 256) ** 2, places=14)
        half = square_indicator(spec, Fraction(1, 2))
        self.assertEqual(half.integral(), 0.25)
        with self.assertRaisesRegex(ValueError, "Side must be"):
            square_indicator(spec, 0)


class TestTensorMean(unittest.TestCase):
    def test_order_independent(self):
        spec = GridSpec(5)
        F = _random_function_2d(spec, 1)
        for n0, n1 in ((1, 1), (3, 17), (32, 5)):
            first = tensor_mean(FejerMatrix(), n0, NorlundLogMatrix(), n1, F)
            second = tensor_mean(
                FejerMatrix(), n0, NorlundLogMatrix(), n1, F, first_axis=1
            )
            np.testing.assert_allclose(first.samples, second.samples, atol=1e-10)

    def test_separable(self):
        spec = GridSpec(5)
        rng = np.random.default_rng(2)
        f = GridFunction1D(spec, rng.normal(size=spec.size))
        g = GridFunction1D(spec, rng.normal(size=spec.size))
        matrix0, matrix1 = CesaroMatrix(0.5), FejerMatrix()
        result = tensor_mean(matrix0, 9, matrix1, 20, GridFunction2D.separable(f, g))
        expected = GridFunction2D.separable(
            apply_mean(matrix0, 9, f), apply_mean(matrix1, 20, g)
        )
        np.testing.assert_allclose(result.samples, expected.samples, atol=1e-10)

    def test_apply_axis(self):
        spec = GridSpec(3)
        F = _random_function_2d(spec, 3)
        result = apply_axis(FejerMatrix(), 4, F, 1)
        for i in range(spec.size):
            row = GridFunction1D(spec, F.samples[i])
            np.testing.assert_allclose(
                result.samples[i], apply_mean(FejerMatrix(), 4, row).samples, atol=1e-12
            )
        with self.assertRaisesRegex(ValueError, "Axis must be 0 or 1"):
            apply_axis(FejerMatrix(), 4, F, 2)


class TestTensorMaximal(unittest.TestCase):
    def test_brute_force(self):
        spec = GridSpec(4)
        F = _random_function_2d(spec, 4)
        subseq0 = IndexSubsequence([1, 3, 8, 16])
        subseq1 = IndexSubsequence.parse("powers:0..4")
        expected = np.zeros((spec.size, spec.size))
        for n0 in subseq0:
            for n1 in subseq1:
                mean = tensor_mean(FejerMatrix(), n0, FejerMatrix(), n1, F).samples
                expected = np.maximum(expected, np.abs(mean))
        result = tensor_maximal(FejerMatrix(), subseq0, FejerMatrix(), subseq1, F)
        np.testing.assert_allclose(result.samples, expected, atol=1e-10)

    def test_iterated_majorant_dominates(self):
        spec = GridSpec(5)
        F = _random_function_2d(spec, 5)
        subseq = IndexSubsequence.parse("all:1..32")
        maximal = tensor_maximal(FejerMatrix(), subseq, CesaroMatrix(0.5), subseq, F)
        majorant = iterated_majorant(
            FejerMatrix(), subseq, CesaroMatrix(0.5), subseq, F
        )
        self.assertTrue(np.all(majorant.samples >= maximal.samples - 1e-10))

    def test_hybrid_maximal(self):
        spec = GridSpec(4)
        F = _random_function_2d(spec, 6)
        result = hybrid_maximal(F)
        for j in range(spec.size):
            column = GridFunction1D(spec, F.samples[:, j])
            np.testing.assert_allclose(
                result.samples[:, j], dyadic_maximal(column).samples, atol=1e-12
            )


class TestLlogl(unittest.TestCase):
    def test_norms(self):
        spec = GridSpec(1)
        F = GridFunction2D(spec, [[math.e, 0.0], [0.0, 0.0]])
        self.assertAlmostEqual(llogl_2d(F), math.e / 4, places=14)
        self.assertAlmostEqual(weak_quasinorm_2d(F), math.e / 4, places=14)

    def test_nested_ensemble(self):
        for seed in range(4):
            fine = random_ensemble_function_2d(
                GridSpec(7), np.random.default_rng([seed, 1])
            )
            coarse = random_ensemble_function_2d(
                GridSpec(5), np.random.default_rng([seed, 1])
            )
            averaged = fine.samples.reshape(32, 4, 32, 4).mean(axis=(1, 3))
            np.testing.assert_allclose(averaged, coarse.samples, rtol=1e-12)
            self.assertTrue(np.all(fine.samples >= 0.0))

    def test_experiment(self):
        report = llogl_weak_type_experiment(
            FejerMatrix(), "powers:0..5", FejerMatrix(), "powers:0..5", 6, GridSpec(5)
        )
        self.assertEqual(report.families, ["fejer", "fejer"])
        self.assertEqual(report.subsequences, ["powers:0..5", "powers:0..5"])
        self.assertEqual(report.K, 5)
        self.assertGreater(report.max_ratio, 0.0)
        self.assertEqual(report.as_dict()["trials"], 6)

    def test_ratio_stays_bounded(self):
        ratios = []
        for resolution in (5, 6, 7):
            subseq = "powers:0..%d" % resolution
            report = llogl_weak_type_experiment(
                FejerMatrix(), subseq, FejerMatrix(), subseq, 50, GridSpec(resolution)
            )
            ratios.append(report.max_ratio)
        self.assertLessEqual(ratios[-1], 1.2 * ratios[0])

    def test_threads(self):
        spec = GridSpec(4)
        args = (FejerMatrix(), "powers:0..4", FejerMatrix(), "all:1..16", 5, spec)
        self.assertEqual(
            llogl_weak_type_experiment(*args, seed=2),
            llogl_weak_type_experiment(*args, seed=2, workers=2),
        )

    def test_errors(self):
        spec = GridSpec(3)
        with self.assertRaisesRegex(ValueError, "at least one trial"):
            llogl_weak_type_experiment(
                FejerMatrix(), "powers:0..3", FejerMatrix(), "powers:0..3", 0, spec
            )


if __name__ == "__main__":
    unittest.main(verbosity=2)
