import math
import unittest

import numpy as np

from walsh_summability.dyadic import GridSpec
from walsh_summability.matrix import FejerMatrix, IdentityMatrix
from walsh_summability.maximal import (
    IndexSubsequence,
    alternating_index,
    as_subsequence,
    carleson_maximal,
    distribution_quasinorm,
    dyadic_maximal,
    entropy_integral,
    h1_norm,
    llogl_norm,
    maximal_abs_mean,
    maximal_mean,
    quantile_table,
    random_ensemble_function,
    weak_quasinorm,
    weak_type_experiment,
)
from walsh_summability.summability import apply_mean
from walsh_summability.walsh import GridFunction1D


def _random_function(spec, seed):
    return GridFunction1D(spec, np.random.default_rng(seed).normal(size=spec.size))


class TestIndexSubsequence(unittest.TestCase):
    def test_parse(self):
        subseq = IndexSubsequence.parse("powers:0..4")
        self.assertEqual(subseq.indices, (1, 2, 4, 8, 16))
        self.assertEqual(
            IndexSubsequence.parse("alternating:0..3").indices, (1, 5, 21, 85)
        )
        self.assertEqual(IndexSubsequence.parse("list:1, 3,7").indices, (1, 3, 7))
        self.assertEqual(IndexSubsequence.parse("all:2..5").indices, (2, 3, 4, 5))

    def test_label(self):
        self.assertEqual(IndexSubsequence.parse(" powers:1..3 ").label, "powers:1..3")
        self.assertEqual(IndexSubsequence([2, 9]).label, "list:2,9")

    def test_invalid(self):
        with self.assertRaisesRegex(ValueError, "Unable to parse subsequence"):
            IndexSubsequence.parse("squares:1..4")
        with self.assertRaisesRegex(ValueError, "lo > hi"):
            IndexSubsequence.parse("powers:4..1")
        with self.assertRaisesRegex(ValueError, "not strictly increasing"):
            IndexSubsequence.parse("list:3,3")
        with self.assertRaisesRegex(ValueError, "Empty"):
            IndexSubsequence([])

    def test_check_resolution(self):
        subseq = IndexSubsequence.parse("powers:0..4")
        self.assertIs(subseq.check_resolution(GridSpec(4)), subseq)
        with self.assertRaisesRegex(ValueError, "exceeds 2\\^K = 8"):
            subseq.check_resolution(GridSpec(3))

    def test_container(self):
        subseq = as_subsequence([1, 4, 9])
        self.assertEqual(list(subseq), [1, 4, 9])
        self.assertEqual(len(subseq), 3)
        self.assertEqual(subseq, IndexSubsequence((1, 4, 9)))
        self.assertEqual(hash(subseq), hash(IndexSubsequence((1, 4, 9))))
        self.assertIs(as_subsequence(subseq), subseq)
        self.assertEqual(as_subsequence("list:1,4,9"), subseq)

    def test_alternating_index(self):
        self.assertEqual([alternating_index(a) for a in range(4)], [1, 5, 21, 85])
        self.assertEqual(bin(alternating_index(5)), "0b" + "10" * 5 + "1")


class TestMaximalOperators(unittest.TestCase):
    def test_maximal_mean(self):
        spec = GridSpec(6)
        f = _random_function(spec, 1)
        subseq = IndexSubsequence([1, 3, 10, 64])
        expected = np.max(
            [np.abs(apply_mean(FejerMatrix(), n, f).samples) for n in subseq], axis=0
        )
        np.testing.assert_allclose(
            maximal_mean(FejerMatrix(), subseq, f).samples, expected, atol=1e-12
        )

    def test_batches(self):
        spec = GridSpec(8)
        f = _random_function(spec, 2)
        result = carleson_maximal(f).samples
        expected = np.zeros(spec.size)
        for n in range(1, spec.size + 1):
            mean = apply_mean(IdentityMatrix(), n, f).samples
            expected = np.maximum(expected, np.abs(mean))
        np.testing.assert_allclose(result, expected, atol=1e-10)

    def test_dyadic_maximal(self):
        spec = GridSpec(7)
        f = _random_function(spec, 3)
        subseq = IndexSubsequence.parse("powers:0..7")
        np.testing.assert_allclose(
            dyadic_maximal(f).samples,
            maximal_mean(IdentityMatrix(), subseq, f).samples,
            atol=1e-10,
        )

    def test_abs_kernel_dominates(self):
        spec = GridSpec(6)
        f = _random_function(spec, 4)
        subseq = IndexSubsequence.parse("all:1..64")
        plain = maximal_mean(FejerMatrix(), subseq, f).samples
        tilde = maximal_abs_mean(FejerMatrix(), subseq, f).samples
        self.assertTrue(np.all(tilde >= plain - 1e-10))

    def test_nonnegative_kernels_agree(self):
        # K_{2^n} >= 0, so taking absolute values changes nothing.
        spec = GridSpec(6)
        f = _random_function(spec, 5)
        subseq = IndexSubsequence.parse("powers:0..6")
        np.testing.assert_allclose(
            maximal_abs_mean(FejerMatrix(), subseq, f).samples,
            maximal_mean(FejerMatrix(), subseq, f).samples,
            atol=1e-10,
        )


class TestNorms(unittest.TestCase):
    def test_distribution_quasinorm(self):
        self.assertEqual(distribution_quasinorm([4.0, 0.0, 0.0, 0.0]), 1.0)
        self.assertEqual(distribution_quasinorm([1.0, -1.0, 1.0, 1.0]), 1.0)
        self.assertEqual(distribution_quasinorm([4.0, 3.0, 1.0, 1.0]), 1.5)
        self.assertEqual(distribution_quasinorm([]), 0.0)

    def test_weak_below_strong(self):
        spec = GridSpec(8)
        for seed in range(5):
            f = _random_function(spec, seed)
            self.assertLessEqual(weak_quasinorm(f), f.l1_norm() + 1e-12)

    def test_entropy(self):
        self.assertAlmostEqual(entropy_integral([math.e, 1.0]), math.e / 2, places=14)
        self.assertEqual(entropy_integral([0.5, -0.25]), 0.0)
        spec = GridSpec(2)
        f = GridFunction1D(spec, [4.0, 0.0, 0.0, 0.0])
        self.assertAlmostEqual(llogl_norm(f), math.log(4.0), places=14)

    def test_h1_norm(self):
        spec = GridSpec(5)
        f = _random_function(spec, 6)
        self.assertGreaterEqual(h1_norm(f), f.l1_norm())
        haar = GridFunction1D(spec, [1.0] * 16 + [-1.0] * 16)
        self.assertEqual(h1_norm(haar), 1.0)

    def test_quantile_table(self):
        table = quantile_table(np.arange(101.0))
        self.assertEqual(sorted(table), ["q50", "q90", "q99"])
        self.assertAlmostEqual(table["q50"], 50.0, places=9)
        self.assertAlmostEqual(table["q99"], 99.0, places=9)


class TestEnsemble(unittest.TestCase):
    def test_nested(self):
        for seed in range(5):
            fine = random_ensemble_function(
                GridSpec(9), np.random.default_rng([seed, 0])
            )
            coarse = random_ensemble_function(
                GridSpec(7), np.random.default_rng([seed, 0])
            )
            np.testing.assert_allclose(
                fine.samples.reshape(128, 4).mean(axis=1), coarse.samples, rtol=1e-12
            )
            self.assertAlmostEqual(fine.l1_norm(), coarse.l1_norm(), places=9)
            self.assertTrue(np.all(fine.samples >= 0.0))

    def test_small_grid(self):
        f = random_ensemble_function(GridSpec(1), np.random.default_rng(0))
        self.assertEqual(len(f), 2)
        self.assertGreater(f.l1_norm(), 0.0)


class TestWeakTypeExperiment(unittest.TestCase):
    def test_report(self):
        report = weak_type_experiment(
            FejerMatrix(), "powers:0..6", 10, GridSpec(6), seed=3
        )
        self.assertEqual(report.family, "fejer")
        self.assertEqual(report.operator, "tilde")
        self.assertEqual(report.subsequence, "powers:0..6")
        self.assertEqual(report.K, 6)
        self.assertEqual(report.trials, 10)
        self.assertGreaterEqual(report.max_ratio, report.mean_ratio)
        self.assertGreater(report.mean_ratio, 0.0)
        self.assertEqual(sorted(report.as_dict()["quantiles"]), ["q50", "q90", "q99"])

    def test_reproducible(self):
        spec = GridSpec(6)
        first = weak_type_experiment(FejerMatrix(), "all:1..64", 8, spec, seed=1)
        second = weak_type_experiment(
            FejerMatrix(), "all:1..64", 8, spec, seed=1, workers=3
        )
        self.assertEqual(first, second)

    def test_nested_ratios(self):
        trials = 12
        cases = [
            (FejerMatrix(), "powers:0..%d", "tilde"),
            (IdentityMatrix(), "all:1..%d", "plain"),
            (None, None, "dyadic"),
        ]
        for matrix, pattern, kind in cases:
            ratios = []
            for resolution in (7, 8, 9):
                subseq = None
                if pattern:
                    bound = resolution if "powers" in pattern else 1 << resolution
                    subseq = pattern % bound
                report = weak_type_experiment(
                    matrix, subseq, trials, GridSpec(resolution), kind=kind
                )
                ratios.append(report.max_ratio)
            for lower, upper in zip(ratios, ratios[1:]):
                self.assertGreaterEqual(upper, lower * (1.0 - 1e-12), msg=kind)
            if kind != "plain":
                self.assertLessEqual(ratios[-1], 1.2 * ratios[0], msg=kind)

    def test_first_mean_sets_ratio_floor(self):
        # T_1 f is the integral of f, so no trial ratio falls below 1.
        spec = GridSpec(6)
        cases = [
            (FejerMatrix(), "powers:0..6", "tilde"),
            (IdentityMatrix(), "all:1..64", "plain"),
            (None, None, "dyadic"),
        ]
        for matrix, subseq, kind in cases:
            report = weak_type_experiment(matrix, subseq, 20, spec, kind=kind)
            self.assertGreaterEqual(report.mean_ratio, 1.0 - 1e-12, msg=kind)
            self.assertGreaterEqual(report.quantiles["q50"], 1.0 - 1e-12, msg=kind)

    def test_errors(self):
        spec = GridSpec(4)
        with self.assertRaisesRegex(ValueError, "at least one trial"):
            weak_type_experiment(FejerMatrix(), "powers:0..4", 0, spec)
        with self.assertRaisesRegex(ValueError, "Unknown maximal operator"):
            weak_type_experiment(FejerMatrix(), "powers:0..4", 1, spec, kind="other")
        with self.assertRaisesRegex(ValueError, "exceeds"):
            weak_type_experiment(FejerMatrix(), "powers:0..5", 1, spec)


if __name__ == "__main__":
    unittest.main(verbosity=2)
