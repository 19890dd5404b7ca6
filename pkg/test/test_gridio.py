import io
import json
import os
import tempfile
import unittest

import numpy as np

from walsh_summability.dyadic import GridSpec
from walsh_summability.gridio import (
    dumps_json,
    load_alphas,
    load_grid,
    load_rows,
    read_grid,
    save_grid,
    write_csv_table,
    write_grid,
    write_json,
)
from walsh_summability.tensor import GridFunction2D
from walsh_summability.walsh import GridFunction1D


class TestGridFiles(unittest.TestCase):
    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmpdir.cleanup()

    def test_write_1d(self):
        f = GridFunction1D(GridSpec(1), [0.5, -2.0])
        stream = io.StringIO()
        write_grid(f, stream)
        self.assertEqual(stream.getvalue(), "# resolution=1\n0.5\n-2.0\n")

    def test_write_2d(self):
        F = GridFunction2D(GridSpec(1), [[1.0, 2.0], [3.0, 0.25]])
        stream = io.StringIO()
        write_grid(F, stream)
        self.assertEqual(
            stream.getvalue(), "# resolution=1 dims=2\n1.0,2.0\n3.0,0.25\n"
        )

    def test_read(self):
        f = read_grid(io.StringIO("# resolution=2\n1\n# note\n\n2\n3\n4.5\n"))
        self.assertEqual(f, GridFunction1D(GridSpec(2), [1.0, 2.0, 3.0, 4.5]))
        F = read_grid(io.StringIO("#resolution=1 dims=2\n1,2\n3,4\n"))
        self.assertIsInstance(F, GridFunction2D)
        self.assertEqual(F[1, 0], 3.0)

    def test_read_errors(self):
        with self.assertRaisesRegex(ValueError, "Unable to parse line: 1.0"):
            read_grid(io.StringIO("1.0\n2.0\n"))
        with self.assertRaisesRegex(ValueError, "Unable to parse line: 1,x"):
            read_grid(io.StringIO("# resolution=1 dims=2\n1,x\n3,4\n"))
        with self.assertRaisesRegex(ValueError, "Expected 4 samples"):
            read_grid(io.StringIO("# resolution=2\n1\n2\n"))
        with self.assertRaisesRegex(ValueError, "one value per line"):
            read_grid(io.StringIO("# resolution=1\n1,2\n3,4\n"))

    def test_save_and_load_exact(self):
        spec = GridSpec(6)
        f = GridFunction1D(spec, np.random.default_rng(0).normal(size=spec.size))
        path = os.path.join(self.tmpdir.name, "f.csv")
        save_grid(f, path)
        self.assertEqual(load_grid(path), f)

    def test_rows_and_alphas(self):
        path = os.path.join(self.tmpdir.name, "rows.csv")
        with open(path, "w", encoding="utf-8") as output:
            output.write("# rows\n1\n0.5, 0.5\n")
        self.assertEqual(load_rows(path), [[1.0], [0.5, 0.5]])
        with self.assertRaisesRegex(ValueError, "Unable to parse line"):
            load_alphas(path)


class TestReports(unittest.TestCase):
    def test_dumps_json(self):
        text = dumps_json({"b": 1, "a": [0.5]})
        self.assertEqual(text, '{\n  "b": 1,\n  "a": [\n    0.5\n  ]\n}\n')
        self.assertEqual(json.loads(text), {"b": 1, "a": [0.5]})
        with self.assertRaises(ValueError):
            dumps_json({"x": float("nan")})

    def test_write_json(self):
        stream = io.StringIO()
        write_json({"name": "café"}, stream=stream)
        self.assertEqual(stream.getvalue(), '{\n  "name": "caf\\u00e9"\n}\n')
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, "report.json")
            write_json([1, 2], path=path)
            with open(path, encoding="ascii") as input_file:
                self.assertEqual(json.load(input_file), [1, 2])

    def test_csv_table(self):
        stream = io.StringIO()
        write_csv_table([{"n": 1, "c2": 1.0, "extra": "x"}], ["n", "c2"], stream)
        self.assertEqual(stream.getvalue(), "n,c2\n1,1.0\n")


if __name__ == "__main__":
    unittest.main(verbosity=2)
