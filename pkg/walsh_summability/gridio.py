"""Implements reading and writing of grid functions, matrix rows and reports."""

import csv
import io
import json
import logging
import re

from walsh_summability.dyadic import GridSpec
from walsh_summability.tensor import GridFunction2D
from walsh_summability.walsh import GridFunction1D

logger = logging.getLogger(__name__)

_HEADER = re.compile(r"^#\s*resolution=(\d+)(?:\s+dims=([12]))?\s*$")


def write_grid(f, stream):
    """Write a grid function as CSV with a `# resolution=K` header.

    Values use repr() so that reading them back is exact.

    Args:
        f (GridFunction1D|GridFunction2D): Function to write.
        stream (io.TextIOBase): Output text stream.
    """
    writer = csv.writer(stream, lineterminator="\n")
    if isinstance(f, GridFunction2D):
        stream.write("# resolution=%d dims=2\n" % f.spec.resolution)
        for row in f.samples:
            writer.writerow([repr(float(value)) for value in row])
    else:
        stream.write("# resolution=%d\n" % f.spec.resolution)
        for value in f.samples:
            writer.writerow([repr(float(value))])


def read_grid(stream):
    """Read a grid function written by `write_grid`.

    Args:
        stream (io.TextIOBase): Input text stream.

    Returns:
        GridFunction1D|GridFunction2D: Parsed function.

    Raises:
        ValueError: Missing header, bad value or wrong shape.
    """
    header = stream.readline().strip()
    m = _HEADER.match(header)
    if not m:
        raise ValueError("Unable to parse line: %s" % header)
    spec = GridSpec(int(m.group(1)))
    rows = _read_values(stream)
    if m.group(2) == "2":
        return GridFunction2D(spec, rows)
    if any(len(row) != 1 for row in rows):
        raise ValueError("Expected one value per line in a 1D grid")
    return GridFunction1D(spec, [row[0] for row in rows])


def save_grid(f, path):
    """Write `f` to the file at `path`."""
    with open(path, "w", encoding="ascii", newline="") as output:
        write_grid(f, output)
    logger.debug("Saved %r grid to %s", f.spec, path)


def load_grid(path):
    """Read a grid function from the file at `path`."""
    with open(path, encoding="ascii") as input_file:
        result = read_grid(input_file)
    logger.debug("Loaded %r grid from %s", result.spec, path)
    return result


def load_rows(path):
    """Read matrix rows from a CSV file, one row per line.

    Blank lines and lines starting with '#' are ignored.

    Returns:
        list: Lists of floats.

    Raises:
        ValueError: Line is not a list of numbers.
    """
    with open(path, encoding="utf-8") as input_file:
        rows = _read_values(input_file)
    logger.info("Loaded %d matrix rows from %s", len(rows), path)
    return rows


def load_alphas(path):
    """Read a sequence of Cesaro orders, one per line.

    Raises:
        ValueError: Line is not a single number.
    """
    with open(path, encoding="utf-8") as input_file:
        rows = _read_values(input_file)
    alphas = []
    for row in rows:
        if len(row) != 1:
            raise ValueError("Unable to parse line: %s" % ",".join(map(repr, row)))
        alphas.append(row[0])
    logger.info("Loaded %d Cesaro orders from %s", len(alphas), path)
    return alphas


def dumps_json(report):
    """Return `report` as stable, indented ASCII JSON with a trailing newline."""
    return json.dumps(report, indent=2, ensure_ascii=True, allow_nan=False) + "\n"


def write_json(report, path=None, stream=None):
    """Write a JSON report to `path`, or to `stream` when no path is given."""
    text = dumps_json(report)
    if path is None:
        stream.write(text)
        return
    with open(path, "w", encoding="ascii", newline="\n") as output:
        output.write(text)
    logger.info("Wrote report to %s", path)


def write_csv_table(rows, header, stream):
    """Write a list of dicts as CSV with the given column order."""
    writer = csv.DictWriter(
        stream, fieldnames=header, lineterminator="\n", extrasaction="ignore"
    )
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def _read_values(stream):
    rows = []
    for line in stream:
        text = line.strip()
        if not text or text[0] == "#":
            continue
        try:
            (fields,) = csv.reader(io.StringIO(text))
            rows.append([float(field) for field in fields])
        except ValueError:
            raise ValueError("Unable to parse line: %s" % text) from None
    return rows
