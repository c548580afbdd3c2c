import io

import mpmath
import pytest
from mpmath import mp, mpf

from keiperli.errors import SchemaError
from keiperli.liseq import SequencePoint, lambda_range
from keiperli.tables import CsvSink, format_sci, read_csv, write_points


@pytest.mark.parametrize("x,text", [
    (mpf("0.0691763957719357"), "6.91763957719e-2"),
    (mpf(5), "5.00000000000e+0"),
    (mpf(-123.456), "-1.23456000000e+2"),
])
def test_format_sci(x, text):
    assert format_sci(x, 12) == text


def test_round_trip_at_declared_digits(tmp_path):
    points = lambda_range(range(1, 40), 12)
    path = tmp_path / "run.csv"
    write_points(path, points, 12)
    table = read_csv(path)
    assert table.n == list(range(1, 40))
    for p, lam in zip(points, table.lam):
        assert lam == mpf(format_sci(p.lam, 12))
        assert abs(lam - p.lam) <= mpf(10) ** -11 * abs(p.lam)


def test_variant_column():
    buf = io.StringIO()
    sink = CsvSink(buf, 8, variant="-", timing=False)
    sink(SequencePoint(3, mpf(1.5), mpf(0.25), 100, 12.5))
    assert buf.getvalue().splitlines() == [
        "n,lambda,delta,bits,elapsed_ms,variant", "3,1.5000000e+0,2.5000000e-1,100,0,-"]


@pytest.mark.parametrize("text", [
    "", "n,lambda\n1,2\n", "n,lambda,delta,bits,elapsed_ms\n1,abc,0,1,1\n",
    "n,lambda,delta,bits,elapsed_ms\n1,1,1\n", "n,lambda,delta,bits,elapsed_ms\n",
])
def test_schema_errors(tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(SchemaError):
        read_csv(path)
