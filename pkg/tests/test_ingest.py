import io
import math

import numpy as np
import pytest

from maxtail.errors import IngestionError, InsufficientDataError
from maxtail.ingest import IngestSpec, read_column, stream_column
from maxtail.spectrum import compute_spectrum_batch, finalize


def write(tmp_path, text, name="in.csv"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_headerless_single_column(tmp_path):
    col = read_column(IngestSpec(write(tmp_path, "1\n2.5\n3e2\n")))
    assert col.values.tolist() == [1.0, 2.5, 300.0]
    assert col.name is None and col.rows_read == 3


def test_header_detected_and_named_column(tmp_path):
    path = write(tmp_path, "time,price,volume\n1,10.5,300\n2,11.0,200\n")
    assert read_column(IngestSpec(path, "volume")).values.tolist() == [300.0, 200.0]
    col = read_column(IngestSpec(path, 1))
    assert col.name == "price" and col.values.tolist() == [10.5, 11.0]
    assert read_column(IngestSpec(path, "2")).values.tolist() == [300.0, 200.0]


def test_forced_header_options(tmp_path):
    path = write(tmp_path, "5\n6\n7\n")
    assert read_column(IngestSpec(path, 0, header=True)).values.tolist() == [6.0, 7.0]
    with pytest.raises(IngestionError):
        read_column(IngestSpec(path, "x", header=False))


def test_delimiter_quotes_comments_skip(tmp_path):
    text = 'junk line\n# comment\nname;value\n"a;b";"4"\n\nc;5\n'
    col = read_column(IngestSpec(write(tmp_path, text), "value", delimiter=";", skip_rows=1))
    assert col.values.tolist() == [4.0, 5.0]
    assert col.comments == ["comment"]


def test_zero_under_error_policy_names_row(tmp_path):
    path = write(tmp_path, "v\n3\n0\n4\n")
    with pytest.raises(IngestionError) as e:
        read_column(IngestSpec(path, "v"))
    assert e.value.row == 3 and e.value.column == "v"
    assert "row 3" in str(e.value)


def test_drop_policy_counts(tmp_path):
    path = write(tmp_path, "3\n0\n-2\n4\n")
    col = read_column(IngestSpec(path, positivity="drop"))
    assert col.values.tolist() == [3.0, 4.0] and col.dropped == 2


@pytest.mark.parametrize("bad", ["abc", "", "nan", "inf"])
def test_non_numeric_rejected(tmp_path, bad):
    path = write(tmp_path, f"1\n2\n{bad},\n")
    with pytest.raises(IngestionError) as e:
        read_column(IngestSpec(path, positivity="drop"))
    assert e.value.row == 3


def test_missing_field_and_column(tmp_path):
    path = write(tmp_path, "a,b\n1,2\n3\n")
    with pytest.raises(IngestionError) as e:
        read_column(IngestSpec(path, "b"))
    assert e.value.row == 3
    with pytest.raises(IngestionError):
        read_column(IngestSpec(path, "zzz"))
    with pytest.raises(IngestionError):
        read_column(IngestSpec(str(tmp_path / "missing.csv")))


def test_too_few_values(tmp_path):
    with pytest.raises(InsufficientDataError):
        read_column(IngestSpec(write(tmp_path, "v\n3\n")))
    with pytest.raises(InsufficientDataError):
        read_column(IngestSpec(write(tmp_path, "0\n3\n"), positivity="drop"))


def test_spec_validation():
    with pytest.raises(IngestionError):
        IngestSpec(positivity="shift")
    with pytest.raises(IngestionError):
        IngestSpec(delimiter=";;")
    with pytest.raises(IngestionError):
        IngestSpec(skip_rows=-1)


def test_stdin(monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("2\n3\n5\n"))
    assert read_column(IngestSpec("-")).values.tolist() == [2.0, 3.0, 5.0]


def test_stream_column_matches_batch(tmp_path):
    vals = np.exp(np.random.default_rng(1).standard_normal(5000))
    path = write(tmp_path, "x\n" + "\n".join(repr(v) for v in vals.tolist()) + "\n")
    state, col = stream_column(IngestSpec(path, "x"), chunk=333)
    assert finalize(state) == compute_spectrum_batch(read_column(IngestSpec(path, "x")).values)
    assert col.values.size == 0 and col.rows_read == 5000
    with pytest.raises(InsufficientDataError):
        stream_column(IngestSpec(write(tmp_path, "4\n", "one.csv")))


def test_simulate_header_is_parsed(tmp_path):
    path = write(tmp_path, '# maxtail.simulate: {"variant": "iid_pareto", "seed": 3}\nvalue\n1.5\n2.5\n')
    col = read_column(IngestSpec(path))
    assert col.source_config == {"variant": "iid_pareto", "seed": 3}
    assert col.name == "value"
