import io

import numpy as np
import pytest

from mwcr.ingest import (
    CauseLabel,
    FollicularRow,
    TiedTimesWarning,
    compute_cause,
    parse_dataset,
    prepare_case1,
    prepare_case2,
    read_dataset,
    write_dataset,
)
from mwcr.likelihood import ProgressiveSample


def row(resp="CR", relsite="", stat=0, dftime=1.0):
    return FollicularRow(resp=resp, relsite=relsite, stat=stat, dftime=dftime)


class TestComputeCause:
    def test_no_response_is_disease(self):
        assert compute_cause(row(resp="NR")) is CauseLabel.DISEASE

    def test_relapse_site_is_disease(self):
        assert compute_cause(row(relsite="NODAL")) is CauseLabel.DISEASE

    def test_relapse_wins_over_death(self):
        # a relapsed subject who later died still counts as disease
        assert compute_cause(row(relsite="NODAL", stat=1)) is CauseLabel.DISEASE
        assert compute_cause(row(resp="NR", stat=1)) is CauseLabel.DISEASE

    def test_death_without_relapse(self):
        assert compute_cause(row(stat=1)) is CauseLabel.DEATH

    def test_censored(self):
        assert compute_cause(row()) is CauseLabel.CENSORED


SAMPLE_TEXT = """\
age hgb resp relsite stat dftime
# comment line
35 120 CR NA 0 5.5
62 110 NR "" 1 2.25

71 135 CR NODAL 1 4.0
44 128 CR "" 1 1.5
"""


class TestParseDataset:
    def test_parses_rows_and_extras(self):
        rows = parse_dataset(io.StringIO(SAMPLE_TEXT))
        assert len(rows) == 4
        assert rows[0].resp == "CR"
        assert rows[0].relsite == ""
        assert rows[0].stat == 0
        assert rows[0].dftime == 5.5
        assert rows[0].extra == {"age": "35", "hgb": "120"}

    def test_missing_tokens_mean_no_relapse(self):
        rows = parse_dataset(io.StringIO(SAMPLE_TEXT))
        assert rows[0].relsite == ""  # NA
        assert rows[1].relsite == ""  # quoted empty
        assert rows[2].relsite == "NODAL"

    def test_column_order_is_free(self):
        text = "dftime stat relsite resp\n3.5 1 NA CR\n"
        rows = parse_dataset(io.StringIO(text))
        assert rows == [row(stat=1, dftime=3.5)]

    def test_bytes_source(self):
        rows = parse_dataset(io.BytesIO(SAMPLE_TEXT.encode("utf-8")))
        assert len(rows) == 4

    def test_path_source(self, tmp_path):
        path = tmp_path / "follic.txt"
        path.write_text(SAMPLE_TEXT, encoding="utf-8")
        assert parse_dataset(path) == parse_dataset(io.StringIO(SAMPLE_TEXT))

    def test_missing_column_named_with_line(self):
        text = "age resp relsite stat\n35 CR NA 0\n"
        with pytest.raises(ValueError, match=r"line 1.*dftime"):
            parse_dataset(io.StringIO(text))

    def test_ragged_row_line_number(self):
        text = "resp relsite stat dftime\nCR NA 0 5.5\nCR NA 0\n"
        with pytest.raises(ValueError, match="line 3"):
            parse_dataset(io.StringIO(text))

    def test_bad_stat_values(self):
        header = "resp relsite stat dftime\n"
        with pytest.raises(ValueError, match="line 2.*stat"):
            parse_dataset(io.StringIO(header + "CR NA yes 5.5\n"))
        with pytest.raises(ValueError, match="line 2.*stat"):
            parse_dataset(io.StringIO(header + "CR NA 2 5.5\n"))

    def test_bad_dftime_values(self):
        header = "resp relsite stat dftime\n"
        with pytest.raises(ValueError, match="line 2.*dftime"):
            parse_dataset(io.StringIO(header + "CR NA 0 soon\n"))
        with pytest.raises(ValueError, match="line 2.*positive"):
            parse_dataset(io.StringIO(header + "CR NA 0 0.0\n"))

    def test_empty_input(self):
        with pytest.raises(ValueError, match="empty input"):
            parse_dataset(io.StringIO("\n\n"))


class TestPrepare:
    def test_case2_folds_censored_into_preceding_failure(self):
        rows = [
            row(resp="NR", dftime=1.0),
            row(dftime=2.0),
            row(dftime=3.0),
            row(stat=1, dftime=4.0),
        ]
        sample = prepare_case2(rows)
        assert sample.n == 4
        assert sample.times.tolist() == [1.0, 4.0]
        assert sample.causes.tolist() == [1, 2]
        assert sample.removed.tolist() == [2, 0]

    def test_case2_leading_censored_goes_to_first_failure(self):
        rows = [
            row(dftime=0.5),
            row(resp="NR", dftime=1.0),
            row(stat=1, dftime=2.0),
        ]
        sample = prepare_case2(rows)
        assert sample.removed.tolist() == [1, 0]
        assert sample.n == 3

    def test_case1_keeps_failures_only(self):
        rows = [
            row(resp="NR", dftime=1.0),
            row(dftime=2.0),
            row(stat=1, dftime=4.0),
        ]
        sample = prepare_case1(rows)
        assert sample.n == 2
        assert sample.m == 2
        assert sample.removed.tolist() == [0, 0]

    def test_case1_matches_case2_events(self):
        rows = [
            row(resp="NR", dftime=0.8),
            row(dftime=1.1),
            row(stat=1, dftime=1.9),
            row(dftime=2.5),
            row(relsite="NODAL", dftime=3.2),
        ]
        case1 = prepare_case1(rows)
        case2 = prepare_case2(rows)
        assert case1.times.tolist() == case2.times.tolist()
        assert case1.causes.tolist() == case2.causes.tolist()

    def test_censoring_tied_with_failure_counts_at_that_failure(self):
        # at equal times the failure is processed first, so the censored
        # subject withdraws at it rather than at the previous failure
        rows = [
            row(resp="NR", dftime=1.0),
            row(dftime=2.0),
            row(stat=1, dftime=2.0),
        ]
        sample = prepare_case2(rows)
        assert sample.times.tolist() == [1.0, 2.0]
        assert sample.removed.tolist() == [0, 1]

    def test_tied_failures_perturbed(self):
        rows = [row(resp="NR", dftime=3.0), row(stat=1, dftime=3.0)]
        with pytest.warns(TiedTimesWarning):
            sample = prepare_case1(rows)
        assert sample.times[0] == 3.0
        assert sample.times[1] == np.nextafter(3.0, np.inf)

    def test_all_censored_rejected(self):
        with pytest.raises(ValueError, match="no failures"):
            prepare_case2([row(dftime=1.0), row(dftime=2.0)])


class TestExchangeFormat:
    def test_round_trip(self, tmp_path):
        records = [
            (0.037184702387, 1, 0),
            (1.5, 2, 3),
            (2.0000000000000004, 1, 0),
        ]
        sample = ProgressiveSample(records, 6)
        path = tmp_path / "data.csv"
        write_dataset(sample, path)
        assert read_dataset(path) == sample

    def test_written_shape(self, tmp_path):
        sample = ProgressiveSample([(1.25, 1, 1)], 2)
        path = tmp_path / "data.csv"
        write_dataset(sample, path)
        assert path.read_text(encoding="utf-8") == (
            "# n=2\ntime,cause,removed\n1.25,1,1\n"
        )

    def test_read_requires_header(self):
        with pytest.raises(ValueError, match="header"):
            read_dataset(io.StringIO("# n=2\n1.25,1,1\n"))

    def test_read_requires_cohort_comment(self):
        with pytest.raises(ValueError, match="n="):
            read_dataset(io.StringIO("time,cause,removed\n1.25,1,0\n"))

    def test_read_bad_field_count(self):
        text = "# n=2\ntime,cause,removed\n1.25,1\n"
        with pytest.raises(ValueError, match="line 3"):
            read_dataset(io.StringIO(text))

    def test_read_bad_value_line_number(self):
        text = "# n=2\ntime,cause,removed\n1.25,7,1\n"
        with pytest.raises(ValueError, match="line 3.*cause"):
            read_dataset(io.StringIO(text))

    def test_read_accounting_checked(self):
        text = "# n=9\ntime,cause,removed\n1.25,1,0\n"
        with pytest.raises(ValueError, match="accounting"):
            read_dataset(io.StringIO(text))
