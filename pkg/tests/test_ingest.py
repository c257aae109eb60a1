"""Tests for two-environment CSV ingestion."""

from __future__ import annotations

import numpy as np
import pytest

from causal_reg.errors import (
    DataError,
    EmptyEnvironment,
    MissingColumn,
    NonNumericCell,
    UnknownLabel,
)
from causal_reg.estimation import compute_moments
from causal_reg.experiments.ingest import ingest_csv, write_pair_csv

FOUR_ROWS = "x1,x2,y,env\n1,2,3,obs\n4,5,6,shift\n7,8,9,obs\n10,11,12,shift\n"


def _write(tmp_path, text: str, name: str = "data.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestIngestCsv:
    def test_partitions_by_label(self, tmp_path):
        pair = ingest_csv(_write(tmp_path, FOUR_ROWS))
        assert pair.sizes == (2, 2)
        assert pair.p == 2
        np.testing.assert_array_equal(pair.obs.x, [[1, 2], [7, 8]])
        np.testing.assert_array_equal(pair.shifted.y, [6, 12])
        assert pair.obs.label == "obs"

    def test_custom_labels_and_column(self, tmp_path):
        text = "a,y,group\n1,1,base\n2,2,treated\n3,3,base\n"
        pair = ingest_csv(_write(tmp_path, text), env_column="group", env_labels=["base", "treated"])
        assert pair.sizes == (1, 2)

    def test_centering(self, tmp_path):
        pair = ingest_csv(_write(tmp_path, FOUR_ROWS), center=True)
        for d in (pair.obs, pair.shifted):
            np.testing.assert_allclose(d.x.mean(axis=0), 0.0, atol=1e-12)
            assert abs(d.y.mean()) < 1e-12

    def test_unknown_label(self, tmp_path):
        with pytest.raises(UnknownLabel) as info:
            ingest_csv(_write(tmp_path, FOUR_ROWS + "1,1,1,test\n"))
        assert info.value.label == "test"
        assert info.value.exit_code == 3

    def test_missing_target(self, tmp_path):
        with pytest.raises(MissingColumn) as info:
            ingest_csv(_write(tmp_path, "x1,env\n1,obs\n2,shift\n"))
        assert info.value.column == "y"

    def test_missing_environment_column(self, tmp_path):
        with pytest.raises(MissingColumn):
            ingest_csv(_write(tmp_path, FOUR_ROWS), env_column="site")

    def test_non_numeric_cell(self, tmp_path):
        text = "x1,y,env\n1,1,obs\nabc,2,shift\n"
        with pytest.raises(NonNumericCell) as info:
            ingest_csv(_write(tmp_path, text))
        assert (info.value.row, info.value.column) == (2, "x1")

    def test_empty_environment(self, tmp_path):
        with pytest.raises(EmptyEnvironment) as info:
            ingest_csv(_write(tmp_path, "x1,y,env\n1,1,obs\n2,2,obs\n"))
        assert info.value.label == "shift"

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            ingest_csv(tmp_path / "absent.csv")


class TestRoundTrip:
    def test_written_pair_reads_back_exactly(self, tmp_path, benchmark_sample):
        pair = benchmark_sample(250, seed=12, n_obs=180)
        path = write_pair_csv(pair, tmp_path / "pair.csv")
        back = ingest_csv(path)
        assert back.sizes == pair.sizes
        m, m_back = compute_moments(pair), compute_moments(back)
        np.testing.assert_allclose(m_back.g_diff.entries, m.g_diff.entries, rtol=0, atol=1e-12)
        np.testing.assert_allclose(m_back.z_plus, m.z_plus, rtol=0, atol=1e-12)
        np.testing.assert_array_equal(back.shifted.x, pair.shifted.x)
