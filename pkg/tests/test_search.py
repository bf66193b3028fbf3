import io
import json

import pytest

from heckesign.checkpoint import CheckpointError
from heckesign.coeffs import Sign, a2, sign_report
from heckesign.search import (
    CSV_HEADER,
    SearchRegion,
    classify_region,
    residual_region,
    read_csv,
    write_csv,
    write_jsonl,
)

# (N, k, dim, a2) for odd N <= 57, k <= 26, frozen from the exact search
TABLE_M2 = [
    (1, 2, 0, 0), (1, 4, 0, 0), (1, 6, 0, 0), (1, 8, 0, 0), (1, 10, 0, 0), (1, 12, 1, 0),
    (1, 14, 0, 0), (1, 16, 1, 0), (1, 18, 1, 0), (1, 20, 1, 0), (1, 22, 1, 0), (1, 26, 1, 0),
    (3, 2, 0, 0), (3, 4, 0, 0), (3, 6, 1, 0), (3, 8, 1, 0), (5, 2, 0, 0), (5, 4, 1, 0),
    (5, 6, 1, 0), (7, 2, 0, 0), (7, 4, 1, 0), (9, 2, 0, 0), (9, 4, 1, 0), (11, 2, 1, 0),
    (13, 2, 0, 0), (15, 2, 1, 0), (17, 2, 1, 0), (19, 2, 1, 0), (21, 2, 1, 0), (25, 2, 0, 0),
    (27, 2, 1, 0), (33, 2, 3, 0), (37, 2, 2, 0), (49, 2, 1, 0), (57, 2, 5, 0),
]


def rows(result):
    return [(r.N, r.k, r.dim, r.a2) for r in result.exceptional]


class TestRegion:
    def test_validation(self):
        with pytest.raises(ValueError):
            SearchRegion(3, 10, 5, 2, 4)
        with pytest.raises(ValueError):
            SearchRegion(3, 1, 5, 3, 7)
        with pytest.raises(ValueError):
            SearchRegion(0, 1, 5, 2, 4)

    def test_frontier_limits_weights(self):
        region = residual_region(3)
        assert region.n_hi == 62_999_999 and region.k_hi == 1288
        assert region.k_limit(1) == 1288
        assert region.k_limit(43) == 344
        assert region.k_limit(2_700_000) == 2
        assert region.k_limit(62_999_999) == 2


class TestClassify:
    def test_small_table_m2(self):
        result = classify_region(SearchRegion(2, 1, 57, 2, 26))
        assert rows(result) == TABLE_M2
        assert result.complete and result.certified_skips == 0

    def test_grid_accounting(self):
        region = SearchRegion(3, 1, 50, 2, 20)
        coprime = sum(1 for N in range(1, 51) if N % 3)
        exact = classify_region(region)
        hybrid = classify_region(region, "hybrid")
        assert exact.scanned_count == coprime * 10
        assert hybrid.scanned_count + hybrid.certified_skips == coprime * 10

    @pytest.mark.parametrize("m", [2, 3])
    def test_modes_agree(self, m):
        region = SearchRegion(m, 1, 600, 2, 60)
        exact = classify_region(region, "exact")
        hybrid = classify_region(region, "hybrid")
        assert exact.exceptional == hybrid.exceptional
        assert hybrid.certified_skips > 0

    def test_square_m_reports_nonpositive(self):
        result = classify_region(SearchRegion(4, 1, 50, 2, 12))
        assert result.exceptional
        for r in result.exceptional:
            assert r.N % 2 == 1
            assert r.a2 <= 0 and a2(4, r.N, r.k) == r.a2

    def test_hybrid_needs_certifier(self):
        with pytest.raises(ValueError):
            classify_region(SearchRegion(5, 1, 10, 2, 4), "hybrid")
        with pytest.raises(ValueError):
            classify_region(SearchRegion(3, 1, 10, 2, 4), "fast")

    def test_exact_mode_any_m(self):
        result = classify_region(SearchRegion(7, 1, 12, 4, 4))
        assert (12, 4, 3, 0) in rows(result)

    def test_worker_count_does_not_matter(self):
        region = SearchRegion(3, 1, 100, 2, 20)
        one = classify_region(region, workers=1, chunk_size=7)
        many = classify_region(region, workers=3, chunk_size=7)
        assert one.exceptional == many.exceptional
        assert one.scanned_count == many.scanned_count

    def test_sorted(self):
        result = classify_region(SearchRegion(3, 1, 120, 2, 30), chunk_size=9)
        keys = [(r.N, r.k) for r in result.exceptional]
        assert keys == sorted(keys)

    def test_budget_returns_partial(self):
        result = classify_region(SearchRegion(3, 1, 400, 2, 30), chunk_size=10, max_seconds=0)
        assert not result.complete


class TestCheckpoints:
    def test_resume_matches_uninterrupted(self, tmp_path):
        region = SearchRegion(3, 1, 300, 2, 30)
        path = tmp_path / "run.jsonl"
        full = classify_region(region, chunk_size=20)
        partial = classify_region(region, chunk_size=20, checkpoint=path, max_seconds=0.0)
        assert not partial.complete
        # simulate a crash after a few chunks by appending only some of them
        from heckesign.search import _process_chunk
        from heckesign.checkpoint import Checkpoint

        ck = Checkpoint(path, "search", {**region.params(), "mode": "exact", "chunk": 20})
        for lo in (1, 21, 41):
            ck.append(_process_chunk(region.params(), "exact", lo, lo + 20))
        resumed = classify_region(region, chunk_size=20, checkpoint=path)
        assert resumed.complete
        assert resumed.exceptional == full.exceptional
        assert resumed.scanned_count == full.scanned_count

        buf_a, buf_b = io.StringIO(), io.StringIO()
        write_csv(full.exceptional, buf_a)
        write_csv(resumed.exceptional, buf_b)
        assert buf_a.getvalue() == buf_b.getvalue()

    def test_empty_checkpoint_is_full_run(self, tmp_path):
        region = SearchRegion(2, 1, 57, 2, 26)
        result = classify_region(region, checkpoint=tmp_path / "new.jsonl")
        assert rows(result) == TABLE_M2

    def test_foreign_checkpoint_rejected(self, tmp_path):
        path = tmp_path / "run.jsonl"
        classify_region(SearchRegion(2, 1, 57, 2, 26), checkpoint=path)
        with pytest.raises(CheckpointError):
            classify_region(SearchRegion(2, 1, 59, 2, 26), checkpoint=path)


class TestFormats:
    def test_csv_round_trip(self):
        reports = classify_region(SearchRegion(3, 1, 300, 2, 30)).exceptional
        buf = io.StringIO()
        write_csv(reports, buf)
        text = buf.getvalue()
        assert text.splitlines()[0] == ",".join(CSV_HEADER)
        again = io.StringIO()
        write_csv(read_csv(text, 3), again)
        assert again.getvalue() == text

    def test_csv_negative_values(self):
        reps = [sign_report(4, 23, 2)]
        buf = io.StringIO()
        write_csv(reps, buf)
        assert buf.getvalue() == "N,k,dim,a2,sign\n23,2,2,-1,-\n"
        assert read_csv(buf.getvalue(), 4)[0].sign is Sign.NEGATIVE

    def test_csv_bad_header(self):
        with pytest.raises(ValueError):
            read_csv("N,k\n1,2\n", 3)

    def test_jsonl(self):
        buf = io.StringIO()
        write_jsonl([sign_report(3, 2, 12)], buf)
        rec = json.loads(buf.getvalue())
        assert rec == {"m": 3, "N": 2, "k": 12, "dim": 2, "a2": "63504", "sign": "+"}

    def test_summary(self):
        s = classify_region(SearchRegion(2, 1, 57, 2, 26)).summary()
        assert s["exceptional"] == 35 and s["trivial"] == 32
        assert s["nontrivial_by_sign"] == {"+": 0, "0": 3, "-": 0}
