import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topicbench import zst
from topicbench.ingest import (
    CommentRecord,
    DumpStats,
    IngestError,
    SubmissionRecord,
    decompress_dump,
    ingest_dumps,
    load_threads,
    merge_threads,
    partition_by_month,
    save_threads,
)


def _write_ndjson(path, records):
    path.write_text("\n".join(json.dumps(r) for r in records))


class TestDecompressDump:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text("")
        stats = DumpStats()
        assert list(decompress_dump(path, stats)) == []
        assert stats.malformed_lines == 0

    def test_three_valid_lines(self, tmp_path):
        path = tmp_path / "ok.json"
        records = [{"id": f"s{i}", "created_utc": i} for i in range(3)]
        _write_ndjson(path, records)
        assert list(decompress_dump(path)) == records

    def test_truncated_line_counts_warning(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"id": "a"}\n{"id": "b"}\n{"id": "c", "created')
        stats = DumpStats()
        out = list(decompress_dump(path, stats))
        assert len(out) == 2
        assert stats.malformed_lines == 1

    def test_missing_file_is_fatal(self, tmp_path):
        with pytest.raises(IngestError):
            list(decompress_dump(tmp_path / "nope.json"))

    def test_zst_round_trip_byte_for_byte(self, tmp_path):
        records = [{"id": f"s{i}", "title": f"Title {i}", "created_utc": 1000 + i} for i in range(20)]
        raw = "\n".join(json.dumps(r) for r in records).encode()
        path = tmp_path / "dump.zst"
        path.write_bytes(zst.compress_bytes(raw))
        assert zst.is_zstd(path)
        assert list(decompress_dump(path)) == records
        # recompress what we read and read it again: identical line content
        again = tmp_path / "again.zst"
        again.write_bytes(zst.compress_bytes(raw))
        assert list(decompress_dump(again)) == records


class TestPartitionByMonth:
    def test_epoch_to_utc_month(self):
        buckets = partition_by_month([{"id": "a", "created_utc": 1672531200}])
        assert list(buckets) == ["2023-01"]

    def test_empty_stream(self):
        assert partition_by_month([]) == {}

    def test_same_month_shares_bucket(self):
        records = [
            {"id": "a", "created_utc": 1672531200},
            {"id": "b", "created_utc": 1672531300},
        ]
        buckets = partition_by_month(records)
        assert len(buckets["2023-01"]) == 2

    def test_missing_created_utc_goes_to_unknown(self):
        buckets = partition_by_month([{"id": "a"}])
        assert [r["id"] for r in buckets["unknown"]] == ["a"]

    @given(st.lists(st.integers(min_value=0, max_value=2_000_000_000), max_size=50))
    def test_partition_property(self, stamps):
        records = [{"id": str(i), "created_utc": ts} for i, ts in enumerate(stamps)]
        buckets = partition_by_month(records)
        assert sum(len(v) for v in buckets.values()) == len(records)
        seen = sorted(r["id"] for v in buckets.values() for r in v)
        assert seen == sorted(r["id"] for r in records)


class TestMergeThreads:
    def test_submission_without_comments(self):
        subs = [SubmissionRecord(id="s1", title="T", selftext="S")]
        threads, orphans = merge_threads(subs, [])
        assert threads[0].text == "T S"
        assert threads[0].comment_count == 0
        assert orphans == 0

    def test_comments_merge_chronologically(self):
        subs = [SubmissionRecord(id="s1", title="T", selftext="S")]
        comments = [
            CommentRecord(id="c1", link_id="t3_s1", body="A", created_utc=2),
            CommentRecord(id="c2", link_id="t3_s1", body="B", created_utc=1),
        ]
        threads, orphans = merge_threads(subs, comments)
        assert threads[0].text == "T S B A"
        assert threads[0].comment_count == 2
        assert orphans == 0

    def test_created_utc_tie_breaks_on_comment_id(self):
        subs = [SubmissionRecord(id="s1", title="T")]
        comments = [
            CommentRecord(id="z", link_id="t3_s1", body="ZZ", created_utc=5),
            CommentRecord(id="a", link_id="t3_s1", body="AA", created_utc=5),
        ]
        threads, _ = merge_threads(subs, comments)
        assert threads[0].text == "T AA ZZ"

    def test_orphan_comment_counted_not_attached(self):
        subs = [SubmissionRecord(id="s1", title="T")]
        comments = [CommentRecord(id="c1", link_id="t3_missing", body="X")]
        threads, orphans = merge_threads(subs, comments)
        assert orphans == 1
        assert threads[0].comment_count == 0

    @given(
        st.lists(st.sampled_from(["s1", "s2", "s3", "sX"]), max_size=30),
        st.integers(min_value=1, max_value=3),
    )
    @settings(max_examples=50)
    def test_comment_conservation(self, links, n_subs):
        subs = [SubmissionRecord(id=f"s{i+1}", title=f"T{i}") for i in range(n_subs)]
        comments = [
            CommentRecord(id=f"c{i}", link_id=f"t3_{link}", body="b", created_utc=i)
            for i, link in enumerate(links)
        ]
        threads, orphans = merge_threads(subs, comments)
        assert len(threads) == len(subs)
        assert sum(t.comment_count for t in threads) + orphans == len(comments)

    def test_record_invariants(self):
        with pytest.raises(ValueError):
            SubmissionRecord(id="", title="x")
        with pytest.raises(ValueError):
            CommentRecord(id="c", link_id="t1_wrong")


def test_ingest_dumps_end_to_end(tmp_path):
    subs = [
        {"id": "s1", "title": "First", "selftext": "Post", "created_utc": 10, "subreddit": "r"},
        {"id": "s2", "title": "Second", "selftext": "", "created_utc": 20, "subreddit": "r"},
    ]
    comments = [
        {"id": "c1", "link_id": "t3_s1", "body": "one", "created_utc": 30},
        {"id": "c2", "link_id": "t3_s1", "body": "two", "created_utc": 25},
        {"id": "c3", "link_id": "t3_ghost", "body": "orphan", "created_utc": 40},
    ]
    rs, rc = tmp_path / "RS_r.json", tmp_path / "RC_r.json"
    _write_ndjson(rs, subs)
    _write_ndjson(rc, comments)
    report = ingest_dumps(rs, rc)
    assert len(report.threads) == 2
    assert report.orphan_comments == 1
    assert report.threads[0].text == "First Post two one"

    out = tmp_path / "threads.json"
    save_threads(report.threads, out)
    assert [t.text for t in load_threads(out)] == [t.text for t in report.threads]
