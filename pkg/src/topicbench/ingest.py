"""Archive ingestion: dump decompression, month partitioning, thread merging.

Subreddit archives arrive as ``RS_<name>`` (submissions) and ``RC_<name>``
(comments) NDJSON files, optionally zstd-compressed. Submissions carry an
``id``; comments point at their submission through ``link_id`` (prefixed
``t3_``). A thread is one submission's title + selftext followed by its
comment bodies in chronological order — the document unit for all modelling
downstream.
"""

from __future__ import annotations

import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator

from . import zst

log = logging.getLogger(__name__)

UNKNOWN_MONTH = "unknown"


class IngestError(RuntimeError):
    """Fatal ingestion problem (missing or unreadable dump)."""


@dataclass
class SubmissionRecord:
    id: str
    title: str = ""
    selftext: str = ""
    created_utc: int = 0
    subreddit: str = ""

    def __post_init__(self):
        if not self.id:
            raise ValueError("submission id must be non-empty")
        if self.created_utc < 0:
            raise ValueError("created_utc must be >= 0")


@dataclass
class CommentRecord:
    id: str
    link_id: str
    body: str = ""
    created_utc: int = 0

    def __post_init__(self):
        if not self.id:
            raise ValueError("comment id must be non-empty")
        if not self.link_id.startswith("t3_"):
            raise ValueError("link_id must start with 't3_'")


@dataclass
class Thread:
    id: str
    text: str
    comment_count: int = 0


@dataclass
class DumpStats:
    records: int = 0
    malformed_lines: int = 0


def decompress_dump(path: str | Path, stats: DumpStats | None = None) -> Iterator[dict]:
    """Stream parsed JSON records from an NDJSON dump (.zst or plain).

    Malformed lines are skipped with a warning and counted on ``stats``;
    a missing or unreadable file raises :class:`IngestError`.
    """
    path = Path(path)
    if not path.is_file():
        raise IngestError(f"dump not found: {path}")
    if stats is None:
        stats = DumpStats()
    try:
        fh = zst.open_text(path)
    except (OSError, zst.ZstdError) as exc:
        raise IngestError(f"cannot open dump {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError:
                stats.malformed_lines += 1
                log.warning("%s:%d: skipping malformed line", path.name, lineno)
                continue
            if not isinstance(record, dict):
                stats.malformed_lines += 1
                log.warning("%s:%d: skipping non-object line", path.name, lineno)
                continue
            stats.records += 1
            yield record


def partition_by_month(records: Iterable[dict]) -> dict[str, list[dict]]:
    """Bucket records by their UTC "YYYY-MM" month.

    Records without a usable ``created_utc`` land in the ``"unknown"``
    bucket with a warning; every record appears in exactly one bucket.
    """
    buckets: dict[str, list[dict]] = defaultdict(list)
    for record in records:
        created = record.get("created_utc")
        try:
            ts = int(created)
        except (TypeError, ValueError):
            log.warning("record %r has no usable created_utc", record.get("id"))
            buckets[UNKNOWN_MONTH].append(record)
            continue
        dt = datetime.fromtimestamp(ts, tz=timezone.utc)
        buckets[f"{dt.year:04d}-{dt.month:02d}"].append(record)
    return dict(buckets)


def _strip_link_prefix(link_id: str) -> str:
    return link_id[3:] if link_id.startswith("t3_") else link_id


def merge_threads(
    submissions: Iterable[SubmissionRecord],
    comments: Iterable[CommentRecord],
) -> tuple[list[Thread], int]:
    """Merge submissions and their comments into threads.

    Returns one Thread per submission (same order) plus the count of orphan
    comments whose link_id matched no submission. Comment bodies are appended
    in ascending created_utc order, ties broken by comment id, and all text
    segments are joined with single spaces.
    """
    submissions = list(submissions)
    by_submission: dict[str, list[CommentRecord]] = defaultdict(list)
    known = {s.id for s in submissions}
    orphans = 0
    for comment in comments:
        target = _strip_link_prefix(comment.link_id)
        if target in known:
            by_submission[target].append(comment)
        else:
            orphans += 1
    threads = []
    for sub in submissions:
        attached = sorted(by_submission[sub.id], key=lambda c: (c.created_utc, c.id))
        segments = [sub.title, sub.selftext] + [c.body for c in attached]
        text = " ".join(seg for seg in segments if seg)
        threads.append(Thread(id=sub.id, text=text, comment_count=len(attached)))
    if orphans:
        log.warning("%d orphan comments dropped", orphans)
    return threads, orphans


def parse_submission(record: dict) -> SubmissionRecord:
    return SubmissionRecord(
        id=str(record["id"]),
        title=str(record.get("title", "") or ""),
        selftext=str(record.get("selftext", "") or ""),
        created_utc=int(record.get("created_utc", 0) or 0),
        subreddit=str(record.get("subreddit", "") or ""),
    )


def parse_comment(record: dict) -> CommentRecord:
    return CommentRecord(
        id=str(record["id"]),
        link_id=str(record["link_id"]),
        body=str(record.get("body", "") or ""),
        created_utc=int(record.get("created_utc", 0) or 0),
    )


@dataclass
class IngestReport:
    threads: list[Thread] = field(default_factory=list)
    orphan_comments: int = 0
    malformed_lines: int = 0
    skipped_records: int = 0


def ingest_dumps(submissions_path: str | Path, comments_path: str | Path) -> IngestReport:
    """Full ingest of one subreddit: RS_/RC_ dumps in, threads out."""
    stats = DumpStats()
    submissions = []
    skipped = 0
    for record in decompress_dump(submissions_path, stats):
        try:
            submissions.append(parse_submission(record))
        except (KeyError, ValueError):
            skipped += 1
    comments = []
    for record in decompress_dump(comments_path, stats):
        try:
            comments.append(parse_comment(record))
        except (KeyError, ValueError):
            skipped += 1
    if skipped:
        log.warning("%d records lacked required fields", skipped)
    threads, orphans = merge_threads(submissions, comments)
    return IngestReport(
        threads=threads,
        orphan_comments=orphans,
        malformed_lines=stats.malformed_lines,
        skipped_records=skipped,
    )


def save_threads(threads: Iterable[Thread], path: str | Path) -> None:
    payload = [
        {"id": t.id, "text": t.text, "comment_count": t.comment_count} for t in threads
    ]
    Path(path).write_text(json.dumps(payload, indent=1, sort_keys=True))


def load_threads(path: str | Path) -> list[Thread]:
    payload = json.loads(Path(path).read_text())
    return [
        Thread(id=item["id"], text=item["text"], comment_count=item["comment_count"])
        for item in payload
    ]
