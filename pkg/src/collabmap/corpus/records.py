"""Parsers for bibliographic record files.

Two input layouts are supported:

* tagged field: UTF-8 text, a record opens at a ``PT <type>`` line, carries
  two-letter field tags (``UT`` id, ``TI`` title, ``DT`` document type,
  ``PY`` year, ``C1`` address, repeatable), continuation lines start with
  three spaces, the record closes at ``ER`` and the file at ``EF``.
* delimited: CSV with header ``id,doc_type,year,addresses`` where the
  addresses cell holds ``;``-separated affiliation strings.

Parsing is lenient by default: malformed spans are logged to an issue
ledger (with line numbers) and skipped. Strict mode raises on the first
issue instead.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from collabmap.errors import ParseError

_RECORD_START = "PT"
_RECORD_END = "ER"
_FILE_END = "EF"


@dataclass(frozen=True)
class RawRecord:
    record_id: str
    doc_type: str
    pub_year: int
    address_lines: tuple[str, ...]
    title: str | None = None


@dataclass(frozen=True)
class ParseIssue:
    line_no: int
    message: str


def parse_records(
    data: bytes | str,
    fmt: str = "tagged",
    strict: bool = False,
    source_name: str = "input",
) -> tuple[list[RawRecord], list[ParseIssue]]:
    """Parse a record file into RawRecords plus an issue ledger.

    ``source_name`` seeds synthesized record ids when a record carries no
    explicit id (``<source_name>#<ordinal>``).
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if fmt == "tagged":
        records, issues = _parse_tagged(data, source_name)
    elif fmt == "delimited":
        records, issues = _parse_delimited(data)
    else:
        raise ValueError(f"unknown record format: {fmt!r}")
    if strict and issues:
        first = issues[0]
        raise ParseError(first.line_no, first.message)
    return records, issues


def _is_tag_line(line: str) -> bool:
    return len(line) >= 2 and line[:2].isalnum() and line[:2].isupper() and (
        len(line) == 2 or line[2] == " "
    )


def _parse_tagged(text: str, source_name: str) -> tuple[list[RawRecord], list[ParseIssue]]:
    records: list[RawRecord] = []
    issues: list[ParseIssue] = []
    seen_ids: set[str] = set()

    fields: dict[str, list[str]] = {}
    in_record = False
    start_line = 0
    ordinal = 0
    current_tag: str | None = None

    def discard(line_no: int, message: str) -> None:
        nonlocal in_record, current_tag
        issues.append(ParseIssue(line_no, message))
        fields.clear()
        in_record = False
        current_tag = None

    def close_record(line_no: int) -> None:
        nonlocal in_record, current_tag
        record_id = fields.get("UT", [""])[0].strip() or f"{source_name}#{ordinal}"
        if record_id in seen_ids:
            discard(line_no, f"duplicate record id {record_id!r}; record dropped")
            return
        seen_ids.add(record_id)
        year_raw = fields.get("PY", ["0"])[0].strip()
        try:
            year = int(year_raw) if year_raw else 0
        except ValueError:
            issues.append(ParseIssue(line_no, f"bad year {year_raw!r} in {record_id}"))
            year = 0
        title = " ".join(fields["TI"]) if "TI" in fields else None
        records.append(
            RawRecord(
                record_id=record_id,
                doc_type=fields.get("DT", [""])[0].strip(),
                pub_year=year,
                address_lines=tuple(a for a in fields.get("C1", []) if a.strip()),
                title=title,
            )
        )
        fields.clear()
        in_record = False
        current_tag = None

    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        stripped = line.strip()
        if not stripped:
            continue
        if line.startswith("   ") and in_record:
            if current_tag is None:
                issues.append(ParseIssue(line_no, "continuation line without a field"))
                continue
            # repeatable fields (C1) gain a new item; scalar fields (TI)
            # are re-joined with spaces when the record closes
            fields[current_tag].append(stripped)
            continue
        if not _is_tag_line(line):
            if in_record:
                issues.append(ParseIssue(line_no, f"unparseable line inside record: {stripped!r}"))
            else:
                issues.append(ParseIssue(line_no, f"content outside any record: {stripped!r}"))
            continue
        tag, value = line[:2], line[3:].strip() if len(line) > 3 else ""
        if tag == _RECORD_START:
            if in_record:
                discard(line_no, "record not terminated by ER; span dropped")
            in_record = True
            start_line = line_no
            ordinal += 1
            current_tag = None
            continue
        if tag == _FILE_END:
            if in_record:
                discard(line_no, "record not terminated by ER before EF; span dropped")
            break
        if not in_record:
            issues.append(ParseIssue(line_no, f"field {tag!r} outside any record"))
            continue
        if tag == _RECORD_END:
            close_record(line_no)
            continue
        current_tag = tag
        fields.setdefault(tag, []).append(value)
    if in_record:
        issues.append(ParseIssue(start_line, "record not terminated by ER at end of input; span dropped"))
    return records, issues


def _parse_delimited(text: str) -> tuple[list[RawRecord], list[ParseIssue]]:
    records: list[RawRecord] = []
    issues: list[ParseIssue] = []
    seen_ids: set[str] = set()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        return records, issues
    if header != ["id", "doc_type", "year", "addresses"]:
        issues.append(ParseIssue(1, "expected header id,doc_type,year,addresses"))
        return records, issues
    for row in reader:
        line_no = reader.line_num
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) != 4:
            issues.append(ParseIssue(line_no, f"expected 4 columns, got {len(row)}"))
            continue
        record_id = row[0].strip()
        if not record_id:
            issues.append(ParseIssue(line_no, "empty record id"))
            continue
        if record_id in seen_ids:
            issues.append(ParseIssue(line_no, f"duplicate record id {record_id!r}; record dropped"))
            continue
        seen_ids.add(record_id)
        try:
            year = int(row[2].strip()) if row[2].strip() else 0
        except ValueError:
            issues.append(ParseIssue(line_no, f"bad year {row[2]!r} in {record_id}"))
            year = 0
        addresses = tuple(a.strip() for a in row[3].split(";") if a.strip())
        records.append(RawRecord(record_id, row[1].strip(), year, addresses))
    return records, issues


def write_tagged(records: list[RawRecord]) -> str:
    """Serialize records in the tagged-field layout (round-trips with parse)."""
    lines: list[str] = []
    for rec in records:
        lines.append("PT J")
        lines.append(f"UT {rec.record_id}")
        if rec.title is not None:
            lines.append(f"TI {rec.title}")
        lines.append(f"DT {rec.doc_type}")
        lines.append(f"PY {rec.pub_year}")
        for address in rec.address_lines:
            lines.append(f"C1 {address}")
        lines.append("ER")
    lines.append("EF")
    return "\n".join(lines) + "\n"


def write_delimited(records: list[RawRecord]) -> str:
    """Serialize records as the delimited CSV fallback layout."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "doc_type", "year", "addresses"])
    for rec in records:
        writer.writerow([rec.record_id, rec.doc_type, rec.pub_year, "; ".join(rec.address_lines)])
    return buf.getvalue()
