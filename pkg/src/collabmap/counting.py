"""Participation counting over the document-country incidence matrix.

Three credit schemes are computed from the same sparse matrix:

* fractional: each paper distributes credit 1 over its countries in
  proportion to their address shares, in exact rational arithmetic, so
  the grand total equals the number of documents with zero drift;
* integer (whole): each participating country earns credit 1 per paper,
  i.e. the column count after binarizing the matrix;
* binary: the per-document 0/1 participation view that underlies both
  the integer counts and the co-occurrence products downstream.

Decimal rendering happens only at output time, half-even at a fixed
number of places.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from collabmap.corpus.filtering import Document, FilterReport
from collabmap.corpus.registry import CountryRegistry
from collabmap.errors import DataError


class CountScheme(Enum):
    INTEGER = "integer"
    BINARY = "binary"
    FRACTIONAL = "fractional"


@dataclass
class IncidenceMatrix:
    """Sparse document x country address-count matrix."""

    doc_ids: list[str]
    countries: list[str]
    cells: dict[tuple[int, int], int]

    def row(self, doc_index: int) -> dict[int, int]:
        return {c: v for (d, c), v in self.cells.items() if d == doc_index}

    def row_sums(self) -> list[int]:
        sums = [0] * len(self.doc_ids)
        for (d, _c), v in self.cells.items():
            sums[d] += v
        return sums

    def column_doc_sets(self) -> list[set[int]]:
        """Document-membership set per country (the binarized columns)."""
        sets: list[set[int]] = [set() for _ in self.countries]
        for (d, c), _v in self.cells.items():
            sets[c].add(d)
        return sets


@dataclass(frozen=True)
class CountVector:
    scheme: CountScheme
    values: dict


@dataclass(frozen=True)
class CorpusSummary:
    n_records: int
    n_documents: int
    per_type: dict[str, int]
    n_international_docs: int
    share_international_docs: Fraction
    n_addresses_total: int
    n_addresses_international: int
    share_addresses_international: Fraction
    n_countries: int


def build_incidence(documents: list[Document]) -> IncidenceMatrix:
    """Assemble the sparse incidence matrix with lexicographic country order."""
    if not documents:
        raise DataError("cannot build an incidence matrix from zero documents")
    seen: set[str] = set()
    for doc in documents:
        if doc.record_id in seen:
            raise DataError(f"duplicate record id in corpus: {doc.record_id!r}")
        seen.add(doc.record_id)
    countries = sorted({c for doc in documents for c in doc.country_addresses})
    country_index = {c: i for i, c in enumerate(countries)}
    cells: dict[tuple[int, int], int] = {}
    for d, doc in enumerate(documents):
        for country, count in doc.country_addresses.items():
            cells[(d, country_index[country])] = count
    return IncidenceMatrix(
        doc_ids=[doc.record_id for doc in documents],
        countries=countries,
        cells=cells,
    )


def fractional_counts(m: IncidenceMatrix) -> CountVector:
    """Per-country sum of per-paper address shares, exact in rationals."""
    sums = m.row_sums()
    totals: dict[str, Fraction] = {c: Fraction(0) for c in m.countries}
    for (d, c), v in m.cells.items():
        totals[m.countries[c]] += Fraction(v, sums[d])
    return CountVector(CountScheme.FRACTIONAL, totals)


def integer_counts(m: IncidenceMatrix) -> CountVector:
    """Whole counting: documents in which each country participates."""
    totals: dict[str, int] = {c: 0 for c in m.countries}
    for (_d, c), _v in m.cells.items():
        totals[m.countries[c]] += 1
    return CountVector(CountScheme.INTEGER, totals)


def summarize(documents: list[Document], report: FilterReport) -> CorpusSummary:
    if not documents:
        raise DataError("corpus summary undefined for zero documents")
    per_type: dict[str, int] = {}
    for doc in documents:
        per_type[doc.doc_type] = per_type.get(doc.doc_type, 0) + 1
    n_docs = len(documents)
    n_intl = sum(1 for doc in documents if doc.is_international)
    addresses_total = sum(doc.total_addresses for doc in documents)
    addresses_intl = sum(doc.total_addresses for doc in documents if doc.is_international)
    countries = {c for doc in documents for c in doc.country_addresses}
    return CorpusSummary(
        n_records=report.n_records,
        n_documents=n_docs,
        per_type=dict(sorted(per_type.items())),
        n_international_docs=n_intl,
        share_international_docs=Fraction(n_intl, n_docs),
        n_addresses_total=addresses_total,
        n_addresses_international=addresses_intl,
        share_addresses_international=Fraction(addresses_intl, addresses_total),
        n_countries=len(countries),
    )


def incidence_summary_stats(m: IncidenceMatrix) -> dict[str, int]:
    """Summary numbers recomputed straight from the matrix.

    Independent of :func:`summarize`; the two paths must agree on every
    field they share.
    """
    per_doc_countries = [0] * len(m.doc_ids)
    per_doc_addresses = [0] * len(m.doc_ids)
    for (d, _c), v in m.cells.items():
        per_doc_countries[d] += 1
        per_doc_addresses[d] += v
    intl = [d for d in range(len(m.doc_ids)) if per_doc_countries[d] >= 2]
    return {
        "n_documents": len(m.doc_ids),
        "n_international_docs": len(intl),
        "n_addresses_total": sum(per_doc_addresses),
        "n_addresses_international": sum(per_doc_addresses[d] for d in intl),
        "n_countries": len(m.countries),
    }


def mean_coauthorship_ratio(n_integer: int, n_fractional: Fraction) -> Fraction:
    """Whole count over fractional count: mean co-authorship multiplier."""
    if n_fractional == 0:
        raise DataError("mean co-authorship ratio undefined for zero fractional count")
    return Fraction(n_integer) / Fraction(n_fractional)


# ---------------------------------------------------------------------------
# display rounding and serialization
# ---------------------------------------------------------------------------

def round_half_even(value: Fraction, digits: int = 1) -> Fraction:
    """Exact half-even rounding of a rational to fixed decimal places."""
    return round(Fraction(value), digits)


def display_decimal(value: Fraction, digits: int = 1) -> float:
    return float(round_half_even(value, digits))


def display_percent(ratio: Fraction, digits: int = 1) -> float:
    return float(round_half_even(Fraction(ratio) * 100, digits))


def format_fixed(value, digits: int = 6) -> str:
    """Locale-independent fixed-point rendering used by all file exports."""
    return f"{float(value):.{digits}f}"


def counts_csv(vectors: list[CountVector], registry: CountryRegistry) -> str:
    """CSV export ``country,iso3,scheme,value``; fractions at 6 decimals."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["country", "iso3", "scheme", "value"])
    for vector in vectors:
        for country in sorted(vector.values):
            value = vector.values[country]
            rendered = format_fixed(value) if vector.scheme is CountScheme.FRACTIONAL else str(value)
            iso3 = registry.entries[country].iso3 if country in registry.entries else ""
            writer.writerow([country, iso3, vector.scheme.value, rendered])
    return buf.getvalue()


def summary_dict(summary: CorpusSummary) -> dict:
    """JSON-ready view; shares carried as exact ``numerator/denominator``."""
    return {
        "n_records": summary.n_records,
        "n_documents": summary.n_documents,
        "per_type": summary.per_type,
        "n_international_docs": summary.n_international_docs,
        "share_international_docs": f"{summary.n_international_docs}/{summary.n_documents}",
        "n_addresses_total": summary.n_addresses_total,
        "n_addresses_international": summary.n_addresses_international,
        "share_addresses_international": f"{summary.n_addresses_international}/{summary.n_addresses_total}",
        "n_countries": summary.n_countries,
    }


def summary_json(summary: CorpusSummary) -> str:
    return json.dumps(summary_dict(summary), indent=2) + "\n"
