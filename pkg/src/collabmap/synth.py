"""Seeded synthetic corpus generation.

Produces tagged-field record files with a Zipf-like activity profile over
a configurable number of countries, a tunable probability of
international collaboration, and a sprinkling of the messiness real
exports carry: ephemera document types, address-less records, UK
constituent names, US state-and-zip endings, and the odd unknown country.
Everything is a pure function of the seed.
"""

from __future__ import annotations

import random

from collabmap.corpus.records import RawRecord, write_tagged
from collabmap.corpus.registry import CountryRegistry

# alias spellings occasionally substituted for their canonical country
_ALIAS_FLAVORS = {
    "UK": ["England", "Scotland", "Wales", "North Ireland"],
    "CHINA": ["Peoples R China"],
    "RUSSIA": ["Russian Federation"],
}

_US_STATES = ["NY 10012", "MA 02139", "CA 94305", "IL 60637", "TX 77005", "MD 21218"]
_CITIES = [
    "Amsterdam", "Boston", "Seoul", "Leeds", "Lyon", "Bandung", "Nairobi",
    "Osaka", "Porto", "Quito", "Riga", "Tunis", "Uppsala", "Wuhan",
]
_EPHEMERA = ["Editorial Material", "Meeting Abstract", "Correction", "News Item"]


def pick_countries(registry: CountryRegistry, n_countries: int, rng: random.Random) -> list[str]:
    names = sorted(registry.entries)
    if n_countries > len(names):
        raise ValueError(f"registry holds only {len(names)} countries")
    return rng.sample(names, n_countries)


def _address_line(country: str, rng: random.Random) -> str:
    city = rng.choice(_CITIES)
    institute = f"Univ {city}"
    dept = f"Dept Sci {rng.randint(1, 9)}"
    if country == "USA" and rng.random() < 0.7:
        return f"{institute}, {dept}, {rng.choice(_CITIES)}, {rng.choice(_US_STATES)} USA"
    flavors = _ALIAS_FLAVORS.get(country)
    if flavors and rng.random() < 0.5:
        rendered = rng.choice(flavors)
    else:
        rendered = country.title()
    return f"{institute}, {dept}, {city}, {rendered}"


def generate_records(
    registry: CountryRegistry,
    n_docs: int = 200,
    n_countries: int = 20,
    intl_prob: float = 0.3,
    seed: int = 42,
) -> list[RawRecord]:
    rng = random.Random(seed)
    countries = pick_countries(registry, n_countries, rng)
    # Zipf-like attractiveness by sampled rank
    weights = [1.0 / (rank + 1) for rank in range(n_countries)]

    records: list[RawRecord] = []
    for i in range(n_docs):
        roll = rng.random()
        if roll < 0.06:
            doc_type = rng.choice(_EPHEMERA)
        elif roll < 0.14:
            doc_type = "Review"
        elif roll < 0.20:
            doc_type = "Letter"
        else:
            doc_type = "Article"

        if rng.random() < 0.03:
            lines: tuple[str, ...] = ()
        else:
            if rng.random() < intl_prob:
                k = min(2 + _geometric(rng, 0.5), n_countries)
            else:
                k = 1
            members = _weighted_sample(countries, weights, k, rng)
            address_lines = []
            for country in members:
                copies = 1 + _geometric(rng, 0.35)
                for _ in range(copies):
                    address_lines.append(_address_line(country, rng))
            if rng.random() < 0.02:
                address_lines.append("Atlantis Inst Marine Res, Atlantis")
            lines = tuple(address_lines)

        records.append(
            RawRecord(
                record_id=f"SYN{i:06d}",
                doc_type=doc_type,
                pub_year=2011,
                address_lines=lines,
                title=f"Synthetic study {i:06d}",
            )
        )
    return records


def generate_corpus_text(
    registry: CountryRegistry,
    n_docs: int = 200,
    n_countries: int = 20,
    intl_prob: float = 0.3,
    seed: int = 42,
) -> str:
    return write_tagged(
        generate_records(registry, n_docs=n_docs, n_countries=n_countries, intl_prob=intl_prob, seed=seed)
    )


def _geometric(rng: random.Random, p: float) -> int:
    """Number of failures before the first success (small, heavy at 0)."""
    count = 0
    while rng.random() > p and count < 6:
        count += 1
    return count


def _weighted_sample(items: list[str], weights: list[float], k: int, rng: random.Random) -> list[str]:
    chosen: list[str] = []
    pool = list(range(len(items)))
    local = list(weights)
    for _ in range(min(k, len(items))):
        total = sum(local[i] for i in pool)
        mark = rng.random() * total
        acc = 0.0
        for idx, i in enumerate(pool):
            acc += local[i]
            if mark <= acc:
                chosen.append(items[i])
                pool.pop(idx)
                break
    return chosen
