//! Brute-force reference implementations, kept apart from the library code
//! they check, plus a seeded synthetic record generator.

use std::collections::BTreeSet;

use csindex_core::classifier::Tier;
use csindex_core::ingest::PublicationRecord;
use csindex_core::registry::{ManualRank, Registry};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::record;

/// Page count from a raw DBLP pages string, for the shapes the generator emits.
pub fn oracle_page_count(raw: &str) -> Option<u32> {
    let raw = raw.trim();
    if raw.is_empty() {
        return None;
    }
    let strip = |p: &str| -> Option<u32> { p.rsplit(':').next()?.trim().parse().ok() };
    let (a, b) = match raw.split_once("--").or_else(|| raw.split_once('-')) {
        Some((a, b)) => (strip(a)?, strip(b)?),
        None => {
            let p = strip(raw)?;
            (p, p)
        }
    };
    (a >= 1 && b >= a).then(|| b - a + 1)
}

/// Lowercase, accents stripped, whitespace collapsed. Covers the Latin-1
/// letters used in the fixtures.
pub fn oracle_fold(name: &str) -> String {
    let mut out = String::new();
    for c in name.chars().flat_map(char::to_lowercase) {
        let base = match c {
            'á' | 'à' | 'â' | 'ã' | 'ä' => 'a',
            'é' | 'è' | 'ê' | 'ë' => 'e',
            'í' | 'ì' | 'î' | 'ï' => 'i',
            'ó' | 'ò' | 'ô' | 'õ' | 'ö' => 'o',
            'ú' | 'ù' | 'û' | 'ü' => 'u',
            'ç' => 'c',
            'ñ' => 'n',
            c => c,
        };
        out.push(base);
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn split_suffix(name: &str) -> (String, Option<String>) {
    let trimmed = name.trim();
    if let Some((head, last)) = trimmed.rsplit_once(' ')
        && last.len() == 4
        && last.bytes().all(|b| b.is_ascii_digit())
    {
        return (oracle_fold(head), Some(last.to_string()));
    }
    (oracle_fold(trimmed), None)
}

pub fn oracle_tier(registry: &Registry, venue_key: &str) -> Tier {
    let v = registry
        .venues
        .iter()
        .find(|v| v.venue_key == venue_key)
        .unwrap();
    match v.manual_rank {
        ManualRank::Top if v.metrics.submitted > 180 && v.metrics.h5_index > 40 => Tier::Top,
        ManualRank::NearTheTop => Tier::NearTheTop,
        _ => Tier::Standard,
    }
}

/// What the oracle keeps for a record: key, venue, area, year, tier, doi and
/// the sorted set of (researcher, department) matches.
pub type OracleRow = (
    String,
    String,
    String,
    i32,
    Tier,
    Option<String>,
    Vec<(String, String)>,
);

pub fn oracle_select(
    records: &[PublicationRecord],
    registry: &Registry,
    from: i32,
    to: i32,
) -> Vec<OracleRow> {
    let mut rows = Vec::new();
    for r in records {
        let Some(venue) = registry.venues.iter().find(|v| v.venue_key == r.venue_key) else {
            continue;
        };
        let Some(year) = r.year.filter(|y| (from..=to).contains(y)) else {
            continue;
        };
        if !oracle_page_count(&r.pages.raw).is_some_and(|c| c >= venue.min_pages) {
            continue;
        }
        let mut matches = BTreeSet::new();
        for author in &r.authors {
            let key = (
                oracle_fold(&author.display),
                author.disambiguation_suffix.clone(),
            );
            for p in &registry.researchers {
                if p.dblp_aliases.iter().any(|a| split_suffix(a) == key) {
                    matches.insert((p.researcher_id.clone(), p.dept_id.clone()));
                }
            }
        }
        if matches.is_empty() {
            continue;
        }
        let doi = r.ee_links.iter().find_map(|l| {
            [
                "https://doi.org/",
                "http://doi.org/",
                "https://dx.doi.org/",
                "http://dx.doi.org/",
            ]
            .iter()
            .find_map(|p| l.strip_prefix(p))
            .filter(|d| d.starts_with("10."))
            .map(str::to_string)
        });
        rows.push((
            r.record_key.clone(),
            venue.venue_key.clone(),
            venue.area_id.clone(),
            year,
            oracle_tier(registry, &venue.venue_key),
            doi,
            matches.into_iter().collect(),
        ));
    }
    rows.sort_by(|a, b| (b.3, &a.1, &a.0).cmp(&(a.3, &b.1, &b.0)));
    rows
}

const STRANGERS: &[&str] = &[
    "Alan Turing Doe",
    "Unknown Person",
    "Ana Lima 0007",
    "Joao Silva",
    "Bruno Lima",
];
const FOREIGN_VENUES: &[&str] = &["sbes", "ieee", "pldi", ""];

/// Varies the spelling of a registered alias without changing its identity.
fn respell(alias: &str, rng: &mut ChaCha8Rng) -> String {
    match rng.random_range(0..3) {
        0 => alias.to_string(),
        1 => alias.to_uppercase(),
        _ => alias.replace(' ', "  "),
    }
}

fn pages(rng: &mut ChaCha8Rng, min: u32) -> String {
    let start = rng.random_range(1..900u32);
    let len = match rng.random_range(0..4) {
        0 => rng.random_range(1..min.max(2)),
        _ => rng.random_range(min.saturating_sub(1).max(1)..min + 8),
    };
    let end = start + len - 1;
    match rng.random_range(0..6) {
        0 => String::new(),
        1 => format!("{start}-{end}"),
        2 => format!("12:{start}--12:{end}"),
        3 if len == 1 => format!("{start}"),
        _ => format!("{start}--{end}"),
    }
}

/// `n` records drawn from the registry's venues and roster, mixing every
/// drop reason with valid papers. Deterministic for a given seed.
pub fn synthetic_corpus(registry: &Registry, n: usize, seed: u64) -> Vec<PublicationRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let aliases: Vec<&str> = registry
        .researchers
        .iter()
        .flat_map(|p| p.dblp_aliases.iter().map(String::as_str))
        .collect();
    (0..n)
        .map(|i| {
            let (venue, min) = if rng.random_bool(0.15) {
                (
                    FOREIGN_VENUES[rng.random_range(0..FOREIGN_VENUES.len())].to_string(),
                    10,
                )
            } else {
                let v = &registry.venues[rng.random_range(0..registry.venues.len())];
                (v.venue_key.clone(), v.min_pages)
            };
            let year = match rng.random_range(0..10) {
                0 => None,
                1 => Some(rng.random_range(1990..2013)),
                2 => Some(rng.random_range(2019..2025)),
                _ => Some(rng.random_range(2013..=2018)),
            };
            let mut authors: Vec<String> = (0..rng.random_range(0..4))
                .map(|_| STRANGERS[rng.random_range(0..STRANGERS.len())].to_string())
                .collect();
            if rng.random_bool(0.6) {
                for _ in 0..rng.random_range(1..3) {
                    let a = aliases[rng.random_range(0..aliases.len())];
                    let at = rng.random_range(0..=authors.len());
                    authors.insert(at, respell(a, &mut rng));
                }
            }
            let ee: Vec<String> = match rng.random_range(0..4) {
                0 => vec![],
                1 => vec![format!("https://doi.org/10.1109/SYN.{i}")],
                2 => vec![
                    format!("https://example.org/{i}"),
                    format!("http://dx.doi.org/10.1145/{i}"),
                ],
                _ => vec![format!("https://doi.org/not-a-doi/{i}")],
            };
            let authors: Vec<&str> = authors.iter().map(String::as_str).collect();
            let ee: Vec<&str> = ee.iter().map(String::as_str).collect();
            let key = format!("conf/{venue}/Syn{i:05}");
            record(&key, &venue, year, &pages(&mut rng, min), &authors, &ee)
        })
        .collect()
}
