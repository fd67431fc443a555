#![allow(dead_code)]

pub mod api;
pub mod oracle;

use std::fs;
use std::path::{Path, PathBuf};

use csindex_core::ingest::{PublicationRecord, RecordKind, parse_page_range, split_author_name};
use csindex_core::registry::Registry;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn config_dir() -> PathBuf {
    fixtures().join("config")
}

pub fn sample_xml() -> PathBuf {
    fixtures().join("dblp/sample.xml")
}

pub fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

pub fn fixture_registry() -> Registry {
    Registry::load_dir(&config_dir()).expect("fixture registry loads")
}

pub const AREAS_HEADER: &str = "area_id,name\n";
pub const VENUES_HEADER: &str = "venue_key,acronym,area_id,sponsor,submitted,accepted,h5_index,min_pages,manual_rank,stated_acceptance_rate\n";
pub const DEPTS_HEADER: &str = "dept_id,name,institution_kind\n";
pub const RESEARCHERS_HEADER: &str = "researcher_id,canonical_name,dept_id,aliases\n";

/// Writes the four registry tables (bodies without headers) into `dir`.
pub fn write_config(dir: &Path, areas: &str, venues: &str, depts: &str, researchers: &str) {
    fs::write(dir.join("areas.csv"), format!("{AREAS_HEADER}{areas}")).unwrap();
    fs::write(dir.join("venues.csv"), format!("{VENUES_HEADER}{venues}")).unwrap();
    fs::write(
        dir.join("departments.csv"),
        format!("{DEPTS_HEADER}{depts}"),
    )
    .unwrap();
    fs::write(
        dir.join("researchers.csv"),
        format!("{RESEARCHERS_HEADER}{researchers}"),
    )
    .unwrap();
}

pub fn record(
    key: &str,
    venue: &str,
    year: Option<i32>,
    pages: &str,
    authors: &[&str],
    ee: &[&str],
) -> PublicationRecord {
    PublicationRecord {
        record_key: key.to_string(),
        kind: RecordKind::ConferencePaper,
        title: format!("Title of {key}"),
        authors: authors.iter().map(|a| split_author_name(a)).collect(),
        venue_key: venue.to_string(),
        year,
        pages: parse_page_range(pages),
        ee_links: ee.iter().map(|s| s.to_string()).collect(),
    }
}
