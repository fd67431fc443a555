//! Paper selection: which parsed records count as indexed papers.
//!
//! A record is kept when its venue is tracked, its year falls inside the
//! window, it clears the venue's full-paper page threshold and at least one
//! of its authors is a registered researcher. Main-track papers are not
//! labelled in DBLP; the page threshold is the proxy used to exclude short,
//! tool, demo and industry-track papers.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classifier::{ClassifyError, Tier, classify_tier};
use crate::ingest::PublicationRecord;
use crate::registry::{Registry, Venue};

/// Inclusive range of publication years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearWindow {
    pub start_year: i32,
    pub end_year: i32,
}

impl YearWindow {
    pub fn new(start_year: i32, end_year: i32) -> Result<Self, InvalidWindow> {
        if start_year > end_year {
            return Err(InvalidWindow {
                start_year,
                end_year,
            });
        }
        Ok(YearWindow {
            start_year,
            end_year,
        })
    }
}

impl Default for YearWindow {
    fn default() -> Self {
        YearWindow {
            start_year: 2013,
            end_year: 2018,
        }
    }
}

impl fmt::Display for YearWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.start_year, self.end_year)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("year window {start_year}..{end_year} is empty")]
pub struct InvalidWindow {
    pub start_year: i32,
    pub end_year: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AuthorMatch {
    pub researcher_id: String,
    pub dept_id: String,
}

/// A record that survived selection, with its registry context attached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedPaper {
    pub record: PublicationRecord,
    pub venue_key: String,
    pub area_id: String,
    pub year: i32,
    pub doi: Option<String>,
    pub matches: Vec<AuthorMatch>,
    pub tier: Tier,
}

impl IndexedPaper {
    pub fn key(&self) -> &str {
        &self.record.record_key
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    UnknownVenue,
    OutOfWindow,
    NotFullPaper,
    NoRegisteredAuthor,
}

pub const MAIN_TRACK_NOTE: &str = "main-track membership is approximated by each venue's minimum page count; \
     DBLP does not label tracks, so long satellite-track papers can pass and short main-track papers are dropped";

/// Per-reason drop counts for one selection run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropReport {
    pub considered: u64,
    pub kept: u64,
    pub dropped: BTreeMap<DropReason, u64>,
    pub note: String,
}

impl Default for DropReport {
    fn default() -> Self {
        DropReport {
            considered: 0,
            kept: 0,
            dropped: BTreeMap::new(),
            note: MAIN_TRACK_NOTE.to_string(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Selection {
    pub papers: Vec<IndexedPaper>,
    pub report: DropReport,
}

/// True iff the record has a page count of at least the venue's threshold.
/// Records with no derivable page count never qualify.
pub fn is_full_paper(record: &PublicationRecord, venue: &Venue) -> bool {
    record.pages.count.is_some_and(|c| c >= venue.min_pages)
}

pub fn in_window(year: i32, window: &YearWindow) -> bool {
    window.start_year <= year && year <= window.end_year
}

/// Registered researchers among the record's authors, one entry per
/// researcher, in author order.
pub fn match_authors(record: &PublicationRecord, registry: &Registry) -> Vec<AuthorMatch> {
    let mut seen = HashSet::new();
    record
        .authors
        .iter()
        .filter_map(|a| registry.aliases().lookup(a))
        .filter(|id| seen.insert(*id))
        .filter_map(|id| {
            registry.researcher(id).map(|r| AuthorMatch {
                researcher_id: r.researcher_id.clone(),
                dept_id: r.dept_id.clone(),
            })
        })
        .collect()
}

const DOI_RESOLVERS: &[&str] = &[
    "https://doi.org/",
    "http://doi.org/",
    "https://dx.doi.org/",
    "http://dx.doi.org/",
];

/// DOI from the first electronic-edition link that points at a DOI resolver.
pub fn doi_from_links(links: &[String]) -> Option<String> {
    links.iter().find_map(|link| {
        DOI_RESOLVERS
            .iter()
            .find_map(|p| link.strip_prefix(p))
            .filter(|doi| doi.starts_with("10.") && doi.len() > 3)
            .map(String::from)
    })
}

/// Selection bound to one registry and window.
pub struct Selector<'r> {
    registry: &'r Registry,
    window: YearWindow,
    tiers: HashMap<&'r str, Tier>,
}

impl<'r> Selector<'r> {
    pub fn new(registry: &'r Registry, window: YearWindow) -> Result<Self, ClassifyError> {
        let tiers = registry
            .venues
            .iter()
            .map(|v| Ok((v.venue_key.as_str(), classify_tier(v)?)))
            .collect::<Result<_, ClassifyError>>()?;
        Ok(Selector {
            registry,
            window,
            tiers,
        })
    }

    /// Decides a single record.
    pub fn judge(&self, record: &PublicationRecord) -> Result<IndexedPaper, DropReason> {
        let venue = self
            .registry
            .venue(&record.venue_key)
            .ok_or(DropReason::UnknownVenue)?;
        let year = record
            .year
            .filter(|&y| in_window(y, &self.window))
            .ok_or(DropReason::OutOfWindow)?;
        if !is_full_paper(record, venue) {
            return Err(DropReason::NotFullPaper);
        }
        let matches = match_authors(record, self.registry);
        if matches.is_empty() {
            return Err(DropReason::NoRegisteredAuthor);
        }
        Ok(IndexedPaper {
            record: record.clone(),
            venue_key: venue.venue_key.clone(),
            area_id: venue.area_id.clone(),
            year,
            doi: doi_from_links(&record.ee_links),
            matches,
            tier: self.tiers[venue.venue_key.as_str()],
        })
    }

    pub fn select<'a>(
        &self,
        records: impl IntoIterator<Item = &'a PublicationRecord>,
    ) -> Selection {
        let mut selection = Selection::default();
        for record in records {
            selection.report.considered += 1;
            match self.judge(record) {
                Ok(paper) => selection.papers.push(paper),
                Err(reason) => *selection.report.dropped.entry(reason).or_default() += 1,
            }
        }
        selection.report.kept = selection.papers.len() as u64;
        sort_papers(&mut selection.papers);
        selection
    }
}

/// Newest first, then by venue and record key.
pub fn sort_papers(papers: &mut [IndexedPaper]) {
    papers.sort_by(|a, b| {
        (Reverse(a.year), &a.venue_key, &a.record.record_key).cmp(&(
            Reverse(b.year),
            &b.venue_key,
            &b.record.record_key,
        ))
    });
}

/// Selects the indexed papers among `records`.
pub fn select_papers<'a>(
    records: impl IntoIterator<Item = &'a PublicationRecord>,
    registry: &Registry,
    window: YearWindow,
) -> Result<Selection, ClassifyError> {
    Ok(Selector::new(registry, window)?.select(records))
}
