use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::BuildError;
use crate::classifier::{ClassificationReport, classification_report};
use crate::ingest::{PublicationRecord, load_records};
use crate::registry::Registry;
use crate::scoring::{AreaStats, PaperSummary, area_stats, summarize};
use crate::selection::{DropReport, IndexedPaper, Selector, YearWindow};

/// One immutable, internally consistent build of every statistic.
#[derive(Debug, Serialize)]
pub struct Snapshot {
    pub generated_at: DateTime<Utc>,
    pub window: YearWindow,
    pub registry_digest: String,
    /// One entry per registry area, in registry order.
    pub areas: Vec<AreaStats>,
    pub classification: ClassificationReport,
    pub papers: Vec<IndexedPaper>,
    pub drops: DropReport,
    #[serde(skip)]
    registry: Arc<Registry>,
    #[serde(skip)]
    fingerprint: String,
    #[serde(skip)]
    index: SnapshotIndex,
}

#[derive(Debug, Default)]
struct SnapshotIndex {
    area_stats: HashMap<String, usize>,
    /// Positions into `papers`, newest first, per area.
    area_papers: HashMap<String, Vec<usize>>,
    researcher_papers: HashMap<String, Vec<usize>>,
    summaries: Vec<PaperSummary>,
}

/// Content hashed for the fingerprint: everything but the build time.
#[derive(Serialize)]
struct Content<'a> {
    window: &'a YearWindow,
    registry_digest: &'a str,
    areas: &'a [AreaStats],
    classification: &'a ClassificationReport,
    papers: &'a [IndexedPaper],
    drops: &'a DropReport,
}

impl Snapshot {
    /// Runs classification, selection and scoring over already-loaded inputs.
    pub fn from_parts(
        registry: Arc<Registry>,
        records: &[PublicationRecord],
        window: YearWindow,
    ) -> Result<Snapshot, BuildError> {
        let classification = classification_report(&registry)?;
        let selection = Selector::new(&registry, window)?.select(records);
        let papers = selection.papers;
        let areas = registry
            .areas
            .iter()
            .map(|a| area_stats(&papers, &registry, &a.area_id))
            .collect::<Result<Vec<_>, _>>()?;

        let mut index = SnapshotIndex::default();
        for (i, stats) in areas.iter().enumerate() {
            index.area_stats.insert(stats.area_id.clone(), i);
        }
        // papers are already sorted newest first
        for (i, paper) in papers.iter().enumerate() {
            index
                .area_papers
                .entry(paper.area_id.clone())
                .or_default()
                .push(i);
            for m in &paper.matches {
                index
                    .researcher_papers
                    .entry(m.researcher_id.clone())
                    .or_default()
                    .push(i);
            }
            index.summaries.push(summarize(paper, &registry));
        }

        let content = Content {
            window: &window,
            registry_digest: &registry.digest,
            areas: &areas,
            classification: &classification,
            papers: &papers,
            drops: &selection.report,
        };
        let bytes = serde_json::to_vec(&content).expect("snapshot content serializes");
        let fingerprint = hex::encode(&Sha256::digest(&bytes)[..12]);

        Ok(Snapshot {
            generated_at: Utc::now(),
            window,
            registry_digest: registry.digest.clone(),
            areas,
            classification,
            papers,
            drops: selection.report,
            registry,
            fingerprint,
            index,
        })
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    /// Hash of the snapshot content, excluding `generated_at`.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn generated_at_rfc3339(&self) -> String {
        self.generated_at.to_rfc3339_opts(SecondsFormat::Secs, true)
    }

    pub fn area_stats(&self, area_id: &str) -> Option<&AreaStats> {
        self.index.area_stats.get(area_id).map(|&i| &self.areas[i])
    }

    /// Summaries of an area's papers, newest first.
    pub fn area_papers(&self, area_id: &str) -> Vec<&PaperSummary> {
        self.summaries_at(self.index.area_papers.get(area_id))
    }

    /// Summaries of one researcher's papers, newest first.
    pub fn researcher_papers(&self, researcher_id: &str) -> Vec<&PaperSummary> {
        let mut out = self.summaries_at(self.index.researcher_papers.get(researcher_id));
        out.sort_by(|a, b| {
            b.year
                .cmp(&a.year)
                .then_with(|| a.venue_key.cmp(&b.venue_key))
                .then_with(|| a.key.cmp(&b.key))
        });
        out
    }

    fn summaries_at(&self, positions: Option<&Vec<usize>>) -> Vec<&PaperSummary> {
        positions
            .map(|ps| ps.iter().map(|&i| &self.index.summaries[i]).collect())
            .unwrap_or_default()
    }
}

/// Builds a snapshot from a config directory and a records file (DBLP XML,
/// optionally gzipped, or the canonical record format).
pub fn build_snapshot(
    config_dir: &Path,
    records_path: &Path,
    window: YearWindow,
) -> Result<Snapshot, BuildError> {
    if !config_dir.is_dir() {
        return Err(BuildError::MissingConfigDir(config_dir.to_path_buf()));
    }
    let registry = Arc::new(Registry::load_dir(config_dir)?);
    let (records, report) = load_records(records_path)?;
    for e in &report.record_errors {
        tracing::warn!("{e}");
    }
    Snapshot::from_parts(registry, &records, window)
}
