//! Aggregation of indexed papers into per-area statistics.
//!
//! A department's score in an area is `A + 0.66 B + 0.33 C`, where A, B and
//! C count its distinct papers in top, near-the-top and remaining tracked
//! venues. Scores are kept in hundredths so every value is exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::classifier::Tier;
use crate::registry::Registry;
use crate::selection::IndexedPaper;

/// Tier weights in hundredths: top, near-the-top, standard.
pub const WEIGHTS: [u64; 3] = [100, 66, 33];

/// A department score, stored in hundredths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Score(u64);

impl Score {
    pub const fn from_hundredths(h: u64) -> Self {
        Score(h)
    }

    pub const fn hundredths(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0 as f64 / 100.0)
    }
}

impl<'de> Deserialize<'de> for Score {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        if v < 0.0 || !v.is_finite() {
            return Err(serde::de::Error::custom(
                "score must be a non-negative number",
            ));
        }
        Ok(Score((v * 100.0).round() as u64))
    }
}

/// Distinct paper counts by venue tier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TierCounts {
    #[serde(rename = "A")]
    pub top: u64,
    #[serde(rename = "B")]
    pub near_top: u64,
    #[serde(rename = "C")]
    pub standard: u64,
}

impl TierCounts {
    pub fn new(top: u64, near_top: u64, standard: u64) -> Self {
        TierCounts {
            top,
            near_top,
            standard,
        }
    }

    pub fn total(self) -> u64 {
        self.top + self.near_top + self.standard
    }

    fn bump(&mut self, tier: Tier) {
        match tier {
            Tier::Top => self.top += 1,
            Tier::NearTheTop => self.near_top += 1,
            Tier::Standard => self.standard += 1,
        }
    }
}

impl Add for TierCounts {
    type Output = TierCounts;

    fn add(self, o: TierCounts) -> TierCounts {
        TierCounts::new(
            self.top + o.top,
            self.near_top + o.near_top,
            self.standard + o.standard,
        )
    }
}

/// Weighted sum with arbitrary integer weights.
pub fn weighted_sum(counts: TierCounts, weights: [u64; 3]) -> u64 {
    counts.top * weights[0] + counts.near_top * weights[1] + counts.standard * weights[2]
}

pub fn department_score(counts: TierCounts) -> Score {
    Score(weighted_sum(counts, WEIGHTS))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepartmentScore {
    pub dept_id: String,
    pub area_id: String,
    pub counts: TierCounts,
    pub score: Score,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AreaStats {
    pub area_id: String,
    pub total_papers: u64,
    /// Highest score first; ties by dept_id.
    pub department_scores: Vec<DepartmentScore>,
    /// Distinct professors with at least one indexed paper, per department.
    pub professor_counts: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScoringError {
    #[error("unknown area {0:?}")]
    UnknownArea(String),
    #[error("unknown researcher {0:?}")]
    UnknownResearcher(String),
}

/// Tier counts per (dept_id, area_id). A paper adds at most one to each
/// department among its matched authors.
pub fn attribute_papers<'a>(
    papers: impl IntoIterator<Item = &'a IndexedPaper>,
) -> BTreeMap<(String, String), TierCounts> {
    let mut cells: BTreeMap<(String, String), TierCounts> = BTreeMap::new();
    let mut seen: BTreeSet<(&str, &str)> = BTreeSet::new();
    for paper in papers {
        let depts: BTreeSet<&str> = paper.matches.iter().map(|m| m.dept_id.as_str()).collect();
        for dept in depts {
            // the same paper listed twice still counts once
            if !seen.insert((paper.key(), dept)) {
                continue;
            }
            cells
                .entry((dept.to_string(), paper.area_id.clone()))
                .or_default()
                .bump(paper.tier);
        }
    }
    cells
}

/// Orders department scores: highest first, ties broken by dept_id.
pub fn rank_departments(scores: &mut [DepartmentScore]) {
    scores.sort_by(|a, b| {
        b.score
            .cmp(&a.score)
            .then_with(|| a.dept_id.cmp(&b.dept_id))
    });
}

pub fn area_stats<'a>(
    papers: impl IntoIterator<Item = &'a IndexedPaper>,
    registry: &Registry,
    area_id: &str,
) -> Result<AreaStats, ScoringError> {
    if registry.area(area_id).is_none() {
        return Err(ScoringError::UnknownArea(area_id.to_string()));
    }
    let in_area: Vec<&IndexedPaper> = papers
        .into_iter()
        .filter(|p| p.area_id == area_id)
        .collect();
    let total_papers = in_area
        .iter()
        .map(|p| p.key())
        .collect::<BTreeSet<_>>()
        .len() as u64;

    let mut department_scores: Vec<DepartmentScore> = attribute_papers(in_area.iter().copied())
        .into_iter()
        .map(|((dept_id, area_id), counts)| DepartmentScore {
            dept_id,
            area_id,
            counts,
            score: department_score(counts),
        })
        .collect();
    rank_departments(&mut department_scores);

    let mut professors: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();
    for paper in &in_area {
        for m in &paper.matches {
            professors
                .entry(m.dept_id.clone())
                .or_default()
                .insert(&m.researcher_id);
        }
    }
    let professor_counts = professors
        .into_iter()
        .map(|(dept, ids)| (dept, ids.len() as u64))
        .collect();

    Ok(AreaStats {
        area_id: area_id.to_string(),
        total_papers,
        department_scores,
        professor_counts,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affiliation {
    pub researcher_id: String,
    pub name: String,
    pub dept_id: String,
    pub department: String,
}

/// Paper metadata as listed for a professor, department or area.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperSummary {
    pub key: String,
    pub title: String,
    pub authors: Vec<String>,
    pub affiliations: Vec<Affiliation>,
    pub doi: Option<String>,
    pub venue: String,
    pub venue_key: String,
    pub area_id: String,
    pub year: i32,
    pub tier: Tier,
}

pub fn summarize(paper: &IndexedPaper, registry: &Registry) -> PaperSummary {
    let affiliations = paper
        .matches
        .iter()
        .map(|m| Affiliation {
            researcher_id: m.researcher_id.clone(),
            name: registry
                .researcher(&m.researcher_id)
                .map(|r| r.canonical_name.clone())
                .unwrap_or_default(),
            dept_id: m.dept_id.clone(),
            department: registry
                .department(&m.dept_id)
                .map(|d| d.name.clone())
                .unwrap_or_default(),
        })
        .collect();
    PaperSummary {
        key: paper.key().to_string(),
        title: paper.record.title.clone(),
        authors: paper
            .record
            .authors
            .iter()
            .map(|a| a.display.clone())
            .collect(),
        affiliations,
        doi: paper.doi.clone(),
        venue: registry
            .venue(&paper.venue_key)
            .map(|v| v.acronym.clone())
            .unwrap_or_else(|| paper.venue_key.clone()),
        venue_key: paper.venue_key.clone(),
        area_id: paper.area_id.clone(),
        year: paper.year,
        tier: paper.tier,
    }
}

/// Every indexed paper of one researcher, newest first.
pub fn professor_papers<'a>(
    papers: impl IntoIterator<Item = &'a IndexedPaper>,
    registry: &Registry,
    researcher_id: &str,
) -> Result<Vec<PaperSummary>, ScoringError> {
    if registry.researcher(researcher_id).is_none() {
        return Err(ScoringError::UnknownResearcher(researcher_id.to_string()));
    }
    let mut out: Vec<PaperSummary> = papers
        .into_iter()
        .filter(|p| p.matches.iter().any(|m| m.researcher_id == researcher_id))
        .map(|p| summarize(p, registry))
        .collect();
    out.sort_by(|a, b| {
        b.year
            .cmp(&a.year)
            .then_with(|| a.venue_key.cmp(&b.venue_key))
            .then_with(|| a.key.cmp(&b.key))
    });
    Ok(out)
}
