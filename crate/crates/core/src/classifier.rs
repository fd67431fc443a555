//! Venue classification: acceptance rates, compliance with the tracking
//! thresholds, and tier assignment.
//!
//! All comparisons are strict, exactly as the thresholds are stated:
//! a venue is tracked without exceptions when it had more than 100
//! submissions, an acceptance rate under 30% and an h5-index above 20. The
//! top tier additionally requires more than 180 submissions, an h5-index
//! above 40 and a curated `top` rank.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::registry::{ManualRank, Registry, Venue};
use crate::units::Percent;

pub const MIN_SUBMITTED: u32 = 100;
/// Upper bound on the acceptance rate, in percent.
pub const MAX_ACCEPTANCE_PERCENT: u32 = 30;
pub const MIN_H5: u32 = 20;
pub const TOP_MIN_SUBMITTED: u32 = 180;
pub const TOP_MIN_H5: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    Top,
    NearTheTop,
    Standard,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Top => "top",
            Tier::NearTheTop => "near-the-top",
            Tier::Standard => "standard",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplianceFlags {
    pub submitted_ok: bool,
    pub acceptance_ok: bool,
    pub h5_ok: bool,
}

impl ComplianceFlags {
    pub fn all_ok(self) -> bool {
        self.submitted_ok && self.acceptance_ok && self.h5_ok
    }

    /// The metrics that miss their threshold.
    pub fn exceptions(self) -> Vec<Metric> {
        [
            (Metric::Submitted, self.submitted_ok),
            (Metric::AcceptanceRate, self.acceptance_ok),
            (Metric::H5Index, self.h5_ok),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(m, _)| m)
        .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Submitted,
    AcceptanceRate,
    H5Index,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("acceptance rate is undefined for {venue}: zero submissions")]
    UndefinedRate { venue: String },
    #[error("{venue}: accepted ({accepted}) exceeds submitted ({submitted})")]
    AcceptedExceedsSubmitted {
        venue: String,
        submitted: u32,
        accepted: u32,
    },
    #[error(
        "{venue} is ranked top but does not pass the top gate (submitted > {TOP_MIN_SUBMITTED}, h5 > {TOP_MIN_H5})"
    )]
    TopGateFailed { venue: String },
}

/// `100 * accepted / submitted`, rounded half-up to one decimal.
pub fn acceptance_rate(submitted: u32, accepted: u32) -> Result<Percent, ClassifyError> {
    if submitted == 0 {
        return Err(ClassifyError::UndefinedRate {
            venue: String::new(),
        });
    }
    if accepted > submitted {
        return Err(ClassifyError::AcceptedExceedsSubmitted {
            venue: String::new(),
            submitted,
            accepted,
        });
    }
    let (s, a) = (u64::from(submitted), u64::from(accepted));
    // floor(1000a/s + 1/2)
    let tenths = (2000 * a + s) / (2 * s);
    Ok(Percent::from_tenths(tenths as u32))
}

fn rate_for(venue: &Venue) -> Result<Percent, ClassifyError> {
    let m = venue.metrics;
    acceptance_rate(m.submitted, m.accepted).map_err(|e| match e {
        ClassifyError::UndefinedRate { .. } => ClassifyError::UndefinedRate {
            venue: venue.acronym.clone(),
        },
        ClassifyError::AcceptedExceedsSubmitted {
            submitted,
            accepted,
            ..
        } => ClassifyError::AcceptedExceedsSubmitted {
            venue: venue.acronym.clone(),
            submitted,
            accepted,
        },
        other => other,
    })
}

/// Checks a venue against the three tracking thresholds.
///
/// The acceptance check uses the exact ratio, not the rounded rate, so a
/// rate of 29.96% passes and 30.04% fails.
pub fn check_compliance(venue: &Venue) -> Result<ComplianceFlags, ClassifyError> {
    rate_for(venue)?;
    let m = venue.metrics;
    Ok(ComplianceFlags {
        submitted_ok: m.submitted > MIN_SUBMITTED,
        // 100a/s < 30  <=>  100a < 30s
        acceptance_ok: 100 * u64::from(m.accepted)
            < u64::from(MAX_ACCEPTANCE_PERCENT) * u64::from(m.submitted),
        h5_ok: m.h5_index > MIN_H5,
    })
}

pub fn passes_top_gate(venue: &Venue) -> bool {
    venue.metrics.submitted > TOP_MIN_SUBMITTED && venue.metrics.h5_index > TOP_MIN_H5
}

/// Assigns a venue's tier from its curated rank, checked against the top gate.
pub fn classify_tier(venue: &Venue) -> Result<Tier, ClassifyError> {
    match venue.manual_rank {
        ManualRank::Top if passes_top_gate(venue) => Ok(Tier::Top),
        ManualRank::Top => Err(ClassifyError::TopGateFailed {
            venue: venue.acronym.clone(),
        }),
        ManualRank::NearTheTop => Ok(Tier::NearTheTop),
        ManualRank::None => {
            if let Some(w) = unconfirmed_top_warning(venue) {
                tracing::warn!("{w}");
            }
            Ok(Tier::Standard)
        }
    }
}

fn unconfirmed_top_warning(venue: &Venue) -> Option<String> {
    (venue.manual_rank == ManualRank::None && passes_top_gate(venue)).then(|| {
        format!(
            "{} passes the top gate but has no curated rank; classified standard",
            venue.acronym
        )
    })
}

/// One venue as shown in the conference table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConferenceRow {
    pub venue_key: String,
    pub acronym: String,
    pub area_id: String,
    pub sponsor: String,
    pub submitted: u32,
    pub accepted: u32,
    pub acceptance_rate: Percent,
    pub stated_acceptance_rate: Option<Percent>,
    /// Set when the published rate differs from the recomputed one.
    pub rate_discrepancy: bool,
    pub h5_index: u32,
    pub tier: Tier,
    pub min_pages: u32,
    pub flags: ComplianceFlags,
}

impl ConferenceRow {
    pub fn exceptions(&self) -> Vec<Metric> {
        self.flags.exceptions()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub rows: Vec<ConferenceRow>,
    pub warnings: Vec<String>,
}

impl ClassificationReport {
    pub fn rows_in<'a>(&'a self, area_id: &'a str) -> impl Iterator<Item = &'a ConferenceRow> + 'a {
        self.rows.iter().filter(move |r| r.area_id == area_id)
    }

    pub fn row(&self, venue_key: &str) -> Option<&ConferenceRow> {
        self.rows.iter().find(|r| r.venue_key == venue_key)
    }
}

pub fn classify_venue(venue: &Venue) -> Result<ConferenceRow, ClassifyError> {
    let rate = rate_for(venue)?;
    let flags = check_compliance(venue)?;
    let tier = classify_tier(venue)?;
    Ok(ConferenceRow {
        venue_key: venue.venue_key.clone(),
        acronym: venue.acronym.clone(),
        area_id: venue.area_id.clone(),
        sponsor: venue.sponsor.clone(),
        submitted: venue.metrics.submitted,
        accepted: venue.metrics.accepted,
        acceptance_rate: rate,
        stated_acceptance_rate: venue.stated_acceptance_rate,
        rate_discrepancy: venue.stated_acceptance_rate.is_some_and(|s| s != rate),
        h5_index: venue.metrics.h5_index,
        tier,
        min_pages: venue.min_pages,
        flags,
    })
}

/// Classifies every venue, in registry order.
pub fn classification_report(registry: &Registry) -> Result<ClassificationReport, ClassifyError> {
    let mut report = ClassificationReport::default();
    for venue in &registry.venues {
        let row = classify_venue(venue)?;
        if let Some(w) = unconfirmed_top_warning(venue) {
            report.warnings.push(w);
        }
        if row.rate_discrepancy {
            report.warnings.push(format!(
                "{}: published acceptance rate {} differs from recomputed {} ({}/{})",
                row.acronym,
                row.stated_acceptance_rate
                    .expect("discrepancy implies a stated rate"),
                row.acceptance_rate,
                row.accepted,
                row.submitted
            ));
        }
        report.rows.push(row);
    }
    Ok(report)
}

pub const CSV_HEADER: &str = "area_id,venue_key,conference,sponsor,submitted,accepted,accept_rate,h5_index,rank,pages,submitted_ok,acceptance_ok,h5_ok,stated_rate,rate_discrepancy";

/// Renders rows as CSV: the table columns followed by the flag columns.
pub fn render_csv<'a>(rows: impl IntoIterator<Item = &'a ConferenceRow>) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(','))
        .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.area_id.clone(),
            r.venue_key.clone(),
            r.acronym.clone(),
            r.sponsor.clone(),
            r.submitted.to_string(),
            r.accepted.to_string(),
            r.acceptance_rate.to_string(),
            r.h5_index.to_string(),
            r.tier.to_string(),
            r.min_pages.to_string(),
            r.flags.submitted_ok.to_string(),
            r.flags.acceptance_ok.to_string(),
            r.flags.h5_ok.to_string(),
            r.stated_acceptance_rate
                .map(|p| p.to_string())
                .unwrap_or_default(),
            r.rate_discrepancy.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

/// Plain-text table. Cells that miss a threshold are marked with `*`.
pub fn render_table<'a>(rows: impl IntoIterator<Item = &'a ConferenceRow>) -> String {
    let header = [
        "#",
        "Conference",
        "Sponsor",
        "Submitted",
        "Accepted",
        "Accept. Rate",
        "h5-index",
        "Rank",
        "Pages",
    ];
    let mark = |v: String, ok: bool| if ok { v } else { format!("{v}*") };
    let body: Vec<[String; 9]> = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let rate = match (r.rate_discrepancy, r.stated_acceptance_rate) {
                (true, Some(stated)) => format!("{} (published {stated})", r.acceptance_rate),
                _ => r.acceptance_rate.to_string(),
            };
            [
                (i + 1).to_string(),
                r.acronym.clone(),
                r.sponsor.clone(),
                mark(r.submitted.to_string(), r.flags.submitted_ok),
                r.accepted.to_string(),
                mark(rate, r.flags.acceptance_ok),
                mark(r.h5_index.to_string(), r.flags.h5_ok),
                match r.tier {
                    Tier::Standard => String::new(),
                    t => t.to_string(),
                },
                r.min_pages.to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(|h| h.chars().count());
    for row in &body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(&header.map(String::from));
    for row in &body {
        line(row);
    }
    out
}
