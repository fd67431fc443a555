use serde::{Deserialize, Serialize};

use super::names::AuthorName;
use super::pages::PageInfo;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordKind {
    ConferencePaper,
    JournalArticle,
    Other,
}

/// One parsed DBLP entry, in the shape written to the canonical record file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    #[serde(rename = "key")]
    pub record_key: String,
    pub kind: RecordKind,
    pub title: String,
    pub authors: Vec<AuthorName>,
    pub venue_key: String,
    pub year: Option<i32>,
    pub pages: PageInfo,
    #[serde(rename = "ee")]
    pub ee_links: Vec<String>,
}

/// Venue identifier for a record: the second segment of its cross-reference
/// key, else the acronym of its booktitle (or journal). Empty when neither
/// is available.
pub fn extract_venue_key(
    crossref: Option<&str>,
    booktitle: Option<&str>,
    journal: Option<&str>,
) -> String {
    if let Some(seg) = crossref.and_then(|c| c.trim().split('/').nth(1))
        && !seg.is_empty()
    {
        return seg.to_ascii_lowercase();
    }
    booktitle.or(journal).map(acronym_of).unwrap_or_default()
}

fn acronym_of(title: &str) -> String {
    let head = title.split('(').next().unwrap_or("");
    head.split_whitespace()
        .next()
        .unwrap_or("")
        .chars()
        .filter(char::is_ascii_alphanumeric)
        .map(|c| c.to_ascii_lowercase())
        .collect()
}
