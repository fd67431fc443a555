//! The curated configuration corpus: research areas, tracked venues with
//! their edition metrics, departments and researchers.
//!
//! Each entity kind lives in its own CSV file with a header row. Loading
//! cross-validates every reference so that downstream stages can index by
//! id without checking.

mod alias;
mod load;

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::units::Percent;

pub use alias::{AliasIndex, AliasKey, alias_index};
pub use load::{RegistryPaths, load_registry};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Area {
    pub area_id: String,
    pub name: String,
}

/// Submission and citation figures for a venue edition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VenueMetrics {
    pub submitted: u32,
    pub accepted: u32,
    pub h5_index: u32,
}

/// The curated rank decision for a venue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ManualRank {
    #[default]
    None,
    Top,
    NearTheTop,
}

impl FromStr for ManualRank {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "" | "none" | "-" => Ok(ManualRank::None),
            "top" => Ok(ManualRank::Top),
            "near-the-top" => Ok(ManualRank::NearTheTop),
            other => Err(format!("unknown manual_rank {other:?}")),
        }
    }
}

impl fmt::Display for ManualRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ManualRank::None => "none",
            ManualRank::Top => "top",
            ManualRank::NearTheTop => "near-the-top",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Venue {
    pub venue_key: String,
    pub acronym: String,
    pub area_id: String,
    pub sponsor: String,
    pub metrics: VenueMetrics,
    pub min_pages: u32,
    pub manual_rank: ManualRank,
    /// Acceptance rate as published, kept next to the raw counts.
    pub stated_acceptance_rate: Option<Percent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstitutionKind {
    Federal,
    State,
    Private,
    Institute,
}

impl FromStr for InstitutionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "federal" => Ok(InstitutionKind::Federal),
            "state" => Ok(InstitutionKind::State),
            "private" => Ok(InstitutionKind::Private),
            "institute" => Ok(InstitutionKind::Institute),
            other => Err(format!("unknown institution_kind {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Department {
    pub dept_id: String,
    pub name: String,
    pub institution_kind: InstitutionKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Researcher {
    pub researcher_id: String,
    pub canonical_name: String,
    /// DBLP spellings, homonym suffix included where DBLP uses one.
    pub dblp_aliases: Vec<String>,
    pub dept_id: String,
}

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("{}: {source}", file.display())]
    Io {
        file: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {rule}", file.display())]
    Invalid {
        file: PathBuf,
        line: u64,
        rule: String,
    },
    #[error("alias {alias:?} is listed twice for {researcher}")]
    DuplicateAlias { alias: String, researcher: String },
    #[error("alias {alias:?} is claimed by both {first} and {second}")]
    AliasCollision {
        alias: String,
        first: String,
        second: String,
    },
}

/// A loaded, cross-validated registry. Immutable after load.
#[derive(Debug, Clone, Serialize)]
pub struct Registry {
    pub areas: Vec<Area>,
    pub venues: Vec<Venue>,
    pub departments: Vec<Department>,
    pub researchers: Vec<Researcher>,
    /// SHA-256 over the four input files.
    pub digest: String,
    #[serde(skip)]
    index: Lookup,
    #[serde(skip)]
    aliases: AliasIndex,
}

#[derive(Debug, Clone, Default)]
struct Lookup {
    areas: HashMap<String, usize>,
    venues: HashMap<String, usize>,
    departments: HashMap<String, usize>,
    researchers: HashMap<String, usize>,
}

impl Registry {
    pub fn area(&self, id: &str) -> Option<&Area> {
        self.index.areas.get(id).map(|&i| &self.areas[i])
    }

    pub fn venue(&self, key: &str) -> Option<&Venue> {
        self.index.venues.get(key).map(|&i| &self.venues[i])
    }

    pub fn department(&self, id: &str) -> Option<&Department> {
        self.index
            .departments
            .get(id)
            .map(|&i| &self.departments[i])
    }

    pub fn researcher(&self, id: &str) -> Option<&Researcher> {
        self.index
            .researchers
            .get(id)
            .map(|&i| &self.researchers[i])
    }

    pub fn aliases(&self) -> &AliasIndex {
        &self.aliases
    }

    /// Venues of one area, in registry order.
    pub fn venues_in<'a>(&'a self, area_id: &'a str) -> impl Iterator<Item = &'a Venue> + 'a {
        self.venues.iter().filter(move |v| v.area_id == area_id)
    }

    /// Deterministic JSON rendering of the loaded tables.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("registry serializes")
    }

    /// Loads the four standard files from one directory.
    pub fn load_dir(dir: &Path) -> Result<Registry, RegistryError> {
        load_registry(&RegistryPaths::in_dir(dir))
    }
}
