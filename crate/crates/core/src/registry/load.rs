use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde::de::DeserializeOwned;
use sha2::{Digest, Sha256};

use super::{
    AliasIndex, Area, Department, Lookup, ManualRank, Registry, RegistryError, Researcher, Venue,
    VenueMetrics,
};
use crate::units::Percent;

/// Locations of the four registry tables.
#[derive(Debug, Clone)]
pub struct RegistryPaths {
    pub areas: PathBuf,
    pub venues: PathBuf,
    pub departments: PathBuf,
    pub researchers: PathBuf,
}

impl RegistryPaths {
    pub fn in_dir(dir: &Path) -> Self {
        RegistryPaths {
            areas: dir.join("areas.csv"),
            venues: dir.join("venues.csv"),
            departments: dir.join("departments.csv"),
            researchers: dir.join("researchers.csv"),
        }
    }

    fn all(&self) -> [&Path; 4] {
        [
            &self.areas,
            &self.venues,
            &self.departments,
            &self.researchers,
        ]
    }
}

#[derive(Deserialize)]
struct AreaRow {
    area_id: String,
    name: String,
}

#[derive(Deserialize)]
struct VenueRow {
    venue_key: String,
    acronym: String,
    area_id: String,
    sponsor: String,
    submitted: String,
    accepted: String,
    h5_index: String,
    min_pages: String,
    manual_rank: String,
    stated_acceptance_rate: String,
}

#[derive(Deserialize)]
struct DepartmentRow {
    dept_id: String,
    name: String,
    institution_kind: String,
}

#[derive(Deserialize)]
struct ResearcherRow {
    researcher_id: String,
    canonical_name: String,
    dept_id: String,
    aliases: String,
}

struct Table<'a> {
    path: &'a Path,
}

impl Table<'_> {
    fn invalid(&self, line: u64, rule: impl Into<String>) -> RegistryError {
        RegistryError::Invalid {
            file: self.path.to_path_buf(),
            line,
            rule: rule.into(),
        }
    }

    /// Parses every data row, paired with its 1-based line number.
    fn rows<T: DeserializeOwned>(&self, bytes: &[u8]) -> Result<Vec<(u64, T)>, RegistryError> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(bytes);
        let headers = reader
            .byte_headers()
            .map_err(|e| self.invalid(1, e.to_string()))?
            .clone();
        let mut out = Vec::new();
        let mut record = csv::ByteRecord::new();
        loop {
            match reader.read_byte_record(&mut record) {
                Ok(false) => break,
                Ok(true) => {
                    let line = record.position().map_or(0, |p| p.line());
                    let row = record
                        .deserialize(Some(&headers))
                        .map_err(|e| self.invalid(line, csv_message(&e)))?;
                    out.push((line, row));
                }
                Err(e) => {
                    let line = e.position().map_or(0, |p| p.line());
                    return Err(self.invalid(line, csv_message(&e)));
                }
            }
        }
        Ok(out)
    }
}

fn csv_message(e: &csv::Error) -> String {
    match e.kind() {
        csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => format!("expected {expected_len} fields, found {len}"),
        _ => e.to_string(),
    }
}

fn check_id(table: &Table<'_>, line: u64, column: &str, value: &str) -> Result<(), RegistryError> {
    if value.is_empty() {
        return Err(table.invalid(line, format!("{column} is empty")));
    }
    Ok(())
}

fn unique(
    table: &Table<'_>,
    seen: &mut HashMap<String, usize>,
    line: u64,
    column: &str,
    id: &str,
    position: usize,
) -> Result<(), RegistryError> {
    if seen.insert(id.to_string(), position).is_some() {
        return Err(table.invalid(line, format!("duplicate {column} {id:?}")));
    }
    Ok(())
}

fn metric(table: &Table<'_>, line: u64, column: &str, raw: &str) -> Result<u32, RegistryError> {
    if raw.is_empty() {
        return Err(table.invalid(line, format!("missing metric {column}")));
    }
    raw.parse().map_err(|_| {
        table.invalid(
            line,
            format!("{column} {raw:?} is not a non-negative integer"),
        )
    })
}

fn read(path: &Path) -> Result<Vec<u8>, RegistryError> {
    fs::read(path).map_err(|source| RegistryError::Io {
        file: path.to_path_buf(),
        source,
    })
}

/// Loads and cross-validates the registry tables.
pub fn load_registry(paths: &RegistryPaths) -> Result<Registry, RegistryError> {
    let contents: Vec<Vec<u8>> = paths
        .all()
        .iter()
        .map(|p| read(p))
        .collect::<Result<_, _>>()?;
    let mut hasher = Sha256::new();
    for (path, bytes) in paths.all().iter().zip(&contents) {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy())
            .unwrap_or_default();
        hasher.update(name.as_bytes());
        hasher.update([0]);
        hasher.update((bytes.len() as u64).to_le_bytes());
        hasher.update(bytes);
    }
    let digest = hex::encode(hasher.finalize());
    let mut index = Lookup::default();

    let table = Table { path: &paths.areas };
    let mut areas = Vec::new();
    for (line, row) in table.rows::<AreaRow>(&contents[0])? {
        check_id(&table, line, "area_id", &row.area_id)?;
        unique(
            &table,
            &mut index.areas,
            line,
            "area_id",
            &row.area_id,
            areas.len(),
        )?;
        areas.push(Area {
            area_id: row.area_id,
            name: row.name,
        });
    }

    let table = Table {
        path: &paths.venues,
    };
    let mut venues = Vec::new();
    for (line, row) in table.rows::<VenueRow>(&contents[1])? {
        check_id(&table, line, "venue_key", &row.venue_key)?;
        unique(
            &table,
            &mut index.venues,
            line,
            "venue_key",
            &row.venue_key,
            venues.len(),
        )?;
        if !index.areas.contains_key(&row.area_id) {
            return Err(table.invalid(line, format!("unknown area_id {:?}", row.area_id)));
        }
        let metrics = VenueMetrics {
            submitted: metric(&table, line, "submitted", &row.submitted)?,
            accepted: metric(&table, line, "accepted", &row.accepted)?,
            h5_index: metric(&table, line, "h5_index", &row.h5_index)?,
        };
        if metrics.accepted > metrics.submitted {
            return Err(table.invalid(line, "accepted exceeds submitted"));
        }
        let min_pages: u32 = row.min_pages.parse().map_err(|_| {
            table.invalid(
                line,
                format!("min_pages {:?} is not an integer", row.min_pages),
            )
        })?;
        if min_pages < 1 {
            return Err(table.invalid(line, "min_pages must be at least 1"));
        }
        let manual_rank: ManualRank = row
            .manual_rank
            .parse()
            .map_err(|e| table.invalid(line, e))?;
        let stated_acceptance_rate = match row.stated_acceptance_rate.as_str() {
            "" => None,
            raw => Some(
                raw.parse::<Percent>()
                    .map_err(|e| table.invalid(line, e.to_string()))?,
            ),
        };
        venues.push(Venue {
            venue_key: row.venue_key,
            acronym: row.acronym,
            area_id: row.area_id,
            sponsor: row.sponsor,
            metrics,
            min_pages,
            manual_rank,
            stated_acceptance_rate,
        });
    }

    let table = Table {
        path: &paths.departments,
    };
    let mut departments = Vec::new();
    for (line, row) in table.rows::<DepartmentRow>(&contents[2])? {
        check_id(&table, line, "dept_id", &row.dept_id)?;
        unique(
            &table,
            &mut index.departments,
            line,
            "dept_id",
            &row.dept_id,
            departments.len(),
        )?;
        departments.push(Department {
            institution_kind: row
                .institution_kind
                .parse()
                .map_err(|e| table.invalid(line, e))?,
            dept_id: row.dept_id,
            name: row.name,
        });
    }

    let table = Table {
        path: &paths.researchers,
    };
    let mut researchers = Vec::new();
    let mut alias_owner: HashMap<String, String> = HashMap::new();
    for (line, row) in table.rows::<ResearcherRow>(&contents[3])? {
        check_id(&table, line, "researcher_id", &row.researcher_id)?;
        unique(
            &table,
            &mut index.researchers,
            line,
            "researcher_id",
            &row.researcher_id,
            researchers.len(),
        )?;
        if !index.departments.contains_key(&row.dept_id) {
            return Err(table.invalid(line, format!("unknown dept_id {:?}", row.dept_id)));
        }
        let aliases: Vec<String> = row
            .aliases
            .split('|')
            .map(str::trim)
            .filter(|a| !a.is_empty())
            .map(String::from)
            .collect();
        if aliases.is_empty() {
            return Err(table.invalid(line, "researcher has no aliases"));
        }
        for alias in &aliases {
            if let Some(owner) = alias_owner.insert(alias.clone(), row.researcher_id.clone()) {
                return Err(
                    table.invalid(line, format!("alias {alias:?} already belongs to {owner}"))
                );
            }
        }
        researchers.push(Researcher {
            researcher_id: row.researcher_id,
            canonical_name: row.canonical_name,
            dblp_aliases: aliases,
            dept_id: row.dept_id,
        });
    }

    let aliases = AliasIndex::build(&researchers)?;
    Ok(Registry {
        areas,
        venues,
        departments,
        researchers,
        digest,
        index,
        aliases,
    })
}
