use std::collections::BTreeMap;
use std::collections::btree_map::Entry;

use serde::Serialize;

use super::{Registry, RegistryError, Researcher};
use crate::ingest::{AuthorName, split_author_name};

/// Lookup key for an author: normalized name plus homonym suffix.
///
/// An alias stored with a suffix only matches authors carrying that same
/// suffix; an alias without one only matches unsuffixed authors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AliasKey {
    pub normalized: String,
    pub suffix: Option<String>,
}

impl AliasKey {
    pub fn of(name: &AuthorName) -> Self {
        AliasKey {
            normalized: name.normalized.clone(),
            suffix: name.disambiguation_suffix.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasIndex {
    map: BTreeMap<AliasKey, String>,
}

impl AliasIndex {
    pub fn build(researchers: &[Researcher]) -> Result<AliasIndex, RegistryError> {
        let mut map = BTreeMap::new();
        for r in researchers {
            for alias in &r.dblp_aliases {
                match map.entry(AliasKey::of(&split_author_name(alias))) {
                    Entry::Vacant(slot) => {
                        slot.insert(r.researcher_id.clone());
                    }
                    Entry::Occupied(slot) if slot.get() == &r.researcher_id => {
                        return Err(RegistryError::DuplicateAlias {
                            alias: alias.clone(),
                            researcher: r.researcher_id.clone(),
                        });
                    }
                    Entry::Occupied(slot) => {
                        return Err(RegistryError::AliasCollision {
                            alias: slot.key().normalized.clone(),
                            first: slot.get().clone(),
                            second: r.researcher_id.clone(),
                        });
                    }
                }
            }
        }
        Ok(AliasIndex { map })
    }

    pub fn lookup(&self, author: &AuthorName) -> Option<&str> {
        self.map.get(&AliasKey::of(author)).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AliasKey, &str)> {
        self.map.iter().map(|(k, v)| (k, v.as_str()))
    }
}

/// Builds the normalized alias → researcher index for a registry.
pub fn alias_index(registry: &Registry) -> Result<AliasIndex, RegistryError> {
    AliasIndex::build(&registry.researchers)
}
