//! In-memory GeoNames gazetteer: entries, a normalized name index and an
//! administrative-code index used to rebuild spatial hierarchies.

mod ingest;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::{BoundingBox, LatLon};
use crate::normalize::normalize;

pub use ingest::{ingest_geonames, ingest_geonames_with_boxes, IngestError, IngestOptions, IngestReport, Ingested};

/// One GeoNames record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GazetteerEntry {
    pub id: u64,
    pub name: String,
    pub ascii_name: String,
    pub alternate_names: Vec<String>,
    pub latitude: f64,
    pub longitude: f64,
    pub feature_class: String,
    pub feature_code: String,
    pub country_code: String,
    pub admin1_code: String,
    pub admin2_code: String,
    pub population: u64,
    pub bounding_box: Option<BoundingBox>,
}

impl GazetteerEntry {
    pub fn coord(&self) -> LatLon {
        LatLon { lat: self.latitude, lon: self.longitude }
    }

    /// Primary, ASCII and alternate names, raw.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.name.as_str())
            .chain(std::iter::once(self.ascii_name.as_str()))
            .chain(self.alternate_names.iter().map(String::as_str))
    }

    pub fn normalized_names(&self) -> BTreeSet<String> {
        self.names().map(normalize).filter(|n| !n.is_empty()).collect()
    }

    /// The administrative level this record defines, if any.
    pub fn admin_division(&self) -> Option<Division> {
        match self.feature_code.as_str() {
            "ADM2" => Some(Division::County),
            "ADM1" => Some(Division::State),
            code if code.starts_with("PCL") => Some(Division::Country),
            _ => None,
        }
    }

    fn admin_key(&self) -> Option<AdminKey> {
        if self.country_code.is_empty() {
            return None;
        }
        let cc = self.country_code.clone();
        match self.admin_division()? {
            Division::Country => Some(AdminKey::Country(cc)),
            Division::State if !self.admin1_code.is_empty() => Some(AdminKey::State(cc, self.admin1_code.clone())),
            Division::County if !self.admin1_code.is_empty() && !self.admin2_code.is_empty() => {
                Some(AdminKey::County(cc, self.admin1_code.clone(), self.admin2_code.clone()))
            }
            _ => None,
        }
    }

    /// Ordering among records competing for the same admin key: sovereign
    /// PCLI first, historical PCLH last, then population, then id.
    fn admin_precedence(&self) -> (u8, std::cmp::Reverse<u64>, u64) {
        let rank = match self.feature_code.as_str() {
            "PCLI" | "ADM1" | "ADM2" => 0,
            "PCLH" => 2,
            _ => 1,
        };
        (rank, std::cmp::Reverse(self.population), self.id)
    }
}

/// Administrative division levels, finest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Division {
    County,
    State,
    Country,
}

impl Division {
    pub const ALL: [Division; 3] = [Division::County, Division::State, Division::Country];
}

/// Join key of the admin-code index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AdminKey {
    Country(String),
    State(String, String),
    County(String, String, String),
}

/// Spatial hierarchy of one record. Levels that do not resolve are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HierarchyChain {
    pub leaf: u64,
    pub county: Option<u64>,
    pub state: Option<u64>,
    pub country: Option<u64>,
}

impl HierarchyChain {
    pub fn at(&self, d: Division) -> Option<u64> {
        match d {
            Division::County => self.county,
            Division::State => self.state,
            Division::Country => self.country,
        }
    }

    /// Distinct proper ancestors, parent first. The leaf itself is never
    /// included even when it is its own county/state/country.
    pub fn ancestors(&self) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::with_capacity(3);
        for id in [self.county, self.state, self.country].into_iter().flatten() {
            if id != self.leaf && !out.contains(&id) {
                out.push(id);
            }
        }
        out
    }

    /// Nearest defined proper ancestor.
    pub fn parent(&self) -> Option<u64> {
        self.ancestors().first().copied()
    }

    /// True when `id` is the leaf or one of its ancestors.
    pub fn contains(&self, id: u64) -> bool {
        self.leaf == id || self.county == Some(id) || self.state == Some(id) || self.country == Some(id)
    }
}

#[derive(Debug, Error)]
pub enum GazetteerError {
    #[error("duplicate gazetteer id {0}")]
    DuplicateId(u64),
}

/// Immutable gazetteer. Safe to share across threads once built.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    entries: HashMap<u64, GazetteerEntry>,
    name_index: HashMap<String, Vec<u64>>,
    admin_index: HashMap<AdminKey, u64>,
}

pub(crate) type Parts<'a> = (Vec<&'a GazetteerEntry>, Vec<(&'a String, &'a Vec<u64>)>, Vec<(&'a AdminKey, &'a u64)>);

impl Gazetteer {
    pub fn from_entries(entries: impl IntoIterator<Item = GazetteerEntry>) -> Result<Self, GazetteerError> {
        let mut map = HashMap::new();
        for e in entries {
            let id = e.id;
            if map.insert(id, e).is_some() {
                return Err(GazetteerError::DuplicateId(id));
            }
        }
        let mut name_index: HashMap<String, Vec<u64>> = HashMap::new();
        let mut admin_index: HashMap<AdminKey, u64> = HashMap::new();
        for e in map.values() {
            for n in e.normalized_names() {
                name_index.entry(n).or_default().push(e.id);
            }
            if let Some(key) = e.admin_key() {
                match admin_index.get(&key) {
                    Some(cur) if map[cur].admin_precedence() <= e.admin_precedence() => {}
                    _ => {
                        admin_index.insert(key, e.id);
                    }
                }
            }
        }
        for ids in name_index.values_mut() {
            ids.sort_unstable();
        }
        Ok(Gazetteer { entries: map, name_index, admin_index })
    }

    pub(crate) fn from_parts(
        entries: Vec<GazetteerEntry>,
        names: Vec<(String, Vec<u64>)>,
        admin: Vec<(AdminKey, u64)>,
    ) -> Self {
        Gazetteer {
            entries: entries.into_iter().map(|e| (e.id, e)).collect(),
            name_index: names.into_iter().collect(),
            admin_index: admin.into_iter().collect(),
        }
    }

    /// Index contents in a canonical order, for serialization.
    pub(crate) fn to_parts(&self) -> Parts<'_> {
        let mut entries: Vec<_> = self.entries.values().collect();
        entries.sort_unstable_by_key(|e| e.id);
        let mut names: Vec<_> = self.name_index.iter().collect();
        names.sort_unstable();
        let mut admin: Vec<_> = self.admin_index.iter().collect();
        admin.sort_unstable();
        (entries, names, admin)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: u64) -> Option<&GazetteerEntry> {
        self.entries.get(&id)
    }

    /// All entries in ascending id order.
    pub fn entries(&self) -> Vec<&GazetteerEntry> {
        let mut v: Vec<_> = self.entries.values().collect();
        v.sort_unstable_by_key(|e| e.id);
        v
    }

    pub fn admin(&self, key: &AdminKey) -> Option<&GazetteerEntry> {
        self.admin_index.get(key).and_then(|id| self.entries.get(id))
    }

    /// Exact match on the normalized name, ascending id.
    pub fn lookup(&self, name: &str) -> Vec<&GazetteerEntry> {
        self.lookup_normalized(&normalize(name))
    }

    pub fn lookup_normalized(&self, key: &str) -> Vec<&GazetteerEntry> {
        self.name_index
            .get(key)
            .map(|ids| ids.iter().filter_map(|id| self.entries.get(id)).collect())
            .unwrap_or_default()
    }

    pub fn hierarchy_of(&self, entry: &GazetteerEntry) -> HierarchyChain {
        let cc = &entry.country_code;
        let (a1, a2) = (&entry.admin1_code, &entry.admin2_code);
        let find = |key: AdminKey| self.admin_index.get(&key).copied();
        let defined = !cc.is_empty();
        HierarchyChain {
            leaf: entry.id,
            county: (defined && !a1.is_empty() && !a2.is_empty())
                .then(|| find(AdminKey::County(cc.clone(), a1.clone(), a2.clone())))
                .flatten(),
            state: (defined && !a1.is_empty()).then(|| find(AdminKey::State(cc.clone(), a1.clone()))).flatten(),
            country: defined.then(|| find(AdminKey::Country(cc.clone()))).flatten(),
        }
    }

    pub fn ancestor_at(&self, chain: &HierarchyChain, d: Division) -> Option<&GazetteerEntry> {
        chain.at(d).and_then(|id| self.get(id))
    }
}
