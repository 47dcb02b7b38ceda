//! Versioned binary gazetteer snapshot.
//!
//! Layout: 8-byte magic, little-endian `u32` version, then a bincode body
//! holding entries, name index and admin index in canonical order.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gazetteer::{AdminKey, Gazetteer, GazetteerEntry};

pub const MAGIC: &[u8; 8] = b"TOPOSNAP";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("snapshot i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a gazetteer snapshot (bad magic header)")]
    BadMagic,
    #[error("snapshot version {found} unsupported (expected {VERSION})")]
    Version { found: u32 },
    #[error("corrupt snapshot body: {0}")]
    Body(#[from] bincode::Error),
}

#[derive(Serialize)]
struct BodyRef<'a> {
    entries: Vec<&'a GazetteerEntry>,
    names: Vec<(&'a String, &'a Vec<u64>)>,
    admin: Vec<(&'a AdminKey, &'a u64)>,
}

#[derive(Deserialize)]
struct Body {
    entries: Vec<GazetteerEntry>,
    names: Vec<(String, Vec<u64>)>,
    admin: Vec<(AdminKey, u64)>,
}

pub fn write_snapshot<W: Write>(g: &Gazetteer, mut w: W) -> Result<(), SnapshotError> {
    let (entries, names, admin) = g.to_parts();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    bincode::serialize_into(&mut w, &BodyRef { entries, names, admin })?;
    w.flush()?;
    Ok(())
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<Gazetteer, SnapshotError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(|_| SnapshotError::BadMagic)?;
    if &magic != MAGIC {
        return Err(SnapshotError::BadMagic);
    }
    let mut version = [0u8; 4];
    r.read_exact(&mut version)?;
    let found = u32::from_le_bytes(version);
    if found != VERSION {
        return Err(SnapshotError::Version { found });
    }
    let body: Body = bincode::deserialize_from(r)?;
    Ok(Gazetteer::from_parts(body.entries, body.names, body.admin))
}

/// True when `bytes` start with the snapshot magic.
pub fn has_magic(bytes: &[u8]) -> bool {
    bytes.starts_with(MAGIC)
}
