//! GeoNames `allCountries`-style TSV reader plus the bounding-box sidecar.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use thiserror::Error;

use super::{Gazetteer, GazetteerEntry, GazetteerError};
use crate::geo::{BoundingBox, LatLon};

const GEONAMES_COLUMNS: usize = 19;
const REPORTED_LINES: usize = 20;

#[derive(Debug, Clone)]
pub struct IngestOptions {
    /// Fraction of malformed lines above which ingest is aborted.
    pub max_malformed_ratio: f64,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions { max_malformed_ratio: 0.10 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    /// Non-blank, non-comment lines seen.
    pub lines: usize,
    pub entries: usize,
    pub malformed: usize,
    /// 1-based line numbers of the first malformed lines.
    pub malformed_lines: Vec<usize>,
    pub boxes_attached: usize,
    pub boxes_rejected: usize,
}

#[derive(Debug)]
pub struct Ingested {
    pub gazetteer: Gazetteer,
    pub report: IngestReport,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("unreadable gazetteer stream: {0}")]
    Io(#[from] std::io::Error),
    #[error("{malformed} of {lines} lines malformed (first at lines {sample:?}); is this a GeoNames dump?")]
    TooManyMalformed { malformed: usize, lines: usize, sample: Vec<usize> },
    #[error(transparent)]
    Gazetteer(#[from] GazetteerError),
}

pub fn ingest_geonames<R: BufRead>(dump: R, opts: &IngestOptions) -> Result<Ingested, IngestError> {
    let (entries, report) = read_entries(dump, opts)?;
    finish(entries, report)
}

pub fn ingest_geonames_with_boxes<R: BufRead, B: BufRead>(
    dump: R,
    boxes: B,
    opts: &IngestOptions,
) -> Result<Ingested, IngestError> {
    let (mut entries, mut report) = read_entries(dump, opts)?;
    let mut by_id: HashMap<u64, usize> = entries.iter().enumerate().map(|(i, e)| (e.id, i)).collect();
    for line in read_lines(boxes) {
        let line = line?;
        let Some(text) = line.text else {
            report.boxes_rejected += 1;
            continue;
        };
        if skip_line(&text) {
            continue;
        }
        match parse_box(&text) {
            Some((id, bbox)) => match by_id.get_mut(&id) {
                Some(idx) => {
                    entries[*idx].bounding_box = Some(bbox);
                    report.boxes_attached += 1;
                }
                None => report.boxes_rejected += 1,
            },
            None => report.boxes_rejected += 1,
        }
    }
    by_id.clear();
    finish(entries, report)
}

fn finish(entries: Vec<GazetteerEntry>, mut report: IngestReport) -> Result<Ingested, IngestError> {
    report.entries = entries.len();
    let gazetteer = Gazetteer::from_entries(entries)?;
    Ok(Ingested { gazetteer, report })
}

fn read_entries<R: BufRead>(dump: R, opts: &IngestOptions) -> Result<(Vec<GazetteerEntry>, IngestReport), IngestError> {
    let mut report = IngestReport::default();
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for line in read_lines(dump) {
        let line = line?;
        let parsed = match &line.text {
            Some(text) if skip_line(text) => continue,
            Some(text) => parse_entry(text).filter(|e| seen.insert(e.id)),
            None => None,
        };
        report.lines += 1;
        match parsed {
            Some(e) => entries.push(e),
            None => {
                report.malformed += 1;
                if report.malformed_lines.len() < REPORTED_LINES {
                    report.malformed_lines.push(line.number);
                }
            }
        }
    }
    if report.lines > 0 && report.malformed as f64 > opts.max_malformed_ratio * report.lines as f64 {
        return Err(IngestError::TooManyMalformed {
            malformed: report.malformed,
            lines: report.lines,
            sample: report.malformed_lines,
        });
    }
    Ok((entries, report))
}

struct Line {
    number: usize,
    /// `None` when the bytes are not UTF-8.
    text: Option<String>,
}

fn read_lines<R: BufRead>(mut r: R) -> impl Iterator<Item = std::io::Result<Line>> {
    let mut number = 0;
    let mut buf = Vec::new();
    std::iter::from_fn(move || {
        buf.clear();
        match r.read_until(b'\n', &mut buf) {
            Ok(0) => None,
            Ok(_) => {
                number += 1;
                while matches!(buf.last(), Some(b'\n' | b'\r')) {
                    buf.pop();
                }
                Some(Ok(Line { number, text: String::from_utf8(buf.clone()).ok() }))
            }
            Err(e) => Some(Err(e)),
        }
    })
}

fn skip_line(text: &str) -> bool {
    text.trim().is_empty() || text.starts_with('#')
}

fn parse_entry(line: &str) -> Option<GazetteerEntry> {
    let f: Vec<&str> = line.split('\t').collect();
    if f.len() != GEONAMES_COLUMNS {
        return None;
    }
    let id: u64 = f[0].trim().parse().ok().filter(|&id| id > 0)?;
    let latitude: f64 = f[4].trim().parse().ok()?;
    let longitude: f64 = f[5].trim().parse().ok()?;
    LatLon::new(latitude, longitude).ok()?;
    if f[6].chars().count() > 1 {
        return None;
    }
    let population = match f[14].trim() {
        "" => 0,
        p => p.parse::<u64>().ok()?,
    };
    let alternate_names = f[3].split(',').map(str::trim).filter(|n| !n.is_empty()).map(String::from).collect();
    Some(GazetteerEntry {
        id,
        name: f[1].to_string(),
        ascii_name: f[2].to_string(),
        alternate_names,
        latitude,
        longitude,
        feature_class: f[6].to_string(),
        feature_code: f[7].to_string(),
        country_code: f[8].to_string(),
        admin1_code: f[10].to_string(),
        admin2_code: f[11].to_string(),
        population,
        bounding_box: None,
    })
}

fn parse_box(line: &str) -> Option<(u64, BoundingBox)> {
    let f: Vec<&str> = line.split('\t').map(str::trim).collect();
    if f.len() != 5 {
        return None;
    }
    let id = f[0].parse().ok()?;
    let n: Vec<f64> = f[1..].iter().map(|x| x.parse().ok()).collect::<Option<_>>()?;
    BoundingBox::new(n[0], n[1], n[2], n[3]).ok().map(|b| (id, b))
}
