#![allow(dead_code)]

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use toporesolve::corpus::RawMention;
use toporesolve::gazetteer::{ingest_geonames_with_boxes, IngestOptions};
use toporesolve::{Document, Gazetteer, ResolvedToponym};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn gazetteer() -> Gazetteer {
    let dump = BufReader::new(File::open(fixture("gazetteer.tsv")).unwrap());
    let boxes = BufReader::new(File::open(fixture("bboxes.tsv")).unwrap());
    let out = ingest_geonames_with_boxes(dump, boxes, &IngestOptions::default()).unwrap();
    assert_eq!(out.report.malformed, 0);
    out.gazetteer
}

/// Builds a document annotating every whole-word occurrence of each surface.
pub fn doc(text: &str, surfaces: &[&str]) -> Document {
    let mut mentions = Vec::new();
    for s in surfaces {
        let mut from = 0;
        while let Some(off) = text[from..].find(s) {
            let start = from + off;
            let end = start + s.len();
            let before = text[..start].chars().next_back();
            let after = text[end..].chars().next();
            if !before.is_some_and(char::is_alphanumeric) && !after.is_some_and(char::is_alphanumeric) {
                mentions.push(RawMention { start, end, surface: None, gold: None });
            }
            from = end;
        }
    }
    mentions.sort_by_key(|m| m.start);
    Document::new("fixture", text, mentions).unwrap()
}

/// (surface, chosen id) pairs.
pub fn ids(res: &[ResolvedToponym<'_>]) -> Vec<(String, Option<u64>)> {
    res.iter().map(|r| (r.group.surface.clone(), r.interpretation.map(|i| i.id()))).collect()
}

pub fn chosen(res: &[ResolvedToponym<'_>], surface: &str) -> Option<u64> {
    res.iter().find(|r| r.group.surface == surface).and_then(|r| r.interpretation.map(|i| i.id()))
}
