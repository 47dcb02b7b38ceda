//! Shared inputs for the benchmarks.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use toporesolve::corpus::RawMention;
use toporesolve::cover::SetNode;
use toporesolve::gazetteer::ingest_geonames_with_boxes;
use toporesolve::{CoverProblem, Document, Gazetteer, HierarchySet, IngestOptions};

pub fn fixture_gazetteer() -> Gazetteer {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    let dump = BufReader::new(File::open(dir.join("gazetteer.tsv")).expect("fixture dump"));
    let boxes = BufReader::new(File::open(dir.join("bboxes.tsv")).expect("fixture boxes"));
    ingest_geonames_with_boxes(dump, boxes, &IngestOptions::default()).expect("fixture ingests").gazetteer
}

/// Annotates every whole-word occurrence of each surface.
pub fn document(id: &str, text: &str, surfaces: &[&str]) -> Document {
    let mut mentions = Vec::new();
    for s in surfaces {
        for (start, _) in text.match_indices(s) {
            let end = start + s.len();
            let before = text[..start].chars().next_back();
            let after = text[end..].chars().next();
            if !before.is_some_and(char::is_alphanumeric) && !after.is_some_and(char::is_alphanumeric) {
                mentions.push(RawMention { start, end, surface: None, gold: None });
            }
        }
    }
    mentions.sort_by_key(|m| m.start);
    Document::new(id, text, mentions).expect("valid spans")
}

pub fn documents() -> Vec<Document> {
    vec![
        document("ontario", "Toronto London Kingston", &["Toronto", "London", "Kingston"]),
        document("edmonton", "Edmonton lies in Alberta, Canada.", &["Edmonton", "Alberta", "Canada"]),
        document(
            "windsor",
            "Montreal and Laval are far from Windsor, Ontario.",
            &["Montreal", "Laval", "Windsor", "Ontario"],
        ),
        document(
            "long",
            "Fans from Paris, Texas and Paris, France met in London before flying to Melbourne, \
             Victoria. Later the group toured Birmingham, Kingston and Windsor near Toronto, Ontario, \
             then returned to Edmonton, Alberta via Heathrow.",
            &[
                "Paris",
                "Texas",
                "France",
                "London",
                "Melbourne",
                "Victoria",
                "Birmingham",
                "Kingston",
                "Windsor",
                "Toronto",
                "Ontario",
                "Edmonton",
                "Alberta",
                "Heathrow",
            ],
        ),
    ]
}

/// Deterministic pseudo-random instance with `n` sets over `k` surfaces.
pub fn cover_instance(k: usize, n: usize) -> CoverProblem {
    let universe: Vec<String> = (0..k).map(|i| format!("s{i}")).collect();
    let mut x: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut next = move || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        x
    };
    let mut sets = Vec::with_capacity(n);
    for r in 0..n {
        let mut children = Vec::new();
        for (i, s) in universe.iter().enumerate() {
            if next() % 3 == 0 || (i + 1 == k && children.is_empty()) {
                children.push(SetNode { id: (r * k + i) as u64 + 1, surface: s.clone(), population: next() % 100_000 });
            }
        }
        sets.push(HierarchySet {
            root: r as u64 + 1,
            mentioned: false,
            root_surfaces: vec![],
            root_population: 0,
            weight: 1.0,
            children,
        });
    }
    CoverProblem { universe, sets }
}
