//! Resolutions payload shared by the CLI and the HTTP endpoint.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::gazetteer::Gazetteer;
use crate::resolve::{resolve_document, ResolveOptions, ResolvedToponym, Source};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionRecord {
    pub surface: String,
    pub mentions: Vec<Span>,
    pub geonames_id: Option<u64>,
    pub name: Option<String>,
    pub lat: Option<f64>,
    pub lon: Option<f64>,
    pub confidence: f64,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentResolutions {
    pub doc_id: String,
    pub resolutions: Vec<ResolutionRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub documents: Vec<DocumentResolutions>,
}

impl DocumentResolutions {
    pub fn from_resolved(doc: &Document, resolved: &[ResolvedToponym<'_>]) -> Self {
        let resolutions = resolved
            .iter()
            .map(|r| {
                let entry = r.interpretation.map(|i| i.entry);
                ResolutionRecord {
                    surface: r.group.surface.clone(),
                    mentions: r
                        .group
                        .mentions
                        .iter()
                        .map(|&k| Span { start: doc.toponyms[k].start, end: doc.toponyms[k].end })
                        .collect(),
                    geonames_id: entry.map(|e| e.id),
                    name: entry.map(|e| e.name.clone()),
                    lat: entry.map(|e| e.latitude),
                    lon: entry.map(|e| e.longitude),
                    confidence: r.confidence,
                    source: r.source,
                }
            })
            .collect();
        DocumentResolutions { doc_id: doc.doc_id.clone(), resolutions }
    }
}

/// Resolves every document; output order follows input order.
pub fn resolve_corpus(docs: &[Document], g: &Gazetteer, opts: &ResolveOptions) -> ResolutionReport {
    let documents =
        docs.par_iter().map(|d| DocumentResolutions::from_resolved(d, &resolve_document(d, g, opts))).collect();
    ResolutionReport { documents }
}

impl ResolutionReport {
    /// Canonical serialized form: pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization is infallible");
        s.push('\n');
        s
    }
}
