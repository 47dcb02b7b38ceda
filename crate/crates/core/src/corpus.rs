//! Documents with annotated toponym mentions, the tokenizer, and term
//! positions used by the context models.

use std::collections::{HashMap, HashSet};
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::LatLon;
use crate::normalize::normalize;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unreadable corpus: {0}")]
    Io(#[from] std::io::Error),
    #[error("corpus schema violation at {path}: {message}")]
    Schema { path: String, message: String },
}

impl CorpusError {
    fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        CorpusError::Schema { path: path.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub start: usize,
    pub end: usize,
}

/// Ground truth attached to a mention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoldAnnotation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geonames_id: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lon: Option<f64>,
}

impl GoldAnnotation {
    pub fn coord(&self) -> Option<LatLon> {
        LatLon::new(self.lat?, self.lon?).ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToponymMention {
    pub surface: String,
    pub start: usize,
    pub end: usize,
    /// First token overlapping the span.
    pub token_index: usize,
    /// Span did not coincide with token boundaries and was snapped to the
    /// covering tokens.
    pub re_aligned: bool,
    pub gold: Option<GoldAnnotation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub doc_id: String,
    pub text: String,
    pub tokens: Vec<Token>,
    pub toponyms: Vec<ToponymMention>,
    terms: Vec<String>,
}

/// Mention as it appears on the wire.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawMention {
    pub start: usize,
    pub end: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold: Option<GoldAnnotation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawDocument {
    pub doc_id: String,
    pub text: String,
    #[serde(default)]
    pub toponyms: Vec<RawMention>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusFile {
    pub documents: Vec<RawDocument>,
}

/// Whitespace tokenizer that trims non-alphanumeric characters from both
/// ends of each token. Offsets are byte offsets into `text`.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut chunk_start: Option<usize> = None;
    let push = |from: usize, to: usize, out: &mut Vec<Token>| {
        let piece = &text[from..to];
        let Some((lead, _)) = piece.char_indices().find(|(_, c)| c.is_alphanumeric()) else {
            return;
        };
        let (trail, c) = piece.char_indices().rev().find(|(_, c)| c.is_alphanumeric()).unwrap();
        let (start, end) = (from + lead, from + trail + c.len_utf8());
        out.push(Token { surface: text[start..end].to_string(), start, end });
    };
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), chunk_start) {
            (true, Some(s)) => {
                push(s, i, &mut out);
                chunk_start = None;
            }
            (false, None) => chunk_start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = chunk_start {
        push(s, text.len(), &mut out);
    }
    out
}

/// Key used to match multi-word names against token runs: the name is
/// tokenized like document text and each token normalized.
pub fn term_key(name: &str) -> String {
    tokenize(name).iter().map(|t| normalize(&t.surface)).collect::<Vec<_>>().join(" ")
}

pub fn term_distance(i: usize, j: usize) -> usize {
    i.abs_diff(j)
}

/// Mentions sharing a normalized surface, resolved as one unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MentionGroup {
    pub key: String,
    /// Surface of the first occurrence.
    pub surface: String,
    /// Indices into `Document::toponyms`.
    pub mentions: Vec<usize>,
    /// Token indices of the mentions, ascending and distinct.
    pub positions: Vec<usize>,
}

impl Document {
    pub fn new(
        doc_id: impl Into<String>,
        text: impl Into<String>,
        mentions: Vec<RawMention>,
    ) -> Result<Self, CorpusError> {
        Self::build(doc_id.into(), text.into(), mentions, "")
    }

    fn build(doc_id: String, text: String, mentions: Vec<RawMention>, prefix: &str) -> Result<Self, CorpusError> {
        let tokens = tokenize(&text);
        let terms = tokens.iter().map(|t| normalize(&t.surface)).collect();
        let mut toponyms = Vec::with_capacity(mentions.len());
        for (k, m) in mentions.into_iter().enumerate() {
            let path = |field: &str| format!("{prefix}toponyms[{k}].{field}");
            if m.end > text.len() {
                return Err(CorpusError::at(path("end"), format!("{} beyond text length {}", m.end, text.len())));
            }
            if m.start >= m.end {
                return Err(CorpusError::at(path("start"), format!("empty span {}..{}", m.start, m.end)));
            }
            if !text.is_char_boundary(m.start) {
                return Err(CorpusError::at(path("start"), "not a UTF-8 character boundary"));
            }
            if !text.is_char_boundary(m.end) {
                return Err(CorpusError::at(path("end"), "not a UTF-8 character boundary"));
            }
            let span = &text[m.start..m.end];
            if let Some(s) = &m.surface {
                if s != span {
                    return Err(CorpusError::at(path("surface"), format!("{s:?} does not match text {span:?}")));
                }
            }
            if let Some(g) = &m.gold {
                validate_gold(g).map_err(|(field, msg)| CorpusError::at(path(&format!("gold.{field}")), msg))?;
            }
            let covering: Vec<usize> =
                (0..tokens.len()).filter(|&t| tokens[t].start < m.end && m.start < tokens[t].end).collect();
            let (Some(&first), Some(&last)) = (covering.first(), covering.last()) else {
                return Err(CorpusError::at(path("start"), format!("span {span:?} covers no token")));
            };
            let re_aligned = tokens[first].start != m.start || tokens[last].end != m.end;
            toponyms.push(ToponymMention {
                surface: span.to_string(),
                start: m.start,
                end: m.end,
                token_index: first,
                re_aligned,
                gold: m.gold,
            });
        }
        Ok(Document { doc_id, text, tokens, toponyms, terms })
    }

    pub fn from_raw(raw: RawDocument) -> Result<Self, CorpusError> {
        Self::build(raw.doc_id, raw.text, raw.toponyms, "")
    }

    pub fn to_raw(&self) -> RawDocument {
        RawDocument {
            doc_id: self.doc_id.clone(),
            text: self.text.clone(),
            toponyms: self
                .toponyms
                .iter()
                .map(|m| RawMention { start: m.start, end: m.end, surface: Some(m.surface.clone()), gold: m.gold })
                .collect(),
        }
    }

    /// Normalized token surfaces, parallel to `tokens`.
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    /// Token indices starting a maximal run whose normalized, space-joined
    /// tokens equal one of `names` (each name given as a [`term_key`]).
    pub fn mentions_of(&self, names: &HashSet<String>) -> Vec<usize> {
        let longest = names.iter().map(|n| n.split(' ').count()).max().unwrap_or(0);
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.terms.len() {
            let max_len = longest.min(self.terms.len() - i);
            let hit = (1..=max_len).rev().find(|&len| names.contains(&self.terms[i..i + len].join(" ")));
            match hit {
                Some(len) => {
                    out.push(i);
                    i += len;
                }
                None => i += 1,
            }
        }
        out
    }

    /// Mentions grouped by normalized surface, in order of first occurrence.
    pub fn mention_groups(&self) -> Vec<MentionGroup> {
        let mut groups: Vec<MentionGroup> = Vec::new();
        let mut by_key: HashMap<String, usize> = HashMap::new();
        for (k, m) in self.toponyms.iter().enumerate() {
            let key = normalize(&m.surface);
            let gi = *by_key.entry(key.clone()).or_insert_with(|| {
                groups.push(MentionGroup { key, surface: m.surface.clone(), mentions: vec![], positions: vec![] });
                groups.len() - 1
            });
            groups[gi].mentions.push(k);
            groups[gi].positions.push(m.token_index);
        }
        for g in &mut groups {
            g.positions.sort_unstable();
            g.positions.dedup();
        }
        groups
    }
}

fn validate_gold(g: &GoldAnnotation) -> Result<(), (&'static str, String)> {
    if g.geonames_id == Some(0) {
        return Err(("geonames_id", "must be positive".into()));
    }
    match (g.lat, g.lon) {
        (Some(lat), Some(lon)) => {
            LatLon::new(lat, lon)
                .map_err(|e| (if (-90.0..=90.0).contains(&lat) { "lon" } else { "lat" }, e.to_string()))?;
        }
        (Some(_), None) => return Err(("lon", "lat given without lon".into())),
        (None, Some(_)) => return Err(("lat", "lon given without lat".into())),
        (None, None) if g.geonames_id.is_none() => {
            return Err(("geonames_id", "gold needs a geonames_id or lat/lon".into()));
        }
        (None, None) => {}
    }
    Ok(())
}

/// Reads the corpus JSON format and tokenizes every document.
pub fn load_corpus<R: Read>(reader: R) -> Result<Vec<Document>, CorpusError> {
    let mut de = serde_json::Deserializer::from_reader(reader);
    let file: CorpusFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_io() {
            CorpusError::Io(inner.into())
        } else {
            CorpusError::Schema { path, message: inner.to_string() }
        }
    })?;
    file.documents
        .into_iter()
        .enumerate()
        .map(|(i, raw)| Document::build(raw.doc_id, raw.text, raw.toponyms, &format!("documents[{i}].")))
        .collect()
}

pub fn write_corpus<W: std::io::Write>(docs: &[Document], writer: W) -> serde_json::Result<()> {
    let file = CorpusFile { documents: docs.iter().map(Document::to_raw).collect() };
    serde_json::to_writer_pretty(writer, &file)
}
