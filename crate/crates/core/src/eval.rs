//! Scoring of resolutions against gold annotations.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Document, GoldAnnotation};
use crate::gazetteer::Gazetteer;
use crate::geo::{BoundingBox, LatLon};
use crate::report::{DocumentResolutions, ResolutionRecord};
use crate::resolve::chf::{cbh_and_shs, fuse};
use crate::resolve::CbhConfig;

/// Ten miles.
pub const STRICT_THRESHOLD_KM: f64 = 16.09;
pub const RELAXED_THRESHOLD_KM: f64 = 161.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    /// Gold mentions are given to the resolver.
    Resol,
    /// Predictions come from an external recognizer; spans must overlap.
    GeoTag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Correctness {
    Distance,
    BoundingBox,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub mode: EvalMode,
    pub correctness: Correctness,
    pub threshold_km: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { mode: EvalMode::Resol, correctness: Correctness::Distance, threshold_km: RELAXED_THRESHOLD_KM }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("predictions misaligned with gold corpus in document {doc_id:?}: {detail}")]
    Misaligned { doc_id: String, detail: String },
    #[error("invalid evaluation config: {0}")]
    Config(String),
    #[error("tau values must be ascending and within [0, 1]: {0:?}")]
    Taus(Vec<f64>),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub gold: usize,
    pub predicted: usize,
    pub correct: usize,
    /// Gold annotations that could not be located and were left out.
    pub excluded: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub mean_error_km: Option<f64>,
    pub counts: Counts,
}

impl Metrics {
    pub fn from_counts(counts: Counts, mean_error_km: Option<f64>) -> Self {
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let precision = ratio(counts.correct, counts.predicted);
        let recall = ratio(counts.correct, counts.gold);
        let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
        Metrics { precision, recall, f1, mean_error_km, counts }
    }

    /// Two-column text table.
    pub fn to_table(&self) -> String {
        let mut rows: Vec<(&str, String)> = vec![
            ("precision", format!("{:.4}", self.precision)),
            ("recall", format!("{:.4}", self.recall)),
            ("f1", format!("{:.4}", self.f1)),
        ];
        if let Some(m) = self.mean_error_km {
            rows.push(("mean_error_km", format!("{m:.2}")));
        }
        rows.extend([
            ("gold", self.counts.gold.to_string()),
            ("predicted", self.counts.predicted.to_string()),
            ("correct", self.counts.correct.to_string()),
            ("excluded", self.counts.excluded.to_string()),
        ]);
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let vwidth = rows.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v:>vwidth$}");
        }
        out
    }
}

/// Where a gold annotation points: the gazetteer record when its id is
/// known, otherwise the annotated coordinates.
pub fn gold_target(gold: &GoldAnnotation, g: &Gazetteer) -> Option<(LatLon, Option<BoundingBox>)> {
    if let Some(e) = gold.geonames_id.and_then(|id| g.get(id)) {
        return Some((e.coord(), e.bounding_box));
    }
    gold.coord().map(|c| (c, None))
}

/// `None` when the gold annotation cannot be located.
pub fn is_correct(pred: LatLon, gold: &GoldAnnotation, g: &Gazetteer, cfg: &EvalConfig) -> Option<bool> {
    let (target, bbox) = gold_target(gold, g)?;
    Some(judge(pred, target, bbox, cfg))
}

fn judge(pred: LatLon, target: LatLon, bbox: Option<BoundingBox>, cfg: &EvalConfig) -> bool {
    match (cfg.correctness, bbox) {
        (Correctness::BoundingBox, Some(b)) => b.contains(&pred),
        _ => pred.distance_km(&target) <= cfg.threshold_km,
    }
}

fn predicted_coord(r: &ResolutionRecord, g: &Gazetteer) -> Option<LatLon> {
    match (r.lat, r.lon) {
        (Some(lat), Some(lon)) => LatLon::new(lat, lon).ok(),
        _ => r.geonames_id.and_then(|id| g.get(id)).map(|e| e.coord()),
    }
}

#[derive(Default)]
struct Partial {
    counts: Counts,
    error_sum: f64,
    scored: usize,
}

fn score_document(
    doc: &Document,
    pred: &DocumentResolutions,
    g: &Gazetteer,
    cfg: &EvalConfig,
) -> Result<Partial, EvalError> {
    let mut part = Partial::default();
    let golds: Vec<(usize, usize, LatLon, Option<BoundingBox>)> = doc
        .toponyms
        .iter()
        .filter_map(|m| m.gold.map(|gold| (m, gold)))
        .filter_map(|(m, gold)| match gold_target(&gold, g) {
            Some((c, b)) => Some((m.start, m.end, c, b)),
            None => {
                part.counts.excluded += 1;
                None
            }
        })
        .collect();
    part.counts.gold = golds.len();

    let mut spans: Vec<(usize, usize, Option<LatLon>)> = pred
        .resolutions
        .iter()
        .flat_map(|r| {
            let c = predicted_coord(r, g);
            r.mentions.iter().map(move |s| (s.start, s.end, c))
        })
        .collect();
    spans.sort_by_key(|&(s, e, _)| (s, e));

    match cfg.mode {
        EvalMode::Resol => {
            let by_span: HashMap<(usize, usize), Option<LatLon>> = spans.iter().map(|&(s, e, c)| ((s, e), c)).collect();
            for &(s, e, target, bbox) in &golds {
                let Some(&coord) = by_span.get(&(s, e)) else {
                    return Err(EvalError::Misaligned {
                        doc_id: doc.doc_id.clone(),
                        detail: format!("no prediction for gold mention at {s}..{e}"),
                    });
                };
                if let Some(p) = coord {
                    part.counts.predicted += 1;
                    part.error_sum += p.distance_km(&target);
                    part.scored += 1;
                    if judge(p, target, bbox, cfg) {
                        part.counts.correct += 1;
                    }
                }
            }
        }
        EvalMode::GeoTag => {
            let mut used = vec![false; golds.len()];
            for &(s, e, coord) in &spans {
                let Some(p) = coord else { continue };
                part.counts.predicted += 1;
                let hit = golds.iter().enumerate().find(|(k, g)| !used[*k] && g.0 < e && s < g.1);
                if let Some((k, &(_, _, target, bbox))) = hit {
                    used[k] = true;
                    if judge(p, target, bbox, cfg) {
                        part.counts.correct += 1;
                    }
                }
            }
        }
    }
    Ok(part)
}

/// Precision, recall, F1 and (in Resol mode) mean error over a corpus.
pub fn evaluate(
    corpus: &[Document],
    predictions: &[DocumentResolutions],
    g: &Gazetteer,
    cfg: &EvalConfig,
) -> Result<Metrics, EvalError> {
    if cfg.correctness == Correctness::Distance && cfg.threshold_km.is_nan() || cfg.threshold_km <= 0.0 {
        return Err(EvalError::Config(format!("threshold_km must be positive, got {}", cfg.threshold_km)));
    }
    let mut by_id: HashMap<&str, &DocumentResolutions> = HashMap::new();
    for p in predictions {
        if by_id.insert(p.doc_id.as_str(), p).is_some() {
            return Err(EvalError::Misaligned { doc_id: p.doc_id.clone(), detail: "duplicate predictions".into() });
        }
    }
    let mut docs: Vec<&Document> = corpus.iter().collect();
    docs.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    for p in predictions {
        if !corpus.iter().any(|d| d.doc_id == p.doc_id) {
            return Err(EvalError::Misaligned { doc_id: p.doc_id.clone(), detail: "not in gold corpus".into() });
        }
    }
    let mut total = Partial::default();
    for d in docs {
        let pred = by_id.get(d.doc_id.as_str()).ok_or_else(|| EvalError::Misaligned {
            doc_id: d.doc_id.clone(),
            detail: "no predictions for document".into(),
        })?;
        let p = score_document(d, pred, g, cfg)?;
        total.counts.gold += p.counts.gold;
        total.counts.predicted += p.counts.predicted;
        total.counts.correct += p.counts.correct;
        total.counts.excluded += p.counts.excluded;
        total.error_sum += p.error_sum;
        total.scored += p.scored;
    }
    let mean = match cfg.mode {
        EvalMode::Resol if total.scored > 0 => Some(total.error_sum / total.scored as f64),
        EvalMode::Resol => Some(0.0),
        EvalMode::GeoTag => None,
    };
    Ok(Metrics::from_counts(total.counts, mean))
}

/// Evaluates the fused resolver at each threshold. The two component
/// resolvers run once per document.
pub fn tau_sweep(
    corpus: &[Document],
    g: &Gazetteer,
    cbh: &CbhConfig,
    taus: &[f64],
    cfg: &EvalConfig,
) -> Result<Vec<(f64, Metrics)>, EvalError> {
    let ascending = taus.windows(2).all(|w| w[0] <= w[1]);
    if !ascending || taus.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(EvalError::Taus(taus.to_vec()));
    }
    let parts: Vec<_> = corpus.par_iter().map(|d| cbh_and_shs(d, g, cbh)).collect();
    taus.iter()
        .map(|&tau| {
            let preds: Vec<DocumentResolutions> = corpus
                .iter()
                .zip(&parts)
                .map(|(d, (c, s))| DocumentResolutions::from_resolved(d, &fuse(c, s, tau)))
                .collect();
            evaluate(corpus, &preds, g, cfg).map(|m| (tau, m))
        })
        .collect()
}

pub fn sweep_csv(rows: &[(f64, Metrics)]) -> String {
    let mut out = String::from("tau,precision,recall,f1\n");
    for (tau, m) in rows {
        let _ = writeln!(out, "{tau},{:.4},{:.4},{:.4}", m.precision, m.recall, m.f1);
    }
    out
}

/// Expands `start:end:step` into an ascending list of thresholds.
pub fn parse_tau_range(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad tau range {spec:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let [start, end, step] = parts[..] else {
        return Err(format!("tau range {spec:?} must look like start:end:step"));
    };
    if step.is_nan() || step <= 0.0 || end < start {
        return Err(format!("tau range {spec:?} needs start <= end and a positive step"));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| ((start + k as f64 * step) * 1e9).round() / 1e9).collect())
}
