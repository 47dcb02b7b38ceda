//! Context-bound hypotheses: inheritance and near-location probabilities
//! per administrative division, blended by an entropy weight and applied
//! iteratively on top of the preliminary pass.

use serde::{Deserialize, Serialize};

use super::preliminary::preliminary_choices;
use super::{argmax, similarity, ResolutionContext, ResolvedToponym, Source};
use crate::corpus::Document;
use crate::gazetteer::{Division, Gazetteer};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CbhConfig {
    pub max_iterations: usize,
    /// Finest to coarsest.
    pub divisions: Vec<Division>,
}

impl Default for CbhConfig {
    fn default() -> Self {
        CbhConfig { max_iterations: 2, divisions: Division::ALL.to_vec() }
    }
}

/// Normalizes non-negative weights; `None` when they sum to zero.
pub fn normalize_weights(weights: &[f64]) -> Option<Vec<f64>> {
    let total: f64 = weights.iter().sum();
    (total > 0.0).then(|| weights.iter().map(|w| w / total).collect())
}

/// `J = 1 - H(p) / log n`, 1 for a single candidate.
pub fn entropy_weight(p: &[f64]) -> f64 {
    if p.len() <= 1 {
        return 1.0;
    }
    if p.iter().all(|&x| x == p[0]) {
        return 0.0;
    }
    let h: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum();
    (1.0 - h / (p.len() as f64).log2()).clamp(0.0, 1.0)
}

/// `j * near + (1 - j) * inh`, componentwise.
pub fn blend(j: f64, near: &[f64], inh: &[f64]) -> Vec<f64> {
    near.iter().zip(inh).map(|(n, i)| j * n + (1.0 - j) * i).collect()
}

/// Combines the two hypotheses. When only one is defined it is returned
/// unchanged; when neither is, the result is undefined.
pub fn context_bound(near: Option<Vec<f64>>, inh: Option<Vec<f64>>) -> Option<Vec<f64>> {
    match (near, inh) {
        (Some(n), Some(i)) => Some(blend(entropy_weight(&n), &n, &i)),
        (Some(n), None) => Some(n),
        (None, Some(i)) => Some(i),
        (None, None) => None,
    }
}

impl ResolutionContext<'_, '_> {
    /// Inheritance probabilities at division `d`: mentions of each
    /// candidate's ancestor at `d`, normalized over candidates.
    pub fn p_inh(&self, group: usize, d: Division, state: &[Option<usize>]) -> Option<Vec<f64>> {
        let counts: Vec<f64> = self.candidates[group]
            .iter()
            .map(|c| c.chain.at(d).map_or(0.0, |node| self.evidence(node, group, state).len() as f64))
            .collect();
        normalize_weights(&counts)
    }

    /// Near-location probabilities at division `d`: inverse term distance
    /// between the toponym and its candidate ancestor's closest mention.
    pub fn p_near(&self, group: usize, d: Division, state: &[Option<usize>]) -> Option<Vec<f64>> {
        let positions = &self.groups[group].positions;
        let sims: Vec<f64> = self.candidates[group]
            .iter()
            .map(|c| c.chain.at(d).map_or(0.0, |node| similarity(positions, &self.evidence(node, group, state))))
            .collect();
        normalize_weights(&sims)
    }

    pub fn p_cb(&self, group: usize, d: Division, state: &[Option<usize>]) -> Option<Vec<f64>> {
        if self.candidates[group].is_empty() {
            return None;
        }
        context_bound(self.p_near(group, d, state), self.p_inh(group, d, state))
    }
}

pub fn resolve_cbh<'g>(doc: &Document, g: &'g Gazetteer, cfg: &CbhConfig) -> Vec<ResolvedToponym<'g>> {
    let ctx = ResolutionContext::new(doc, g);
    let state = preliminary_choices(&ctx);
    cbh_on_context(&ctx, state, cfg)
}

/// Runs the hypothesis passes starting from `state`. Within one division
/// every group is re-decided against the same snapshot of the assignment.
pub(crate) fn cbh_on_context<'g>(
    ctx: &ResolutionContext<'_, 'g>,
    mut state: Vec<Option<usize>>,
    cfg: &CbhConfig,
) -> Vec<ResolvedToponym<'g>> {
    let n = ctx.groups.len();
    if cfg.max_iterations == 0 {
        return (0..n).map(|i| ctx.result(i, state[i], 0.0, Source::Preliminary)).collect();
    }
    let mut touched = vec![false; n];
    for _ in 0..cfg.max_iterations {
        for &d in &cfg.divisions {
            let snapshot = state.clone();
            for i in 0..n {
                if let Some(p) = ctx.p_cb(i, d, &snapshot) {
                    touched[i] = true;
                    state[i] = argmax(&ctx.candidates[i], &p);
                }
            }
        }
    }
    (0..n)
        .map(|i| {
            let confidence = state[i].and_then(|c| {
                cfg.divisions.iter().filter_map(|&d| ctx.p_cb(i, d, &state).map(|p| p[c])).reduce(f64::max)
            });
            let source = if touched[i] || confidence.is_some() { Source::Cbh } else { Source::Preliminary };
            ctx.result(i, state[i], confidence.unwrap_or(0.0), source)
        })
        .collect()
}
