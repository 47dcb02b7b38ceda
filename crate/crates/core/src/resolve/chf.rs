//! Context-hierarchy fusion: trust the context-bound answer only above a
//! confidence threshold, otherwise use the hierarchy-set answer.

use serde::{Deserialize, Serialize};

use super::cbh::{cbh_on_context, CbhConfig};
use super::preliminary::preliminary_choices;
use super::shs::shs_on_context;
use super::{ResolutionContext, ResolvedToponym};
use crate::corpus::Document;
use crate::gazetteer::Gazetteer;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChfConfig {
    pub tau: f64,
    pub cbh: CbhConfig,
}

impl Default for ChfConfig {
    fn default() -> Self {
        ChfConfig { tau: 0.55, cbh: CbhConfig::default() }
    }
}

pub fn resolve_chf<'g>(doc: &Document, g: &'g Gazetteer, cfg: &ChfConfig) -> Vec<ResolvedToponym<'g>> {
    let (cbh, shs) = cbh_and_shs(doc, g, &cfg.cbh);
    fuse(&cbh, &shs, cfg.tau)
}

/// Both component resolutions for one document, sharing one context.
pub fn cbh_and_shs<'g>(
    doc: &Document,
    g: &'g Gazetteer,
    cfg: &CbhConfig,
) -> (Vec<ResolvedToponym<'g>>, Vec<ResolvedToponym<'g>>) {
    let ctx = ResolutionContext::new(doc, g);
    let cbh = cbh_on_context(&ctx, preliminary_choices(&ctx), cfg);
    let shs = shs_on_context(&ctx);
    (cbh, shs)
}

/// Per group: the CBH result when its confidence is strictly above `tau`,
/// the SHS result otherwise. Both inputs must list the same groups.
pub fn fuse<'g>(cbh: &[ResolvedToponym<'g>], shs: &[ResolvedToponym<'g>], tau: f64) -> Vec<ResolvedToponym<'g>> {
    assert_eq!(cbh.len(), shs.len(), "fusion inputs cover different mention groups");
    cbh.iter()
        .zip(shs)
        .map(|(c, s)| {
            debug_assert_eq!(c.group.key, s.group.key);
            if c.confidence > tau {
                c.clone()
            } else {
                s.clone()
            }
        })
        .collect()
}
