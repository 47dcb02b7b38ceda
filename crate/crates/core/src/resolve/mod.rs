//! Toponym resolvers and the per-document state they share.

pub mod cbh;
pub mod chf;
pub mod preliminary;
pub mod shs;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{term_distance, term_key, Document, MentionGroup};
use crate::gazetteer::{Gazetteer, GazetteerEntry, HierarchyChain};

pub use cbh::{resolve_cbh, CbhConfig};
pub use chf::{cbh_and_shs, fuse, resolve_chf, ChfConfig};
pub use preliminary::preliminary_resolve;
pub use shs::{generate_sets, resolve_shs};

/// Scores closer than this are treated as ties.
pub(crate) const SCORE_EPSILON: f64 = 1e-12;

/// A candidate location together with its resolved hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interpretation<'g> {
    pub entry: &'g GazetteerEntry,
    pub chain: HierarchyChain,
}

impl<'g> Interpretation<'g> {
    pub fn new(g: &'g Gazetteer, entry: &'g GazetteerEntry) -> Self {
        Interpretation { entry, chain: g.hierarchy_of(entry) }
    }

    pub fn id(&self) -> u64 {
        self.entry.id
    }
}

/// Candidate interpretations of a surface form, ascending id.
pub fn candidates<'g>(surface: &str, g: &'g Gazetteer) -> Vec<Interpretation<'g>> {
    g.lookup(surface).into_iter().map(|e| Interpretation::new(g, e)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Preliminary,
    Cbh,
    Shs,
    Fallback,
}

/// Final decision for one mention group.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedToponym<'g> {
    pub group: MentionGroup,
    pub interpretation: Option<Interpretation<'g>>,
    /// In `[0, 1]`; zero whenever `interpretation` is `None`.
    pub confidence: f64,
    pub source: Source,
}

/// Index of the best-scoring candidate: highest score, then largest
/// population, then smallest id.
pub(crate) fn argmax(cands: &[Interpretation<'_>], scores: &[f64]) -> Option<usize> {
    debug_assert_eq!(cands.len(), scores.len());
    (0..cands.len()).reduce(|best, j| {
        let (sb, sj) = (scores[best], scores[j]);
        let better = if (sj - sb).abs() > SCORE_EPSILON {
            sj > sb
        } else {
            let (b, c) = (cands[best].entry, cands[j].entry);
            (c.population, std::cmp::Reverse(c.id)) > (b.population, std::cmp::Reverse(b.id))
        };
        if better {
            j
        } else {
            best
        }
    })
}

/// Highest-population candidate (id breaks ties).
pub(crate) fn most_populous(cands: &[Interpretation<'_>]) -> Option<usize> {
    argmax(cands, &vec![0.0; cands.len()])
}

/// Per-document view shared by the resolvers: mention groups, their
/// candidates, and literal mentions of every node that appears in a
/// candidate hierarchy.
#[derive(Debug)]
pub struct ResolutionContext<'d, 'g> {
    pub doc: &'d Document,
    pub gazetteer: &'g Gazetteer,
    pub groups: Vec<MentionGroup>,
    pub candidates: Vec<Vec<Interpretation<'g>>>,
    literal: HashMap<u64, Vec<usize>>,
}

impl<'d, 'g> ResolutionContext<'d, 'g> {
    pub fn new(doc: &'d Document, g: &'g Gazetteer) -> Self {
        let groups = doc.mention_groups();
        let candidates: Vec<Vec<Interpretation<'g>>> = groups.iter().map(|grp| candidates(&grp.key, g)).collect();
        let mut literal = HashMap::new();
        for interp in candidates.iter().flatten() {
            for id in interp.chain.ancestors().into_iter().chain([interp.id()]) {
                literal.entry(id).or_insert_with(|| {
                    let names: HashSet<String> = g
                        .get(id)
                        .map(|e| e.names().map(term_key).filter(|k| !k.is_empty()).collect())
                        .unwrap_or_default();
                    doc.mentions_of(&names)
                });
            }
        }
        ResolutionContext { doc, gazetteer: g, groups, candidates, literal }
    }

    /// Token positions where the node's names occur verbatim.
    pub fn literal_mentions(&self, node: u64) -> &[usize] {
        self.literal.get(&node).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Mentions of `node` as seen from group `group` under the current
    /// assignment: its own names in the text plus every other group
    /// currently resolved to the node or to something beneath it.
    pub fn evidence(&self, node: u64, group: usize, state: &[Option<usize>]) -> Vec<usize> {
        let mut pos = self.literal_mentions(node).to_vec();
        for (k, choice) in state.iter().enumerate() {
            if k == group {
                continue;
            }
            if let Some(c) = choice {
                if self.candidates[k][*c].chain.contains(node) {
                    pos.extend_from_slice(&self.groups[k].positions);
                }
            }
        }
        pos.sort_unstable();
        pos.dedup();
        pos
    }

    pub(crate) fn result(
        &self,
        group: usize,
        choice: Option<usize>,
        confidence: f64,
        source: Source,
    ) -> ResolvedToponym<'g> {
        let interpretation = choice.map(|c| self.candidates[group][c]);
        ResolvedToponym {
            group: self.groups[group].clone(),
            confidence: if interpretation.is_some() { confidence } else { 0.0 },
            source: if interpretation.is_some() { source } else { Source::Fallback },
            interpretation,
        }
    }
}

/// `1 / min TD` over pairs at distinct positions; 0 when no such pair.
pub fn similarity(a: &[usize], b: &[usize]) -> f64 {
    a.iter()
        .flat_map(|&i| b.iter().map(move |&j| term_distance(i, j)))
        .filter(|&d| d > 0)
        .min()
        .map_or(0.0, |d| 1.0 / d as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResolverKind {
    Preliminary,
    Cbh,
    Shs,
    Chf,
}

impl fmt::Display for ResolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResolverKind::Preliminary => "preliminary",
            ResolverKind::Cbh => "cbh",
            ResolverKind::Shs => "shs",
            ResolverKind::Chf => "chf",
        })
    }
}

impl FromStr for ResolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "preliminary" => Ok(ResolverKind::Preliminary),
            "cbh" => Ok(ResolverKind::Cbh),
            "shs" => Ok(ResolverKind::Shs),
            "chf" => Ok(ResolverKind::Chf),
            other => Err(format!("unknown resolver {other:?} (expected preliminary, cbh, shs or chf)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolveOptions {
    pub resolver: ResolverKind,
    pub chf: ChfConfig,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions { resolver: ResolverKind::Chf, chf: ChfConfig::default() }
    }
}

pub fn resolve_document<'g>(doc: &Document, g: &'g Gazetteer, opts: &ResolveOptions) -> Vec<ResolvedToponym<'g>> {
    match opts.resolver {
        ResolverKind::Preliminary => preliminary_resolve(doc, g),
        ResolverKind::Cbh => resolve_cbh(doc, g, &opts.chf.cbh),
        ResolverKind::Shs => resolve_shs(doc, g),
        ResolverKind::Chf => resolve_chf(doc, g, &opts.chf),
    }
}
