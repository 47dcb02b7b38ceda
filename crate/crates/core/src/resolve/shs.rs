//! Spatial-hierarchy sets: group every candidate under its nearest
//! ancestor and pick a small conflict-free family of groups.

use std::collections::BTreeMap;

use super::{most_populous, ResolutionContext, ResolvedToponym, Source};
use crate::corpus::Document;
use crate::cover::{greedy_cover, Cover, CoverProblem, HierarchySet, SetNode, WORLD_ROOT};
use crate::gazetteer::Gazetteer;

pub fn generate_sets(doc: &Document, g: &Gazetteer) -> CoverProblem {
    sets_for_context(&ResolutionContext::new(doc, g))
}

/// One set per distinct parent; candidates without any ancestor hang off
/// [`WORLD_ROOT`]. Sets are ordered by root id.
pub fn sets_for_context(ctx: &ResolutionContext<'_, '_>) -> CoverProblem {
    let mut sets: BTreeMap<u64, HierarchySet> = BTreeMap::new();
    for (group, cands) in ctx.groups.iter().zip(&ctx.candidates) {
        for c in cands {
            let root = c.chain.parent().unwrap_or(WORLD_ROOT);
            let set = sets.entry(root).or_insert_with(|| HierarchySet {
                root,
                mentioned: false,
                root_surfaces: vec![],
                root_population: ctx.gazetteer.get(root).map_or(0, |e| e.population),
                weight: 1.0,
                children: vec![],
            });
            set.children.push(SetNode { id: c.id(), surface: group.key.clone(), population: c.entry.population });
        }
    }
    for (group, cands) in ctx.groups.iter().zip(&ctx.candidates) {
        for c in cands {
            if let Some(set) = sets.get_mut(&c.id()) {
                set.mentioned = true;
                set.root_surfaces.push(group.key.clone());
            }
        }
    }
    CoverProblem { universe: ctx.groups.iter().map(|g| g.key.clone()).collect(), sets: sets.into_values().collect() }
}

pub fn resolve_shs<'g>(doc: &Document, g: &'g Gazetteer) -> Vec<ResolvedToponym<'g>> {
    shs_on_context(&ResolutionContext::new(doc, g))
}

pub(crate) fn shs_on_context<'g>(ctx: &ResolutionContext<'_, 'g>) -> Vec<ResolvedToponym<'g>> {
    let problem = sets_for_context(ctx);
    let cover: Cover = greedy_cover(&problem);
    (0..ctx.groups.len())
        .map(|i| {
            let chosen = cover.assignment.get(&ctx.groups[i].key).copied().flatten();
            match chosen.and_then(|(_, id)| ctx.candidates[i].iter().position(|c| c.id() == id)) {
                Some(c) => ctx.result(i, Some(c), 0.0, Source::Shs),
                None => ctx.result(i, most_populous(&ctx.candidates[i]), 0.0, Source::Fallback),
            }
        })
        .collect()
}
