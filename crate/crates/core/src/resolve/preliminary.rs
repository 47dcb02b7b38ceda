//! Context-free first pass: each interpretation scores the inverse term
//! distance to the nearest mention of each of its ancestors.

use super::{argmax, similarity, ResolutionContext, ResolvedToponym, Source};
use crate::corpus::Document;
use crate::gazetteer::Gazetteer;

pub fn preliminary_resolve<'g>(doc: &Document, g: &'g Gazetteer) -> Vec<ResolvedToponym<'g>> {
    let ctx = ResolutionContext::new(doc, g);
    preliminary_choices(&ctx).into_iter().enumerate().map(|(i, c)| ctx.result(i, c, 0.0, Source::Preliminary)).collect()
}

/// Unnormalized score of candidate `cand` of group `group`.
pub fn preliminary_score(ctx: &ResolutionContext<'_, '_>, group: usize, cand: usize) -> f64 {
    let positions = &ctx.groups[group].positions;
    ctx.candidates[group][cand]
        .chain
        .ancestors()
        .into_iter()
        .map(|node| similarity(ctx.literal_mentions(node), positions))
        .sum()
}

pub(crate) fn preliminary_choices(ctx: &ResolutionContext<'_, '_>) -> Vec<Option<usize>> {
    (0..ctx.groups.len())
        .map(|i| {
            let scores: Vec<f64> = (0..ctx.candidates[i].len()).map(|j| preliminary_score(ctx, i, j)).collect();
            argmax(&ctx.candidates[i], &scores)
        })
        .collect()
}
