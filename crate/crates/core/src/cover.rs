//! Conflict-free set cover over spatial-hierarchy sets.
//!
//! Each set is a parent node with the candidate interpretations beneath it.
//! A set covers a surface when it holds a mentioned node for that surface;
//! a cover is conflict-free when no surface is covered by two chosen sets.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Root id of the synthetic set holding interpretations without ancestors.
pub const WORLD_ROOT: u64 = 0;

pub const DEFAULT_ORACLE_LIMIT: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum CoverError {
    #[error("instance has {sets} sets; exhaustive search is limited to {limit}")]
    TooLarge { sets: usize, limit: usize },
}

/// A child interpretation inside a hierarchy set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetNode {
    pub id: u64,
    /// Normalized surface this node resolves.
    pub surface: String,
    pub population: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchySet {
    pub root: u64,
    /// The root itself is an interpretation of some surface in the document.
    pub mentioned: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub root_surfaces: Vec<String>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub root_population: u64,
    #[serde(default = "unit_weight")]
    pub weight: f64,
    pub children: Vec<SetNode>,
}

fn is_zero(v: &u64) -> bool {
    *v == 0
}

fn unit_weight() -> f64 {
    1.0
}

impl HierarchySet {
    /// Surfaces this set can resolve.
    pub fn surfaces(&self) -> BTreeSet<&str> {
        let roots = self.root_surfaces.iter().filter(|_| self.mentioned);
        self.children.iter().map(|c| &c.surface).chain(roots).map(String::as_str).collect()
    }

    /// Sum of populations over distinct mentioned nodes.
    pub fn total_population(&self) -> u64 {
        let mut seen = BTreeMap::new();
        for c in &self.children {
            seen.insert(c.id, c.population);
        }
        if self.mentioned {
            seen.insert(self.root, self.root_population);
        }
        seen.values().sum()
    }

    /// Best node for `surface` in this set: population desc, then id asc.
    pub fn node_for(&self, surface: &str) -> Option<u64> {
        let roots = self
            .root_surfaces
            .iter()
            .filter(|s| self.mentioned && s.as_str() == surface)
            .map(|_| (self.root, self.root_population));
        self.children
            .iter()
            .filter(|c| c.surface == surface)
            .map(|c| (c.id, c.population))
            .chain(roots)
            .min_by_key(|&(id, pop)| (std::cmp::Reverse(pop), id))
            .map(|(id, _)| id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverProblem {
    pub universe: Vec<String>,
    pub sets: Vec<HierarchySet>,
}

impl CoverProblem {
    /// Surface -> (set index, node id) for every node able to resolve it.
    pub fn color_classes(&self) -> BTreeMap<&str, Vec<(usize, u64)>> {
        let mut classes: BTreeMap<&str, Vec<(usize, u64)>> =
            self.universe.iter().map(|u| (u.as_str(), Vec::new())).collect();
        for (i, s) in self.sets.iter().enumerate() {
            for c in &s.children {
                classes.entry(c.surface.as_str()).or_default().push((i, c.id));
            }
            if s.mentioned {
                for r in &s.root_surfaces {
                    classes.entry(r.as_str()).or_default().push((i, s.root));
                }
            }
        }
        classes
    }

    fn assignment_for(&self, chosen: &[usize]) -> BTreeMap<String, Option<(usize, u64)>> {
        let mut out: BTreeMap<String, Option<(usize, u64)>> = self.universe.iter().map(|u| (u.clone(), None)).collect();
        for &i in chosen {
            for s in self.sets[i].surfaces() {
                out.insert(s.to_string(), self.sets[i].node_for(s).map(|id| (i, id)));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    pub chosen: Vec<usize>,
    pub assignment: BTreeMap<String, Option<(usize, u64)>>,
}

impl Cover {
    pub fn covered(&self) -> usize {
        self.assignment.values().filter(|a| a.is_some()).count()
    }

    /// No surface is covered by more than one chosen set.
    pub fn is_conflict_free(&self, p: &CoverProblem) -> bool {
        let mut seen = BTreeSet::new();
        self.chosen.iter().all(|&i| p.sets[i].surfaces().into_iter().all(|s| seen.insert(s)))
    }
}

/// Greedy selection: repeatedly take the admissible set covering the most
/// uncovered surfaces per unit weight, preferring the more populated set
/// and then the smaller root id.
pub fn greedy_cover(p: &CoverProblem) -> Cover {
    let surfaces: Vec<BTreeSet<&str>> = p.sets.iter().map(HierarchySet::surfaces).collect();
    let population: Vec<u64> = p.sets.iter().map(HierarchySet::total_population).collect();
    let mut covered: BTreeSet<&str> = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    loop {
        let mut best: Option<(usize, f64)> = None;
        for (i, s) in surfaces.iter().enumerate() {
            if chosen.contains(&i) || s.is_empty() || s.iter().any(|x| covered.contains(x)) {
                continue;
            }
            let w = p.sets[i].weight;
            let ratio = if w > 0.0 { s.len() as f64 / w } else { f64::INFINITY };
            let better = match best {
                None => true,
                Some((_, rb)) if ratio != rb => ratio > rb,
                Some((b, _)) => {
                    (population[i], std::cmp::Reverse(p.sets[i].root))
                        > (population[b], std::cmp::Reverse(p.sets[b].root))
                }
            };
            if better {
                best = Some((i, ratio));
            }
        }
        match best {
            Some((i, _)) => {
                covered.extend(surfaces[i].iter().copied());
                chosen.push(i);
            }
            None => break,
        }
    }
    Cover { assignment: p.assignment_for(&chosen), chosen }
}

/// Exhaustive search. Maximizes covered surfaces, then minimizes total
/// weight, then maximizes population, then prefers the lexicographically
/// smallest index list.
pub fn brute_force_cover(p: &CoverProblem, limit: usize) -> Result<Cover, CoverError> {
    let n = p.sets.len();
    if n > limit || n >= usize::BITS as usize {
        return Err(CoverError::TooLarge { sets: n, limit });
    }
    let surfaces: Vec<BTreeSet<&str>> = p.sets.iter().map(HierarchySet::surfaces).collect();
    let population: Vec<u64> = p.sets.iter().map(HierarchySet::total_population).collect();

    type Key = (usize, f64, u64, Vec<usize>);
    let mut best: Option<Key> = None;
    'subsets: for mask in 0usize..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mut seen = BTreeSet::new();
        for &i in &idx {
            for s in &surfaces[i] {
                if !seen.insert(*s) {
                    continue 'subsets;
                }
            }
        }
        let weight: f64 = idx.iter().map(|&i| p.sets[i].weight).sum();
        let pop: u64 = idx.iter().map(|&i| population[i]).sum();
        let cand = (seen.len(), weight, pop, idx);
        let better = match &best {
            None => true,
            Some((c, w, pp, ix)) => {
                if cand.0 != *c {
                    cand.0 > *c
                } else if cand.1 != *w {
                    cand.1 < *w
                } else if cand.2 != *pp {
                    cand.2 > *pp
                } else {
                    cand.3 < *ix
                }
            }
        };
        if better {
            best = Some(cand);
        }
    }
    let chosen = best.map(|b| b.3).unwrap_or_default();
    Ok(Cover { assignment: p.assignment_for(&chosen), chosen })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn set(root: u64, pop: u64, surfaces: &[&str]) -> HierarchySet {
        HierarchySet {
            root,
            mentioned: false,
            root_surfaces: vec![],
            root_population: 0,
            weight: 1.0,
            children: surfaces
                .iter()
                .enumerate()
                .map(|(k, s)| SetNode { id: root * 100 + k as u64, surface: s.to_string(), population: pop })
                .collect(),
        }
    }

    pub(crate) fn problem(sets: Vec<HierarchySet>) -> CoverProblem {
        let universe: BTreeSet<String> = sets.iter().flat_map(|s| s.surfaces()).map(String::from).collect();
        CoverProblem { universe: universe.into_iter().collect(), sets }
    }

    /// Optimum is {A, B}; greedy grabs the 4-surface trap C first and then
    /// needs two singletons.
    pub(crate) fn greedy_trap() -> CoverProblem {
        problem(vec![
            set(1, 10, &["a", "b", "c"]),
            set(2, 10, &["d", "e", "f"]),
            set(3, 10, &["a", "b", "d", "e"]),
            set(4, 10, &["c"]),
            set(5, 10, &["f"]),
            set(6, 10, &["a"]),
        ])
    }

    #[test]
    fn trap_greedy_uses_extra_set() {
        let p = greedy_trap();
        let g = greedy_cover(&p);
        assert_eq!(g.chosen, vec![2, 3, 4]);
        assert_eq!(g.covered(), 6);
        let o = brute_force_cover(&p, DEFAULT_ORACLE_LIMIT).unwrap();
        assert_eq!(o.chosen, vec![0, 1]);
        assert_eq!(o.covered(), 6);
        assert!(g.is_conflict_free(&p) && o.is_conflict_free(&p));
    }

    #[test]
    fn single_set_instance() {
        let p = problem(vec![set(9, 1, &["x", "y"])]);
        assert_eq!(greedy_cover(&p).chosen, vec![0]);
        assert_eq!(brute_force_cover(&p, 16).unwrap().chosen, vec![0]);
    }

    #[test]
    fn population_breaks_coverage_ties() {
        let p = problem(vec![set(1, 5, &["georgia", "turkey"]), set(2, 500, &["georgia", "turkey"])]);
        let g = greedy_cover(&p);
        assert_eq!(g.chosen, vec![1]);
        assert_eq!(g.assignment["georgia"], Some((1, 200)));
    }

    #[test]
    fn root_id_breaks_remaining_ties() {
        let p = problem(vec![set(7, 5, &["a"]), set(3, 5, &["a"])]);
        assert_eq!(greedy_cover(&p).chosen, vec![1]);
    }

    #[test]
    fn conflicting_sets_are_inadmissible() {
        let p = problem(vec![set(1, 9, &["a", "b"]), set(2, 1, &["b", "c"]), set(3, 1, &["c"])]);
        let g = greedy_cover(&p);
        assert_eq!(g.chosen, vec![0, 2]);
        assert!(g.is_conflict_free(&p));
    }

    #[test]
    fn uncoverable_surface_stays_unassigned() {
        let mut p = problem(vec![set(1, 1, &["a"])]);
        p.universe.push("zzz".into());
        let g = greedy_cover(&p);
        assert_eq!(g.assignment["zzz"], None);
        assert_eq!(g.covered(), 1);
    }

    #[test]
    fn oracle_refuses_large_instances() {
        let p = problem((1..=17).map(|i| set(i, 1, &["a"])).collect());
        assert_eq!(brute_force_cover(&p, 16), Err(CoverError::TooLarge { sets: 17, limit: 16 }));
    }

    #[test]
    fn greedy_coverage_is_not_a_subset_of_oracle_coverage() {
        // Greedy takes {x,y,z}; the 4-surface optimum {y,p} + {z,q} leaves x out.
        let p = problem(vec![
            set(1, 1000, &["x", "y", "z"]),
            set(2, 1, &["y", "p"]),
            set(3, 1, &["z", "q"]),
            set(4, 1, &["x", "p", "q"]),
        ]);
        let g = greedy_cover(&p);
        let o = brute_force_cover(&p, 16).unwrap();
        assert_eq!(g.covered(), 3);
        assert_eq!(o.covered(), 4);
        assert!(g.assignment["x"].is_some() && o.assignment["x"].is_none());
    }

    #[test]
    fn greedy_can_trail_oracle_by_two() {
        let p =
            problem(vec![set(1, 1, &["a", "b", "c", "d"]), set(2, 1, &["a", "b", "e"]), set(3, 1, &["c", "d", "f"])]);
        assert_eq!(greedy_cover(&p).covered(), 4);
        assert_eq!(brute_force_cover(&p, 16).unwrap().covered(), 6);
    }

    #[test]
    fn mentioned_root_covers_its_surface() {
        let mut s = set(5, 10, &["windsor"]);
        s.mentioned = true;
        s.root_surfaces = vec!["ontario".into()];
        s.root_population = 1000;
        assert_eq!(s.surfaces().into_iter().collect::<Vec<_>>(), vec!["ontario", "windsor"]);
        assert_eq!(s.total_population(), 1010);
        assert_eq!(s.node_for("ontario"), Some(5));
    }

    #[test]
    fn json_shape() {
        let mut p = problem(vec![set(4, 2, &["a"])]);
        p.sets[0].mentioned = true;
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"{"universe":["a"],"sets":[{"root":4,"mentioned":true,"weight":1.0,"children":[{"id":400,"surface":"a","population":2}]}]}"#
        );
        let minimal = r#"{"universe":["a"],"sets":[{"root":4,"mentioned":false,"children":[{"id":400,"surface":"a","population":2}]}]}"#;
        let back: CoverProblem = serde_json::from_str(minimal).unwrap();
        assert_eq!(back.sets[0].weight, 1.0);
    }
}
