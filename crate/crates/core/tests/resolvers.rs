mod common;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use toporesolve::resolve::{cbh_and_shs, fuse, ResolutionContext};
use toporesolve::{
    preliminary_resolve, resolve_cbh, resolve_chf, resolve_shs, CbhConfig, ChfConfig, Division, Gazetteer,
    GazetteerEntry, Source,
};

use common::{chosen, doc, ids};

const WINDSOR_DOC: &str = "Montreal and Laval are far from Windsor, Ontario.";

#[test]
fn preliminary_prefers_populous_readings_without_context() {
    let g = common::gazetteer();
    let d = doc("Toronto London Kingston", &["Toronto", "London", "Kingston"]);
    let res = preliminary_resolve(&d, &g);
    assert_eq!(
        ids(&res),
        vec![("Toronto".into(), Some(6167865)), ("London".into(), Some(2643743)), ("Kingston".into(), Some(3489854))]
    );
    assert!(res.iter().all(|r| r.source == Source::Preliminary));
}

#[test]
fn preliminary_uses_nearby_ancestors() {
    let g = common::gazetteer();
    let d = doc("Edmonton lies in Alberta", &["Edmonton"]);
    assert_eq!(chosen(&preliminary_resolve(&d, &g), "Edmonton"), Some(5946768));
}

#[test]
fn shs_groups_ontario_cities() {
    let g = common::gazetteer();
    let d = doc("Toronto London Kingston", &["Toronto", "London", "Kingston"]);
    let res = resolve_shs(&d, &g);
    assert_eq!(
        ids(&res),
        vec![("Toronto".into(), Some(6167865)), ("London".into(), Some(6058560)), ("Kingston".into(), Some(5992500))]
    );
    assert!(res.iter().all(|r| r.source == Source::Shs));
}

#[test]
fn shs_prefers_world_set_for_countries() {
    let g = common::gazetteer();
    let d = doc("Georgia Turkey", &["Georgia", "Turkey"]);
    let res = resolve_shs(&d, &g);
    assert_eq!(ids(&res), vec![("Georgia".into(), Some(614540)), ("Turkey".into(), Some(298795))]);
}

#[test]
fn cbh_resolves_edmonton_alberta() {
    let g = common::gazetteer();
    let d = doc("Edmonton lies in Alberta", &["Edmonton"]);
    let res = resolve_cbh(&d, &g, &CbhConfig::default());
    assert_eq!(chosen(&res, "Edmonton"), Some(5946768));
    assert_abs_diff_eq!(res[0].confidence, 1.0, epsilon = 1e-12);
}

#[test]
fn chf_corrects_shs_windsor() {
    let g = common::gazetteer();
    let d = doc(WINDSOR_DOC, &["Montreal", "Laval", "Windsor", "Ontario"]);
    let shs = resolve_shs(&d, &g);
    assert_eq!(chosen(&shs, "Windsor"), Some(6182947));
    let cbh = resolve_cbh(&d, &g, &CbhConfig::default());
    let w = cbh.iter().find(|r| r.group.surface == "Windsor").unwrap();
    assert_eq!(w.interpretation.unwrap().id(), 6182962);
    assert_abs_diff_eq!(w.confidence, 0.5874, epsilon = 1e-3);
    let chf = resolve_chf(&d, &g, &ChfConfig::default());
    assert_eq!(chosen(&chf, "Windsor"), Some(6182962));
    assert_eq!(chf.iter().find(|r| r.group.surface == "Windsor").unwrap().source, Source::Cbh);
}

#[test]
fn chf_keeps_shs_below_threshold() {
    let g = common::gazetteer();
    let d = doc("Montreal Windsor", &["Montreal", "Windsor"]);
    let chf = resolve_chf(&d, &g, &ChfConfig::default());
    let w = chf.iter().find(|r| r.group.surface == "Windsor").unwrap();
    assert_eq!(w.source, Source::Shs);
    assert_eq!(w.interpretation.unwrap().id(), 6182947);
}

#[test]
fn p_inh_counts_ancestor_mentions() {
    let g = common::gazetteer();
    let d = doc("Edmonton fans came from Australia while Canada and Canada watched", &["Edmonton"]);
    let ctx = ResolutionContext::new(&d, &g);
    let cands: Vec<u64> = ctx.candidates[0].iter().map(|c| c.id()).collect();
    assert_eq!(cands, vec![2167757, 2650253, 4290779, 5946768]);
    let p = ctx.p_inh(0, Division::Country, &[None]).unwrap();
    let expected = [1.0 / 3.0, 0.0, 0.0, 2.0 / 3.0];
    for (a, b) in p.iter().zip(expected) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
    }
}

#[test]
fn p_inh_uniform_over_shared_ancestor() {
    let g = common::gazetteer();
    let d = doc("Windsor is in Canada", &["Windsor"]);
    let ctx = ResolutionContext::new(&d, &g);
    let cands: Vec<u64> = ctx.candidates[0].iter().map(|c| c.id()).collect();
    assert_eq!(cands, vec![2633858, 6182947, 6182962]);
    assert_eq!(ctx.p_inh(0, Division::Country, &[None]).unwrap(), vec![0.0, 0.5, 0.5]);
}

#[test]
fn p_near_inverse_distance() {
    let g = common::gazetteer();
    let d = doc("Kentucky fans said the trip to the big city London in England", &["London"]);
    let ctx = ResolutionContext::new(&d, &g);
    let cands: Vec<u64> = ctx.candidates[0].iter().map(|c| c.id()).collect();
    assert_eq!(cands, vec![2643743, 4298960, 6058560]);
    let p = ctx.p_near(0, Division::State, &[None]).unwrap();
    let expected = [9.0 / 11.0, 2.0 / 11.0, 0.0];
    for (a, b) in p.iter().zip(expected) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
    }
}

#[test]
fn p_near_single_candidate() {
    let g = common::gazetteer();
    let d = doc("Montreal, Quebec", &["Montreal"]);
    let ctx = ResolutionContext::new(&d, &g);
    assert_eq!(ctx.p_near(0, Division::State, &[None]), Some(vec![1.0]));
    assert_eq!(ctx.p_near(0, Division::County, &[None]), None);
}

#[test]
fn p_cb_undefined_without_context() {
    let g = common::gazetteer();
    let d = doc("Paris", &["Paris"]);
    let ctx = ResolutionContext::new(&d, &g);
    for div in Division::ALL {
        assert_eq!(ctx.p_cb(0, div, &[None]), None);
    }
}

fn place(id: u64, name: &str, code: &str, cc: &str, a1: &str, pop: u64) -> GazetteerEntry {
    GazetteerEntry {
        id,
        name: name.into(),
        ascii_name: name.into(),
        alternate_names: vec![],
        latitude: 0.0,
        longitude: 0.0,
        feature_class: if code.starts_with("PCL") || code.starts_with("ADM") { "A" } else { "P" }.into(),
        feature_code: code.into(),
        country_code: cc.into(),
        admin1_code: a1.into(),
        admin2_code: String::new(),
        population: pop,
        bounding_box: None,
    }
}

/// London and Heathrow each with one British and one American reading and
/// no state-level context, so each group's country hypothesis is driven
/// solely by the other's current choice.
fn heathrow_gazetteer() -> Gazetteer {
    Gazetteer::from_entries(vec![
        place(2635167, "United Kingdom", "PCLI", "GB", "00", 66_488_991),
        place(6252001, "United States", "PCLI", "US", "00", 327_167_434),
        place(2643743, "London", "PPLC", "GB", "", 8_961_989),
        place(4298960, "London", "PPLA2", "US", "", 8_126),
        place(2647216, "Heathrow", "AIRP", "GB", "", 0),
        place(4158476, "Heathrow", "PPL", "US", "", 5_896),
    ])
    .unwrap()
}

fn heathrow_at(iterations: usize) -> Vec<(String, Option<u64>)> {
    let g = heathrow_gazetteer();
    let d = doc("London Heathrow", &["London", "Heathrow"]);
    let cfg = CbhConfig { max_iterations: iterations, ..CbhConfig::default() };
    ids(&resolve_cbh(&d, &g, &cfg))
}

#[test]
fn cbh_oscillation_is_bounded() {
    let start = vec![("London".to_string(), Some(2643743)), ("Heathrow".to_string(), Some(4158476))];
    let swapped = vec![("London".to_string(), Some(4298960)), ("Heathrow".to_string(), Some(2647216))];
    assert_eq!(heathrow_at(0), start);
    assert_eq!(heathrow_at(1), swapped);
    assert_eq!(heathrow_at(2), start);
    assert_eq!(heathrow_at(3), swapped);
    assert_eq!(heathrow_at(2), heathrow_at(2));
}

#[test]
fn cbh_zero_iterations_is_preliminary() {
    let g = common::gazetteer();
    let d = doc(WINDSOR_DOC, &["Montreal", "Laval", "Windsor", "Ontario"]);
    let cfg = CbhConfig { max_iterations: 0, ..CbhConfig::default() };
    assert_eq!(ids(&resolve_cbh(&d, &g, &cfg)), ids(&preliminary_resolve(&d, &g)));
}

#[test]
fn fuse_threshold_extremes() {
    let g = common::gazetteer();
    let d = doc(WINDSOR_DOC, &["Montreal", "Laval", "Windsor", "Ontario"]);
    let (cbh, shs) = cbh_and_shs(&d, &g, &CbhConfig::default());
    assert_eq!(ids(&fuse(&cbh, &shs, 1.0)), ids(&shs));
    let low = fuse(&cbh, &shs, -1.0);
    for (f, c) in low.iter().zip(&cbh) {
        if c.interpretation.is_some() {
            assert_eq!(f.interpretation.map(|i| i.id()), c.interpretation.map(|i| i.id()));
        }
    }
}

const SURFACES: &[&str] = &[
    "Edmonton",
    "Toronto",
    "London",
    "Kingston",
    "Windsor",
    "Paris",
    "Ontario",
    "Alberta",
    "Canada",
    "Georgia",
    "Turkey",
    "Laval",
    "Montreal",
    "Heathrow",
    "Texas",
    "Melbourne",
    "Birmingham",
    "Australia",
    "France",
    "England",
];
const FILLER: &[&str] = &["the", "near", "and", "of", "in", "team", "city"];

fn arb_doc() -> impl Strategy<Value = (String, Vec<&'static str>)> {
    prop::collection::vec(
        prop_oneof![prop::sample::select(SURFACES).prop_map(Some), prop::sample::select(FILLER).prop_map(|_| None)],
        1..14,
    )
    .prop_flat_map(|picks| {
        let words: Vec<&'static str> = picks.iter().map(|p| p.unwrap_or("in")).collect();
        let text = words.join(" ");
        let mut surfaces: Vec<&'static str> = picks.into_iter().flatten().collect();
        surfaces.sort_unstable();
        surfaces.dedup();
        (Just(text), Just(surfaces))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn one_sense_per_referent((text, surfaces) in arb_doc()) {
        let g = common::gazetteer();
        let d = doc(&text, &surfaces);
        let groups = d.mention_groups();
        let mut keys: Vec<&str> = groups.iter().map(|g| g.key.as_str()).collect();
        keys.sort_unstable();
        keys.dedup();
        prop_assert_eq!(keys.len(), groups.len());
        for res in [resolve_cbh(&d, &g, &CbhConfig::default()), resolve_shs(&d, &g), resolve_chf(&d, &g, &ChfConfig::default())] {
            prop_assert_eq!(res.len(), groups.len());
            let covered: usize = res.iter().map(|r| r.group.mentions.len()).sum();
            prop_assert_eq!(covered, d.toponyms.len());
        }
    }

    #[test]
    fn resolvers_are_deterministic((text, surfaces) in arb_doc()) {
        let g = common::gazetteer();
        let d = doc(&text, &surfaces);
        let a = resolve_chf(&d, &g, &ChfConfig::default());
        let b = resolve_chf(&d, &g, &ChfConfig::default());
        prop_assert_eq!(ids(&a), ids(&b));
        let ca: Vec<f64> = a.iter().map(|r| r.confidence).collect();
        let cb: Vec<f64> = b.iter().map(|r| r.confidence).collect();
        prop_assert_eq!(ca, cb);
    }

    #[test]
    fn gazetteer_order_does_not_matter((text, surfaces) in arb_doc(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let g = common::gazetteer();
        let mut entries: Vec<GazetteerEntry> = g.entries().into_iter().cloned().collect();
        entries.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let shuffled = Gazetteer::from_entries(entries).unwrap();
        let d = doc(&text, &surfaces);
        prop_assert_eq!(ids(&resolve_chf(&d, &g, &ChfConfig::default())), ids(&resolve_chf(&d, &shuffled, &ChfConfig::default())));
        prop_assert_eq!(ids(&resolve_shs(&d, &g)), ids(&resolve_shs(&d, &shuffled)));
    }

    #[test]
    fn cbh_probabilities_are_distributions((text, surfaces) in arb_doc()) {
        let g = common::gazetteer();
        let d = doc(&text, &surfaces);
        let ctx = ResolutionContext::new(&d, &g);
        let state = vec![None; ctx.groups.len()];
        for i in 0..ctx.groups.len() {
            for div in Division::ALL {
                for p in [ctx.p_inh(i, div, &state), ctx.p_near(i, div, &state), ctx.p_cb(i, div, &state)].into_iter().flatten() {
                    prop_assert_eq!(p.len(), ctx.candidates[i].len());
                    prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                    prop_assert!(p.iter().all(|x| (0.0..=1.0 + 1e-12).contains(x)));
                }
            }
        }
    }

    #[test]
    fn chf_takes_each_group_from_its_source((text, surfaces) in arb_doc(), tau in 0.0f64..=1.0) {
        let g = common::gazetteer();
        let d = doc(&text, &surfaces);
        let (cbh, shs) = cbh_and_shs(&d, &g, &CbhConfig::default());
        let chf = fuse(&cbh, &shs, tau);
        for ((f, c), s) in chf.iter().zip(&cbh).zip(&shs) {
            let pick = |r: &toporesolve::ResolvedToponym| r.interpretation.map(|i| i.id());
            if c.confidence > tau {
                prop_assert_eq!(pick(f), pick(c));
            } else {
                prop_assert_eq!(pick(f), pick(s));
            }
        }
        let cfg = ChfConfig { tau, ..ChfConfig::default() };
        prop_assert_eq!(ids(&resolve_chf(&d, &g, &cfg)), ids(&chf));
    }
}
