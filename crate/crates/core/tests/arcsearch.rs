mod common;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use hjelmslev::arcsearch::{
    addable_points, arc_graph, canonical_deletion, check_quadrangle, classify, collineations, complete_to_hyperoval,
    hyperoval_census, hyperoval_completions, resume, Arc, Checkpoint, ClassificationResult, SearchError,
    SearchOptions, Status,
};
use hjelmslev::canon::canonical_labeling;
use hjelmslev::geometry::Geometry;
use hjelmslev::ring::{ring, RingName};
use hjelmslev::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn plane(name: RingName) -> Geometry {
    Geometry::build(ring(name), 2).unwrap()
}

fn all_complete(sets_only: bool) -> SearchOptions {
    SearchOptions { keep_all_complete: true, sets_only, ..Default::default() }
}

fn forms_by_size(r: &ClassificationResult) -> BTreeMap<usize, BTreeSet<Vec<u8>>> {
    let mut out: BTreeMap<usize, BTreeSet<Vec<u8>>> = BTreeMap::new();
    for c in r.complete_classes.as_ref().unwrap() {
        out.entry(c.n).or_default().insert(c.canonical_form.clone());
    }
    out
}

#[test]
fn canonical_augmentation_equals_levelwise_dedup() {
    let g = plane(RingName::Z4);
    for u in [2, 3] {
        let r = classify(&g, u, &all_complete(false)).unwrap();
        assert_eq!(r.status, Status::Final);
        assert_eq!(forms_by_size(&r), common::levelwise_complete_classes(&g, u), "u={u}");
        let census: BTreeMap<usize, usize> = r.census.iter().map(|(&n, e)| (n, e.total)).collect();
        let oracle: BTreeMap<usize, usize> =
            common::levelwise_complete_classes(&g, u).into_iter().map(|(n, s)| (n, s.len())).collect();
        assert_eq!(census, oracle);
    }
}

#[test]
fn orbit_stabilizer_accounts_for_every_labelled_arc() {
    // Each class of complete point-set arcs contributes |Coll| / |Aut| labelled
    // arcs; the totals must match plain backtracking.
    for name in [RingName::Z4, RingName::S22] {
        let g = plane(name);
        let coll = collineations(&g).group_order();
        let r = classify(&g, 2, &all_complete(true)).unwrap();
        let mut counted: BTreeMap<usize, u64> = BTreeMap::new();
        for c in r.complete_classes.as_ref().unwrap() {
            let orbit = &coll / &c.aut_order;
            assert_eq!(&orbit * &c.aut_order, coll);
            *counted.entry(c.n).or_default() += u64::try_from(&orbit).unwrap();
        }
        assert_eq!(counted, common::labelled_complete_sets(&g, 2), "{name}");
    }
}

#[test]
fn no_duplicates_closure_and_monotone_validity() {
    for (name, u) in [(RingName::Z4, 3), (RingName::S22, 3), (RingName::Z9, 2), (RingName::Z4, 4)] {
        let g = plane(name);
        let r = classify(&g, u, &all_complete(false)).unwrap();
        let classes = r.complete_classes.as_ref().unwrap();
        let forms: HashSet<&Vec<u8>> = classes.iter().map(|c| &c.canonical_form).collect();
        assert_eq!(forms.len(), classes.len(), "{name} u={u}: duplicate class");
        for c in classes {
            let mut arc = c.arc(&g);
            assert!(c.complete);
            assert!(addable_points(&g, &arc, u).is_empty(), "{name} u={u}: not complete");
            assert_eq!(arc.n(), c.n);
            // walk back to the root along canonical deletions
            while arc.n() > 0 {
                assert!(arc.is_valid(u));
                let lab = canonical_labeling(&arc_graph(&g, &arc, u));
                let p = canonical_deletion(&arc, &lab);
                arc.remove_point(&g, p);
                assert_eq!(arc.loads(), arc.recompute_loads(&g).as_slice());
            }
        }
    }
}

#[test]
fn degeneracy_agrees_with_submodule_closure() {
    let g = plane(RingName::Z4);
    let r = classify(&g, 3, &all_complete(false)).unwrap();
    for c in r.complete_classes.as_ref().unwrap() {
        let (fast, slow) = common::is_degenerate_both(&g, &c.arc(&g));
        assert_eq!(fast, slow);
        assert_eq!(c.degenerate, slow);
    }
    let g = Geometry::build(ring(RingName::H8), 2).unwrap();
    let r = classify(&g, 2, &all_complete(false)).unwrap();
    for c in r.complete_classes.as_ref().unwrap() {
        let (fast, slow) = common::is_degenerate_both(&g, &c.arc(&g));
        assert_eq!(fast, slow);
    }
}

#[test]
fn small_table_cells() {
    // (ring, k, u, m_u, nondegenerate, total)
    let cells = [
        (RingName::Z4, 2, 2, 7, 1, 1),
        (RingName::Z4, 2, 3, 10, 8, 8),
        (RingName::S22, 2, 2, 6, 2, 2),
        (RingName::S32, 2, 2, 9, 4, 4),
        (RingName::Z9, 2, 2, 9, 3, 3),
        (RingName::Z4, 3, 3, 8, 1, 1),
        (RingName::S22, 3, 3, 6, 1, 2),
    ];
    for (name, k, u, m, nd, tot) in cells {
        let g = Geometry::build(ring(name), k).unwrap();
        let r = classify(&g, u, &SearchOptions::default()).unwrap();
        assert_eq!((r.m_u, r.nondegenerate_at_max, r.total_at_max), (Some(m), nd, tot), "{name} k={k} u={u}");
    }
}

#[test]
fn maximal_only_agrees_with_the_full_census() {
    let g = plane(RingName::Z4);
    for u in [3, 4] {
        let full = classify(&g, u, &SearchOptions::default()).unwrap();
        let max = classify(&g, u, &SearchOptions { maximal_only: true, ..Default::default() }).unwrap();
        assert_eq!(full.m_u, max.m_u);
        let a: Vec<_> = full.classes_at_max.iter().map(|c| &c.canonical_form).collect();
        let b: Vec<_> = max.classes_at_max.iter().map(|c| &c.canonical_form).collect();
        assert_eq!(a, b);
        assert!(max.nodes < full.nodes);
    }
}

#[test]
fn sets_only_is_a_restriction() {
    let g = plane(RingName::Z4);
    let multi = classify(&g, 3, &all_complete(false)).unwrap();
    let sets = classify(&g, 3, &all_complete(true)).unwrap();
    for c in sets.complete_classes.as_ref().unwrap() {
        assert!(c.points.iter().all(|p| p.mult == 1));
    }
    assert!(multi.complete_classes.as_ref().unwrap().iter().any(|c| c.points.iter().any(|p| p.mult > 1)));
}

#[test]
fn parallel_runs_are_deterministic() {
    let g = plane(RingName::Z4);
    let one = classify(&g, 4, &SearchOptions { keep_all_complete: true, ..Default::default() }).unwrap();
    for jobs in [2, 4] {
        let opts = SearchOptions { keep_all_complete: true, jobs, ..Default::default() };
        let many = classify(&g, 4, &opts).unwrap();
        let strip = |r: &ClassificationResult| {
            let mut v = serde_json::to_value(r).unwrap();
            v.as_object_mut().unwrap().remove("options");
            v
        };
        assert_eq!(strip(&one), strip(&many));
    }
}

#[test]
fn checkpoint_resume_reproduces_the_direct_run() {
    let g = plane(RingName::Z4);
    let base = SearchOptions { keep_all_complete: false, ..Default::default() };
    let direct = classify(&g, 4, &base).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z4.json");
    let opts = SearchOptions { node_budget: Some(400), ..base.clone() };
    let mut r = classify(&g, 4, &opts).unwrap();
    let mut rounds = 1;
    while r.status == Status::BudgetExhausted {
        r.checkpoint.as_ref().unwrap().save(&path).unwrap();
        let cp = Checkpoint::load(&path).unwrap();
        r = resume(&g, &cp, &opts).unwrap();
        rounds += 1;
        assert!(rounds < 1000);
    }
    assert!(rounds > 2);
    assert_eq!(r.m_u, direct.m_u);
    assert_eq!(r.census, direct.census);
    assert_eq!(r.nodes, direct.nodes);
    let a: Vec<_> = r.classes_at_max.iter().map(|c| &c.canonical_form).collect();
    let b: Vec<_> = direct.classes_at_max.iter().map(|c| &c.canonical_form).collect();
    assert_eq!(a, b);
}

#[test]
fn checkpoint_rejects_other_searches() {
    let g = plane(RingName::Z4);
    let opts = SearchOptions { node_budget: Some(50), ..Default::default() };
    let r = classify(&g, 3, &opts).unwrap();
    let cp = r.checkpoint.unwrap();
    let other = SearchOptions { sets_only: true, ..opts.clone() };
    assert!(matches!(resume(&g, &cp, &other), Err(SearchError::CheckpointMismatch(_))));
    let s22 = plane(RingName::S22);
    assert!(matches!(resume(&s22, &cp, &opts), Err(SearchError::CheckpointMismatch(_))));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"format\":\"something-else\"}").unwrap();
    assert!(Checkpoint::load(&path).is_err());
}

#[test]
fn invalid_u_is_rejected() {
    let g = plane(RingName::Z4);
    assert!(matches!(classify(&g, 1, &SearchOptions::default()), Err(SearchError::InvalidU(1))));
}

#[test]
fn hyperovals_of_z8_do_not_exist() {
    let c = hyperoval_census(&plane(RingName::Z8)).unwrap();
    assert_eq!(c.size, 8 + 4 + 1);
    assert_eq!(c.count, BigUint::from(0u32));
    assert_eq!(c.canonical_forms, 0);
}

#[test]
fn z4_hyperovals() {
    let g = plane(RingName::Z4);
    let c = hyperoval_census(&g).unwrap();
    assert_eq!(c.count, BigUint::from(256u32));
    assert_eq!(c.canonical_forms, 1);
    assert_eq!(c.stabilizer_orders, vec!["168".to_string()]);
    assert_eq!(c.collineation_order, BigUint::from(43008u32));
}

#[test]
fn random_quadrangles_have_unique_completions() {
    let g = plane(RingName::Z4);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let classes = g.neighbor_classes();
    let mut tried = 0;
    while tried < 40 {
        let mut pick: Vec<&Vec<usize>> = classes.iter().collect();
        pick.shuffle(&mut rng);
        let quad: Vec<usize> = pick[..4].iter().map(|c| *c.choose(&mut rng).unwrap()).collect();
        if check_quadrangle(&g, &quad).is_err() {
            continue;
        }
        tried += 1;
        let all = hyperoval_completions(&g, &quad).unwrap();
        assert_eq!(all.len(), 1);
        let h = complete_to_hyperoval(&g, &quad).unwrap();
        assert_eq!(h.n(), 7);
        assert!(h.is_valid(2));
        assert!(quad.iter().all(|&p| h.mult(p) == 1));
    }
}

#[test]
fn quadrangle_preconditions() {
    let g = plane(RingName::Z4);
    let id = |v: &[u8]| g.point_id(v).unwrap();
    // two neighbors
    let bad = [id(&[1, 0, 0]), id(&[1, 2, 0]), id(&[0, 0, 1]), id(&[1, 1, 1])];
    assert!(matches!(check_quadrangle(&g, &bad), Err(SearchError::NotQuadrangle(_))));
    // three collinear classes in the quotient plane
    let bad = [id(&[1, 0, 0]), id(&[0, 1, 0]), id(&[1, 1, 0]), id(&[0, 0, 1])];
    assert!(check_quadrangle(&g, &bad).is_err());
    assert!(check_quadrangle(&g, &bad[..3]).is_err());
    // not a plane
    let g3 = Geometry::build(ring(RingName::Z4), 3).unwrap();
    assert!(matches!(hyperoval_census(&g3), Err(SearchError::NotPlane(3))));
}

#[test]
fn empty_arc_helpers() {
    let g = plane(RingName::Z4);
    let arc = Arc::empty(&g);
    assert_eq!(addable_points(&g, &arc, 2).len(), g.num_points());
    assert_eq!(arc.max_load(), 0);
}
