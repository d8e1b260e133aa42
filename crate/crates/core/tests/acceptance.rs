//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use hjelmslev::appendix::verify_all;
use hjelmslev::arcsearch::{addable_points, classify, SearchOptions, Status};
use hjelmslev::codes::{gray_map, hom_weight};
use hjelmslev::geometry::Geometry;
use hjelmslev::ring::{ring, RingName};
use hjelmslev::table1::{self, Verdict};
use hjelmslev::prop7;

type Outcome = Result<String, String>;

fn appendix() -> Outcome {
    let outcomes = verify_all();
    let mut bad = vec![];
    for o in &outcomes {
        for c in o.mismatches() {
            bad.push(format!("{}: {} expected {} got {}", o.title, c.field, c.expected, c.actual));
        }
    }
    if outcomes.len() != 13 {
        bad.push(format!("{} entries instead of 13", outcomes.len()));
    }
    if bad.is_empty() {
        let checks: usize = outcomes.iter().map(|o| o.checks.len()).sum();
        Ok(format!("13 arcs, {checks} exact checks"))
    } else {
        Err(bad.join("; "))
    }
}

fn desk_table() -> Outcome {
    let wanted = [
        (RingName::Z4, 2, 2),
        (RingName::Z4, 2, 3),
        (RingName::Z4, 2, 4),
        (RingName::Z4, 2, 5),
        (RingName::Z4, 2, 6),
        (RingName::S22, 2, 2),
        (RingName::Z9, 2, 2),
        (RingName::S32, 2, 2),
        (RingName::Z8, 2, 2),
        (RingName::Z4, 3, 3),
        (RingName::S22, 3, 3),
    ];
    let cells: Vec<_> =
        table1::cells().into_iter().filter(|c| wanted.contains(&(c.ring, c.k, c.u))).collect();
    if cells.len() != wanted.len() {
        return Err("cells missing from the embedded table".into());
    }
    let cfg = table1::RunConfig { jobs: 1, cell_budget: None, checkpoint_dir: None };
    let outcomes = table1::run(&cells, &cfg, |_| {}).map_err(|e| e.to_string())?;
    let bad: Vec<String> = outcomes.iter().filter(|o| o.verdict != Verdict::Match).map(|o| o.diff()).collect();
    if bad.is_empty() {
        let summary: Vec<String> =
            outcomes.iter().map(|o| format!("{}/{}/u{}={}", o.ring, o.k, o.u, o.expected)).collect();
        Ok(summary.join(" "))
    } else {
        Err(bad.join("; "))
    }
}

fn proposition() -> Outcome {
    let report = prop7::run().map_err(|e| e.to_string())?;
    let bad: Vec<String> =
        report.checks.iter().filter(|c| !c.ok).map(|c| format!("{} expected {} got {}", c.field, c.expected, c.actual)).collect();
    if bad.is_empty() {
        Ok(format!("{} checks: 256 hyperovals, 1 class, stabilizer 168, |Coll| 43008, regular normal H of order 256", report.checks.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn search_properties() -> Outcome {
    let z4 = Geometry::build(ring(RingName::Z4), 2).unwrap();
    for u in [2, 3] {
        let opts = SearchOptions { keep_all_complete: true, ..Default::default() };
        let r = classify(&z4, u, &opts).map_err(|e| e.to_string())?;
        let mut got: BTreeMap<usize, std::collections::BTreeSet<Vec<u8>>> = BTreeMap::new();
        for c in r.complete_classes.as_ref().unwrap() {
            got.entry(c.n).or_default().insert(c.canonical_form.clone());
        }
        if got != common::levelwise_complete_classes(&z4, u) {
            return Err(format!("(Z4,2,u={u}) differs from brute-force dedup"));
        }
    }
    let runs = [(RingName::Z4, 2, 4), (RingName::S22, 2, 3), (RingName::Z9, 2, 2), (RingName::Z4, 3, 3), (RingName::H8, 2, 2)];
    let mut classes = 0;
    for (name, k, u) in runs {
        let g = Geometry::build(ring(name), k).unwrap();
        let opts = SearchOptions { keep_all_complete: true, ..Default::default() };
        let r = classify(&g, u, &opts).map_err(|e| e.to_string())?;
        if r.status != Status::Final {
            return Err(format!("({name},{k},{u}) did not finish"));
        }
        let all = r.complete_classes.as_ref().unwrap();
        let forms: HashSet<&Vec<u8>> = all.iter().map(|c| &c.canonical_form).collect();
        if forms.len() != all.len() {
            return Err(format!("({name},{k},{u}) emitted a duplicate class"));
        }
        if let Some(c) = all.iter().find(|c| !addable_points(&g, &c.arc(&g), u).is_empty()) {
            return Err(format!("({name},{k},{u}) emitted an incomplete {}-arc", c.n));
        }
        classes += all.len();
    }
    let long = table1::cells().iter().filter(|c| c.scope == table1::Scope::All).count();
    Ok(format!(
        "brute-force dedup equal on (Z4,2,u<=3); {classes} classes without duplicates, all complete; {long} long cells left to `table1 --scope all`"
    ))
}

fn kernel() -> Outcome {
    for &name in &RingName::ALL {
        common::check_chain_ring(&ring(name)).map_err(|e| format!("{name}: {e}"))?;
    }
    for &name in &RingName::ALL {
        for k in 1..=3 {
            let g = Geometry::build(ring(name), k).map_err(|e| e.to_string())?;
            common::check_geometry_counts(&g)?;
        }
    }
    common::check_relabel_invariance(2024, 1000, 20)?;
    let graphs = common::check_graph_census(8)?;
    for &name in &RingName::ALL {
        let r = ring(name);
        let scale = (r.q as u64).pow(r.m as u32 - 2);
        for x in r.elements() {
            for y in r.elements() {
                let (a, b) = (gray_map(&r, x), gray_map(&r, y));
                let d = a.iter().zip(&b).filter(|&(&s, &t)| s != t).count() as u64;
                if d != scale * hom_weight(&r, r.sub(x, y)) {
                    return Err(format!("{name}: Gray isometry fails at ({x},{y})"));
                }
            }
        }
    }
    Ok(format!(
        "15 rings, 45 geometries, 1000 graphs x 20 relabelings, {graphs} graphs on <= 8 vertices, Gray isometry on 15 rings"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 5] = [
        ("appendix verification", appendix),
        ("Table 1 at desk scale", desk_table),
        ("hyperovals of PHG(2,Z4)", proposition),
        ("search properties for long cells", search_properties),
        ("kernel properties", kernel),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {}: {title} ({secs:.1}s) {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {title} ({secs:.1}s) {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
