//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use hjelmslev::arcsearch::{addable_points, arc_graph, is_degenerate, Arc};
use hjelmslev::canon::{canonical_form, ColoredGraph};
use hjelmslev::geometry::Geometry;
use hjelmslev::ring::{Elem, RingTable};
use rand::Rng;

/// Simple graph as an adjacency bitmask per vertex (n <= 32).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Small {
    pub n: usize,
    pub adj: Vec<u32>,
}

impl Small {
    pub fn to_graph(&self) -> ColoredGraph {
        let mut edges = vec![];
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.adj[a] >> b & 1 == 1 {
                    edges.push((a as u32, b as u32));
                }
            }
        }
        ColoredGraph::new(self.n, &edges, vec![0; self.n]).unwrap()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }
}

/// Automorphisms counted by backtracking over partial maps that preserve
/// adjacency and degree.
pub fn brute_force_aut_count(g: &Small) -> u64 {
    fn go(g: &Small, deg: &[u32], map: &mut Vec<usize>, used: &mut u32) -> u64 {
        let v = map.len();
        if v == g.n {
            return 1;
        }
        let mut total = 0;
        for w in 0..g.n {
            if *used >> w & 1 == 1 || deg[v] != deg[w] {
                continue;
            }
            let ok = (0..v).all(|u| (g.adj[v] >> u & 1) == (g.adj[w] >> map[u] & 1));
            if ok {
                map.push(w);
                *used |= 1 << w;
                total += go(g, deg, map, used);
                *used &= !(1 << w);
                map.pop();
            }
        }
        total
    }
    let deg: Vec<u32> = g.adj.iter().map(|m| m.count_ones()).collect();
    go(g, &deg, &mut vec![], &mut 0)
}

/// Lexicographically least adjacency string over all vertex orders.
pub fn brute_force_certificate(g: &Small) -> Vec<bool> {
    let mut best: Option<Vec<bool>> = None;
    let mut perm: Vec<usize> = (0..g.n).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut s = Vec::with_capacity(g.n * g.n);
        for i in 0..g.n {
            for j in i + 1..g.n {
                s.push(g.adj[p[i]] >> p[j] & 1 == 1);
            }
        }
        if best.as_ref().is_none_or(|b| s < *b) {
            best = Some(s);
        }
    });
    best.unwrap()
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// All graphs on `1..=max_n` vertices up to isomorphism, built by adding a
/// vertex with every possible neighborhood to each smaller class and
/// deduplicating by canonical form.
pub fn graph_census(max_n: usize) -> Vec<Vec<Small>> {
    let mut levels = vec![vec![Small { n: 1, adj: vec![0] }]];
    while levels.len() < max_n {
        let prev = levels.last().unwrap();
        let n = prev[0].n + 1;
        let mut seen = HashSet::new();
        let mut next = vec![];
        for g in prev {
            for nb in 0u32..(1 << (n - 1)) {
                let mut adj = g.adj.clone();
                for (v, m) in adj.iter_mut().enumerate() {
                    if nb >> v & 1 == 1 {
                        *m |= 1 << (n - 1);
                    }
                }
                adj.push(nb);
                let h = Small { n, adj };
                if seen.insert(canonical_form(&h.to_graph()).canonical_form) {
                    next.push(h);
                }
            }
        }
        levels.push(next);
    }
    levels
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64, colors: u32) -> ColoredGraph {
    let mut edges = vec![];
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    let cols = (0..n).map(|_| rng.gen_range(0..colors)).collect();
    ColoredGraph::new(n, &edges, cols).unwrap()
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Vec<u32> {
    use rand::seq::SliceRandom;
    let mut p: Vec<u32> = (0..n as u32).collect();
    p.shuffle(rng);
    p
}

/// Chain-ring axioms straight from the tables: ring laws, a unique maximal
/// ideal equal to the non-units, and totally ordered principal left and
/// right ideals.
pub fn check_chain_ring(r: &RingTable) -> Result<(), String> {
    let els: Vec<Elem> = r.elements().collect();
    for &x in &els {
        if r.add(x, 0) != x || r.mul(x, 1) != x || r.mul(1, x) != x || r.add(x, r.neg(x)) != 0 {
            return Err(format!("identity laws fail at {x}"));
        }
        for &y in &els {
            if r.add(x, y) != r.add(y, x) {
                return Err(format!("addition not commutative at {x},{y}"));
            }
            for &z in &els {
                if r.add(r.add(x, y), z) != r.add(x, r.add(y, z)) {
                    return Err("addition not associative".into());
                }
                if r.mul(r.mul(x, y), z) != r.mul(x, r.mul(y, z)) {
                    return Err(format!("multiplication not associative at {x},{y},{z}"));
                }
                if r.mul(x, r.add(y, z)) != r.add(r.mul(x, y), r.mul(x, z))
                    || r.mul(r.add(y, z), x) != r.add(r.mul(y, x), r.mul(z, x))
                {
                    return Err("distributivity fails".into());
                }
            }
        }
    }
    let right_ideal = |x: Elem| -> BTreeSet<Elem> { els.iter().map(|&y| r.mul(x, y)).collect() };
    let left_ideal = |x: Elem| -> BTreeSet<Elem> { els.iter().map(|&y| r.mul(y, x)).collect() };
    for ideal in [&right_ideal as &dyn Fn(Elem) -> BTreeSet<Elem>, &left_ideal] {
        let all: Vec<BTreeSet<Elem>> = els.iter().map(|&x| ideal(x)).collect();
        for a in &all {
            for b in &all {
                if !a.is_subset(b) && !b.is_subset(a) {
                    return Err("principal ideals are not a chain".into());
                }
            }
        }
    }
    let nonunits: BTreeSet<Elem> = els.iter().copied().filter(|&x| !r.is_unit(x)).collect();
    if right_ideal(r.theta) != nonunits || left_ideal(r.theta) != nonunits {
        return Err("theta does not generate the non-units".into());
    }
    for &x in &nonunits {
        for &y in &nonunits {
            if !nonunits.contains(&r.add(x, y)) {
                return Err("non-units not closed under addition".into());
            }
        }
    }
    if r.size != r.q.pow(r.m as u32) || nonunits.len() != r.size / r.q {
        return Err("size is not q^m with |rad| = q^(m-1)".into());
    }
    Ok(())
}

/// Right submodule of `R^len` generated by `vectors`, by closure.
pub fn generated_submodule(r: &RingTable, vectors: &[Vec<Elem>]) -> HashSet<Vec<Elem>> {
    let len = vectors.first().map_or(0, Vec::len);
    let mut set: HashSet<Vec<Elem>> = HashSet::from([vec![0; len]]);
    let mut frontier: Vec<Vec<Elem>> = vec![vec![0; len]];
    while let Some(v) = frontier.pop() {
        for g in vectors {
            for s in r.elements() {
                let w: Vec<Elem> = v.iter().zip(g).map(|(&a, &b)| r.add(a, r.mul(b, s))).collect();
                if set.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
    }
    set
}

pub fn degenerate_by_closure(geom: &Geometry, arc: &Arc) -> bool {
    let vecs: Vec<Vec<Elem>> = arc.support().map(|p| geom.points[p].coords.clone()).collect();
    generated_submodule(&geom.ring, &vecs).len() < geom.ring.size.pow(geom.k as u32 + 1)
}

/// Complete-arc classes by size, found level by level: every class of size
/// `n + 1` is an extension of a class of size `n`, so extending all
/// representatives by every addable point and deduplicating canonically
/// reaches every class.
pub fn levelwise_complete_classes(geom: &Geometry, u: usize) -> BTreeMap<usize, BTreeSet<Vec<u8>>> {
    let form = |arc: &Arc| canonical_form(&arc_graph(geom, arc, u)).canonical_form;
    let mut level = vec![Arc::empty(geom)];
    let mut complete: BTreeMap<usize, BTreeSet<Vec<u8>>> = BTreeMap::new();
    while !level.is_empty() {
        let mut seen = HashSet::new();
        let mut next = vec![];
        for arc in &level {
            let addable = addable_points(geom, arc, u);
            if addable.is_empty() {
                complete.entry(arc.n()).or_default().insert(form(arc));
            }
            for p in addable {
                let mut child = arc.clone();
                child.add_point(geom, p);
                if seen.insert(form(&child)) {
                    next.push(child);
                }
            }
        }
        level = next;
    }
    complete
}

/// Complete `(n, u)`-arcs that are plain point sets, counted by size without
/// any isomorph rejection: backtracking over point ids in increasing order,
/// with completeness decided from the incidence lists.
pub fn labelled_complete_sets(geom: &Geometry, u: u16) -> BTreeMap<usize, u64> {
    struct Walk<'a> {
        geom: &'a Geometry,
        u: u16,
        load: Vec<u16>,
        chosen: Vec<bool>,
        counts: BTreeMap<usize, u64>,
    }
    impl Walk<'_> {
        fn fits(&self, p: usize) -> bool {
            !self.chosen[p] && self.geom.hyps_of_point[p].iter().all(|&h| self.load[h as usize] < self.u)
        }
        fn toggle(&mut self, p: usize, on: bool) {
            self.chosen[p] = on;
            for &h in &self.geom.hyps_of_point[p] {
                if on {
                    self.load[h as usize] += 1;
                } else {
                    self.load[h as usize] -= 1;
                }
            }
        }
        fn go(&mut self, from: usize, size: usize) {
            if (0..self.geom.num_points()).all(|p| !self.fits(p)) {
                *self.counts.entry(size).or_default() += 1;
            }
            for p in from..self.geom.num_points() {
                if self.fits(p) {
                    self.toggle(p, true);
                    self.go(p + 1, size + 1);
                    self.toggle(p, false);
                }
            }
        }
    }
    let mut w = Walk {
        geom,
        u,
        load: vec![0; geom.num_hyperplanes()],
        chosen: vec![false; geom.num_points()],
        counts: BTreeMap::new(),
    };
    w.go(0, 0);
    w.counts
}

pub fn is_degenerate_both(geom: &Geometry, arc: &Arc) -> (bool, bool) {
    (is_degenerate(geom, arc), degenerate_by_closure(geom, arc))
}

/// Unlabelled graph counts for 1..=8 vertices (OEIS A000088).
pub const GRAPH_COUNTS: [usize; 8] = [1, 2, 4, 11, 34, 156, 1044, 12346];

/// Census up to `max_n` vertices: class counts, automorphism orders against
/// backtracking, and the orbit-counting identity sum n!/|Aut| = 2^C(n,2).
pub fn check_graph_census(max_n: usize) -> Result<usize, String> {
    use num_bigint::BigUint;
    let mut checked = 0;
    for (i, level) in graph_census(max_n).iter().enumerate() {
        let n = i + 1;
        if level.len() != GRAPH_COUNTS[i] {
            return Err(format!("{} classes on {n} vertices, expected {}", level.len(), GRAPH_COUNTS[i]));
        }
        let fact: u64 = (1..=n as u64).product();
        let mut labelled = 0u64;
        for g in level {
            let aut = canonical_form(&g.to_graph()).aut_order;
            let brute = brute_force_aut_count(g);
            if aut != BigUint::from(brute) {
                return Err(format!("aut order {aut} vs brute force {brute} for {g:?}"));
            }
            labelled += fact / brute;
            checked += 1;
        }
        if labelled != 1 << (n * (n - 1) / 2) {
            return Err(format!("{labelled} labelled graphs on {n} vertices"));
        }
    }
    Ok(checked)
}

/// Canonical forms and automorphism orders survive random relabelings.
pub fn check_relabel_invariance(seed: u64, graphs: usize, relabelings: usize) -> Result<(), String> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for i in 0..graphs {
        let n = rng.gen_range(1..=40);
        let p = [0.1, 0.3, 0.5, 0.8][i % 4];
        let colors = [1, 1, 2, 3][(i / 4) % 4];
        let g = random_graph(&mut rng, n, p, colors);
        let base = canonical_form(&g);
        for gen in &base.aut_generators {
            if !g.is_automorphism(gen) {
                return Err(format!("graph {i}: generator is not an automorphism"));
            }
        }
        for _ in 0..relabelings {
            let perm = random_perm(&mut rng, n);
            let h = g.relabel(&perm);
            let c = canonical_form(&h);
            if c.canonical_form != base.canonical_form || c.aut_order != base.aut_order {
                return Err(format!("graph {i} ({n} vertices): relabeling changed the canonical form"));
            }
        }
    }
    Ok(())
}

/// Point and hyperplane counts, incidence degrees and neighbor classes of
/// PHG(k, R) against the closed formulas in q, m and k.
pub fn check_geometry_counts(g: &Geometry) -> Result<(), String> {
    let (q, m, k) = (g.ring.q, g.ring.m, g.k);
    let pow = |b: usize, e: usize| b.pow(e as u32);
    let points = pow(q, (m - 1) * k) * (pow(q, k + 1) - 1) / (q - 1);
    let per_hyp = pow(q, (m - 1) * (k - 1)) * (pow(q, k) - 1) / (q - 1);
    let name = format!("PHG({k},{})", g.ring.name);
    if g.num_points() != points || g.num_hyperplanes() != points {
        return Err(format!("{name}: {} points, {} hyperplanes, expected {points}", g.num_points(), g.num_hyperplanes()));
    }
    if !g.points_of_hyp.iter().all(|s| s.len() == per_hyp) || !g.hyps_of_point.iter().all(|s| s.len() == per_hyp) {
        return Err(format!("{name}: incidence degrees differ from {per_hyp}"));
    }
    let classes = g.neighbor_classes();
    if classes.len() != (pow(q, k + 1) - 1) / (q - 1) || !classes.iter().all(|c| c.len() == pow(q, (m - 1) * k)) {
        return Err(format!("{name}: wrong neighbor classes"));
    }
    Ok(())
}
