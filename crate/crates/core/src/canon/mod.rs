//! Canonical labeling and automorphism groups of vertex-colored graphs by
//! individualization–refinement.
//!
//! The search tree individualizes vertices of the first largest
//! non-singleton cell and refines to an equitable partition after each step.
//! Each node carries a hash of its refinement trace; the canonical leaf is the
//! one maximizing `(trace hashes along the path, relabeled adjacency)`.
//! Subtrees are pruned by trace comparison and by orbits of the
//! automorphisms found so far that fix the current path pointwise.

pub mod group;
mod partition;

use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

pub use group::Perm;
use group::{orbit_union_find, StabChain, UnionFind};
use partition::{Partition, Refiner};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CanonError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("edge ({0}, {1}) out of range")]
    OutOfRange(u32, u32),
    #[error("{got} colors for {n} vertices")]
    ColorCount { got: usize, n: usize },
    #[error("dimacs line {line}: {reason}")]
    Dimacs { line: usize, reason: String },
}

/// Symmetric adjacency in compressed sparse rows, neighbors sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Adjacency {
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Adjacency, CanonError> {
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a as usize >= n || b as usize >= n {
                return Err(CanonError::OutOfRange(a, b));
            }
            if a == b {
                return Err(CanonError::SelfLoop(a));
            }
            lists[a as usize].push(b);
            lists[b as usize].push(a);
        }
        Ok(Adjacency::from_lists(lists))
    }

    fn from_lists(mut lists: Vec<Vec<u32>>) -> Adjacency {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for l in lists.iter_mut() {
            l.sort_unstable();
            l.dedup();
            targets.extend_from_slice(l);
            offsets.push(targets.len() as u32);
        }
        Adjacency { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }
}

/// A simple undirected graph with a color per vertex. The adjacency is
/// shared, so recoloring a fixed graph is cheap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    adj: Arc<Adjacency>,
    colors: Vec<u32>,
}

impl ColoredGraph {
    pub fn new(n: usize, edges: &[(u32, u32)], colors: Vec<u32>) -> Result<ColoredGraph, CanonError> {
        ColoredGraph::from_adjacency(Arc::new(Adjacency::from_edges(n, edges)?), colors)
    }

    pub fn from_adjacency(adj: Arc<Adjacency>, colors: Vec<u32>) -> Result<ColoredGraph, CanonError> {
        if colors.len() != adj.n() {
            return Err(CanonError::ColorCount { got: colors.len(), n: adj.n() });
        }
        Ok(ColoredGraph { adj, colors })
    }

    /// Same adjacency, new colors.
    pub fn recolored(&self, colors: Vec<u32>) -> ColoredGraph {
        assert_eq!(colors.len(), self.n());
        ColoredGraph { adj: Arc::clone(&self.adj), colors }
    }

    pub fn adjacency(&self) -> &Arc<Adjacency> {
        &self.adj
    }

    pub fn n(&self) -> usize {
        self.adj.n()
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        let (s, e) = (self.adj.offsets[v as usize], self.adj.offsets[v as usize + 1]);
        &self.adj.targets[s as usize..e as usize]
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n() as u32).flat_map(move |a| self.neighbors(a).iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[u32]) -> ColoredGraph {
        let mut lists = vec![Vec::new(); self.n()];
        let mut colors = vec![0; self.n()];
        for v in 0..self.n() as u32 {
            colors[perm[v as usize] as usize] = self.colors[v as usize];
            lists[perm[v as usize] as usize] = self.neighbors(v).iter().map(|&w| perm[w as usize]).collect();
        }
        ColoredGraph { adj: Arc::new(Adjacency::from_lists(lists)), colors }
    }

    /// Whether `perm` preserves adjacency and colors.
    pub fn is_automorphism(&self, perm: &[u32]) -> bool {
        (0..self.n() as u32).all(|v| {
            self.colors[v as usize] == self.colors[perm[v as usize] as usize]
                && self.neighbors(v).len() == self.neighbors(perm[v as usize]).len()
                && self.neighbors(v).iter().all(|&w| self.has_edge(perm[v as usize], perm[w as usize]))
        })
    }

    /// Parse DIMACS-like text: `p edge N M`, `e A B` (1-based), optional
    /// `n V C` vertex colors, `c` comments.
    pub fn from_dimacs(text: &str) -> Result<ColoredGraph, CanonError> {
        let mut n = None;
        let mut edges = vec![];
        let mut colors: Vec<u32> = vec![];
        for (lineno, line) in text.lines().enumerate() {
            let err = |reason: &str| CanonError::Dimacs { line: lineno + 1, reason: reason.to_string() };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |i: usize| -> Result<u32, CanonError> {
                toks.get(i).and_then(|t| t.parse().ok()).ok_or_else(|| err("expected an integer"))
            };
            match toks.first().copied() {
                None | Some("c") => {}
                Some("p") => {
                    let count = num(2)? as usize;
                    n = Some(count);
                    colors = vec![0; count];
                }
                Some("e") => {
                    let count = n.ok_or_else(|| err("edge before problem line"))?;
                    let (a, b) = (num(1)?, num(2)?);
                    if a == 0 || b == 0 || a as usize > count || b as usize > count {
                        return Err(err("vertex out of range"));
                    }
                    edges.push((a - 1, b - 1));
                }
                Some("n") => {
                    let count = n.ok_or_else(|| err("color before problem line"))?;
                    let v = num(1)?;
                    if v == 0 || v as usize > count {
                        return Err(err("vertex out of range"));
                    }
                    colors[v as usize - 1] = num(2)?;
                }
                Some(_) => return Err(err("unknown line type")),
            }
        }
        let n = n.ok_or(CanonError::Dimacs { line: 0, reason: "missing problem line".into() })?;
        ColoredGraph::new(n, &edges, colors)
    }
}

/// Output of the labeling search without the derived byte form and order.
#[derive(Clone, Debug)]
pub struct Labeling {
    /// vertex -> canonical position
    pub labeling: Perm,
    pub generators: Vec<Perm>,
    /// First path of the search tree; a base for the automorphism group.
    pub base: Vec<u32>,
    pub nodes: u64,
}

impl Labeling {
    pub fn orbit_union_find(&self) -> UnionFind {
        orbit_union_find(self.labeling.len(), &self.generators)
    }

    pub fn group_order(&self) -> BigUint {
        StabChain::new(self.labeling.len(), &self.generators, &self.base).order()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonResult {
    /// Vertex count, canonical color sequence, then the upper-triangular
    /// adjacency bitstring of the relabeled graph.
    #[serde(with = "hex_bytes")]
    pub canonical_form: Vec<u8>,
    pub labeling: Perm,
    pub aut_generators: Vec<Perm>,
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub aut_order: BigUint,
}

mod hex_bytes {
    pub fn serialize<S: serde::Serializer>(b: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&hex::encode(b))
    }
}

struct Leaf {
    path: Vec<u32>,
    invs: Vec<u64>,
    cert: Vec<u32>,
    elems: Vec<u32>,
}

struct Search<'g> {
    g: &'g ColoredGraph,
    refiner: Refiner,
    path: Vec<u32>,
    invs: Vec<u64>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Perm>,
    nodes: u64,
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Search<'_> {
    fn certificate(&self, p: &Partition) -> Vec<u32> {
        let mut cert = Vec::with_capacity(self.g.adj.targets.len() + self.g.n());
        let mut row = Vec::new();
        for &v in &p.elems {
            row.clear();
            row.extend(self.g.neighbors(v).iter().map(|&w| p.pos[w as usize]));
            row.sort_unstable();
            cert.push(row.len() as u32);
            cert.extend_from_slice(&row);
        }
        cert
    }

    fn record_automorphism(&mut self, from: &[u32], to: &[u32]) {
        let mut gamma = vec![0; from.len()];
        for (a, b) in from.iter().zip(to) {
            gamma[*a as usize] = *b;
        }
        debug_assert!(self.g.is_automorphism(&gamma));
        self.gens.push(gamma);
    }

    fn leaf(&mut self, p: &Partition) -> Option<usize> {
        let cert = self.certificate(p);
        let Some(first) = &self.first else {
            let leaf = Leaf { path: self.path.clone(), invs: self.invs.clone(), cert, elems: p.elems.clone() };
            self.best = Some(Leaf {
                path: leaf.path.clone(),
                invs: leaf.invs.clone(),
                cert: leaf.cert.clone(),
                elems: leaf.elems.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if first.invs == self.invs && first.cert == cert {
            let level = common_prefix(&self.path, &first.path);
            let from = first.elems.clone();
            self.record_automorphism(&from, &p.elems);
            return Some(level);
        }
        let best = self.best.as_ref().unwrap();
        match (&self.invs, &cert).cmp(&(&best.invs, &best.cert)) {
            std::cmp::Ordering::Equal => {
                let level = common_prefix(&self.path, &best.path);
                let from = best.elems.clone();
                self.record_automorphism(&from, &p.elems);
                Some(level)
            }
            std::cmp::Ordering::Greater => {
                self.best = Some(Leaf { path: self.path.clone(), invs: self.invs.clone(), cert, elems: p.elems.clone() });
                None
            }
            std::cmp::Ordering::Less => None,
        }
    }

    fn prunable(&self) -> bool {
        let (Some(first), Some(best)) = (&self.first, &self.best) else {
            return false;
        };
        let l = self.invs.len();
        let on_first = first.invs.len() >= l && first.invs[..l] == self.invs[..];
        !on_first && self.invs[..] < best.invs[..l.min(best.invs.len())]
    }

    fn explore(&mut self, p: &Partition) -> Option<usize> {
        self.nodes += 1;
        if p.is_discrete() {
            return self.leaf(p);
        }
        let depth = self.path.len();
        let target = p.target_cell().expect("non-discrete partition has a target cell");
        let mut candidates = p.cell_elems(target).to_vec();
        candidates.sort_unstable();
        let mut explored: Vec<u32> = Vec::new();
        let mut uf: Option<(usize, UnionFind)> = None;
        for v in candidates {
            if !explored.is_empty() {
                if uf.as_ref().is_none_or(|(ng, _)| *ng != self.gens.len()) {
                    let fixing = self.gens.iter().filter(|g| self.path.iter().all(|&x| g[x as usize] == x));
                    uf = Some((self.gens.len(), orbit_union_find(p.elems.len(), fixing)));
                }
                let u = &mut uf.as_mut().unwrap().1;
                let rv = u.find(v);
                if explored.iter().any(|&w| u.find(w) == rv) {
                    continue;
                }
            }
            explored.push(v);
            let mut child = p.clone();
            let h = self.refiner.individualize(self.g, &mut child, v);
            self.path.push(v);
            self.invs.push(h);
            let r = if self.prunable() { None } else { self.explore(&child) };
            self.path.pop();
            self.invs.pop();
            if let Some(level) = r {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }
}

/// Canonical labeling, automorphism generators and a base, without building
/// the byte form or the group order.
pub fn canonical_labeling(g: &ColoredGraph) -> Labeling {
    let n = g.n();
    let mut search = Search {
        g,
        refiner: Refiner::new(n),
        path: Vec::new(),
        invs: Vec::new(),
        first: None,
        best: None,
        gens: Vec::new(),
        nodes: 0,
    };
    let mut root = Partition::from_colors(&g.colors);
    let h = search.refiner.refine_all(g, &mut root);
    search.invs.push(h);
    search.explore(&root);
    let best = search.best.expect("search reaches at least one leaf");
    let mut labeling = vec![0; n];
    for (i, &v) in best.elems.iter().enumerate() {
        labeling[v as usize] = i as u32;
    }
    Labeling { labeling, generators: search.gens, base: search.first.unwrap().path, nodes: search.nodes }
}

/// Byte form of `g` relabeled by `labeling` (vertex -> position).
pub fn form_bytes(g: &ColoredGraph, labeling: &[u32]) -> Vec<u8> {
    let n = g.n();
    let mut by_pos = vec![0u32; n];
    for (v, &l) in labeling.iter().enumerate() {
        by_pos[l as usize] = v as u32;
    }
    let mut out = Vec::with_capacity(4 + 4 * n + n * n / 16 + 1);
    out.extend_from_slice(&(n as u32).to_le_bytes());
    for &v in &by_pos {
        out.extend_from_slice(&g.colors[v as usize].to_le_bytes());
    }
    let mut bits = vec![0u8; (n * n.saturating_sub(1) / 2).div_ceil(8)];
    let row_offset = |i: usize| i * (2 * n - i - 1) / 2;
    for (a, b) in g.edges() {
        let (i, j) = {
            let (x, y) = (labeling[a as usize] as usize, labeling[b as usize] as usize);
            if x < y { (x, y) } else { (y, x) }
        };
        let bit = row_offset(i) + (j - i - 1);
        bits[bit / 8] |= 1 << (bit % 8);
    }
    out.extend_from_slice(&bits);
    out
}

pub fn canonical_form(g: &ColoredGraph) -> CanonResult {
    let lab = canonical_labeling(g);
    let aut_order = lab.group_order();
    CanonResult {
        canonical_form: form_bytes(g, &lab.labeling),
        labeling: lab.labeling,
        aut_generators: lab.generators,
        aut_order,
    }
}

/// Automorphism orbits, ordered by minimum vertex.
pub fn orbits(g: &ColoredGraph) -> Vec<Vec<u32>> {
    group::orbits(g.n(), &canonical_labeling(g).generators)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(u32, u32)]) -> ColoredGraph {
        ColoredGraph::new(n, edges, vec![0; n]).unwrap()
    }

    fn cycle(n: u32) -> ColoredGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        graph(n as usize, &edges)
    }

    #[test]
    fn refine_examples() {
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let mut p = Partition::from_colors(k4.colors());
        Refiner::new(4).refine_all(&k4, &mut p);
        assert_eq!(p.cells, 1);

        let p3 = graph(3, &[(0, 1), (1, 2)]);
        let mut p = Partition::from_colors(p3.colors());
        Refiner::new(3).refine_all(&p3, &mut p);
        assert_eq!(p.cells, 2);
        assert_ne!(p.cell[1], p.cell[0]);
        assert_eq!(p.cell[0], p.cell[2]);

        let c4 = cycle(4);
        let mut p = Partition::from_colors(c4.colors());
        let mut r = Refiner::new(4);
        r.refine_all(&c4, &mut p);
        r.individualize(&c4, &mut p, 0);
        // {0}, {2}, {1,3}: one more individualization is needed
        assert_eq!(p.cells, 3);
        r.individualize(&c4, &mut p, 1);
        assert!(p.is_discrete());
    }

    #[test]
    fn triangle_and_cycle_groups() {
        let t = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let c = canonical_form(&t);
        assert_eq!(c.aut_order, BigUint::from(6u32));
        let t2 = t.relabel(&[2, 0, 1]);
        assert_eq!(canonical_form(&t2).canonical_form, c.canonical_form);
        assert_eq!(canonical_form(&cycle(4)).aut_order, BigUint::from(8u32));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbits(&graph(3, &[])), vec![vec![0, 1, 2]]);
        let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(orbits(&star), vec![vec![0], vec![1, 2, 3]]);
    }

    #[test]
    fn generators_are_automorphisms() {
        let pet_outer: Vec<(u32, u32)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let mut edges = pet_outer;
        edges.extend((0..5).map(|i| (i, i + 5)));
        edges.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        let petersen = graph(10, &edges);
        let c = canonical_form(&petersen);
        assert_eq!(c.aut_order, BigUint::from(120u32));
        assert!(c.aut_generators.iter().all(|g| petersen.is_automorphism(g)));
    }

    #[test]
    fn colors_split_orbits() {
        let g = ColoredGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], vec![1, 0, 0, 0]).unwrap();
        let c = canonical_form(&g);
        assert_eq!(c.aut_order, BigUint::from(2u32));
        let h = ColoredGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], vec![0, 0, 1, 0]).unwrap();
        assert_eq!(canonical_form(&h).canonical_form, c.canonical_form);
    }

    #[test]
    fn dimacs_parsing() {
        let g = ColoredGraph::from_dimacs("c square\np edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\nn 1 1\n").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.colors(), &[1, 0, 0, 0]);
        assert!(ColoredGraph::from_dimacs("e 1 2").is_err());
        assert!(ColoredGraph::from_dimacs("p edge 2 1\ne 1 1").is_err());
    }
}
