//! Isomorph-free generation of complete arcs by canonical augmentation.
//!
//! Children of an arc `K` are `K + P` for one `P` per `Aut(K)`-orbit of
//! addable points. A child `K'` is accepted iff `P` lies in the
//! `Aut(K')`-orbit of the canonical deletion point: the point of nonzero
//! multiplicity with the smallest canonical label in `arc_graph(K')`.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::arc::{addable_points, arc_graph, is_degenerate, Arc, PointMult};
use super::checkpoint::Checkpoint;
use super::SearchError;
use crate::canon::{canonical_labeling, form_bytes, Labeling};
use crate::geometry::Geometry;
use crate::ring::RingName;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Restrict multiplicities to at most 1.
    pub sets_only: bool,
    /// Prune subtrees that cannot reach this size. Loses smaller complete classes.
    pub min_size: usize,
    /// Branch and bound: the threshold rises to the largest complete arc found.
    pub maximal_only: bool,
    pub jobs: usize,
    /// Depth at which the tree is cut into independent subtree tasks.
    pub split_depth: usize,
    pub node_budget: Option<u64>,
    #[serde(skip)]
    pub time_budget: Option<Duration>,
    /// Keep every complete class, not only those of maximum size.
    pub keep_all_complete: bool,
    /// Random greedy completions used to seed the threshold in maximal-only mode.
    pub greedy_trials: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            sets_only: false,
            min_size: 0,
            maximal_only: false,
            jobs: 1,
            split_depth: 3,
            node_budget: None,
            time_budget: None,
            keep_all_complete: false,
            greedy_trials: 64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Final,
    BudgetExhausted,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub nondegenerate: usize,
    pub total: usize,
}

/// One equivalence class of arcs.
#[derive(Clone, Debug, Serialize)]
pub struct ArcClass {
    pub n: usize,
    pub points: Vec<PointMult>,
    /// Point literals, multiplicity appended as `*m` when above 1.
    pub coordinates: Vec<String>,
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub aut_order: BigUint,
    pub complete: bool,
    pub degenerate: bool,
    #[serde(serialize_with = "crate::report::hex_string")]
    pub canonical_form: Vec<u8>,
}

impl ArcClass {
    pub fn new(geom: &Geometry, arc: &Arc, u: usize, lab: &Labeling, complete: bool) -> ArcClass {
        let graph = arc_graph(geom, arc, u);
        ArcClass {
            n: arc.n(),
            points: arc.points(),
            coordinates: arc
                .points()
                .iter()
                .map(|pm| {
                    let lit = geom.format_point(pm.point);
                    if pm.mult > 1 { format!("{lit}*{}", pm.mult) } else { lit }
                })
                .collect(),
            aut_order: lab.group_order(),
            complete,
            degenerate: is_degenerate(geom, arc),
            canonical_form: form_bytes(&graph, &lab.labeling),
        }
    }

    pub fn arc(&self, geom: &Geometry) -> Arc {
        Arc::from_points(geom, &self.points)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationResult {
    pub ring: RingName,
    pub k: usize,
    pub u: usize,
    pub options: SearchOptions,
    /// Largest complete arc found.
    pub m_u: Option<usize>,
    pub nondegenerate_at_max: usize,
    pub total_at_max: usize,
    pub classes_at_max: Vec<ArcClass>,
    /// Complete classes by size; exhaustive only without pruning.
    pub census: BTreeMap<usize, CensusEntry>,
    pub census_exhaustive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complete_classes: Option<Vec<ArcClass>>,
    pub nodes: u64,
    pub status: Status,
    #[serde(skip)]
    pub checkpoint: Option<Checkpoint>,
}

pub(crate) struct Node {
    pub arc: Arc,
    pub lab: Labeling,
}

#[derive(Default)]
pub(crate) struct Found {
    pub census: BTreeMap<usize, CensusEntry>,
    /// Complete classes at the largest size seen (or all, when requested).
    pub classes: Vec<ArcClass>,
}

impl Found {
    fn merge(&mut self, other: Found, keep_all: bool) {
        for (n, e) in other.census {
            let slot = self.census.entry(n).or_default();
            slot.nondegenerate += e.nondegenerate;
            slot.total += e.total;
        }
        self.classes.extend(other.classes);
        if !keep_all {
            self.trim();
        }
    }

    fn trim(&mut self) {
        if let Some(max) = self.classes.iter().map(|c| c.n).max() {
            self.classes.retain(|c| c.n == max);
        }
    }
}

struct Aborted;

pub(crate) struct Engine<'a> {
    geom: &'a Geometry,
    u: usize,
    opts: &'a SearchOptions,
    hyps_per_point: usize,
    min_common: usize,
    threshold: AtomicUsize,
    nodes: AtomicU64,
    /// Node count carried over from a checkpoint; budgets apply to the rest.
    start_nodes: u64,
    stop: AtomicBool,
    deadline: Option<Instant>,
}

impl<'a> Engine<'a> {
    pub fn new(geom: &'a Geometry, u: usize, opts: &'a SearchOptions, threshold: usize, nodes: u64) -> Engine<'a> {
        Engine {
            geom,
            u,
            opts,
            hyps_per_point: geom.hyperplanes_per_point(),
            min_common: geom.min_common_hyperplanes().max(1),
            threshold: AtomicUsize::new(threshold),
            nodes: AtomicU64::new(nodes),
            start_nodes: nodes,
            stop: AtomicBool::new(false),
            deadline: opts.time_budget.map(|d| Instant::now() + d),
        }
    }

    pub fn node(&self, arc: Arc) -> Node {
        let lab = canonical_labeling(&arc_graph(self.geom, &arc, self.u));
        Node { arc, lab }
    }

    fn addable(&self, arc: &Arc) -> Vec<usize> {
        let mut pts = addable_points(self.geom, arc, self.u);
        if self.opts.sets_only {
            pts.retain(|&p| arc.mult(p) == 0);
        }
        pts
    }

    /// Upper bound on the size of any arc containing `arc`.
    fn bound(&self, arc: &Arc, addable: &[usize]) -> usize {
        let u = self.u;
        let geom = self.geom;
        let slack = |h: u32| u - arc.load(h as usize) as usize;
        let mut extra = vec![0usize; geom.num_hyperplanes()];
        let mut total_cap = 0;
        for &p in addable {
            let mut cap = geom.hyps_of_point[p].iter().map(|&h| slack(h)).min().unwrap_or(0);
            if self.opts.sets_only {
                cap = cap.min(1);
            }
            total_cap += cap;
            for &h in &geom.hyps_of_point[p] {
                extra[h as usize] += cap;
            }
        }
        let capacity: usize = (0..geom.num_hyperplanes())
            .map(|h| arc.load(h) as usize + extra[h].min(slack(h as u32)))
            .sum();
        // every point lies on the same number of hyperplanes
        let by_loads = capacity / self.hyps_per_point;
        // Σ over hyperplanes through P counts P r times and any other point at least λ times
        let r = self.hyps_per_point;
        let by_mult = arc
            .support()
            .map(|p| {
                let mu = arc.mult(p) as usize;
                mu + r * (u - mu) / self.min_common
            })
            .min()
            .unwrap_or(usize::MAX);
        by_loads.min(by_mult).min(arc.n() + total_cap)
    }

    fn tick(&self) -> Result<(), Aborted> {
        if self.stop.load(Ordering::Relaxed) {
            return Err(Aborted);
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_nodes = self.opts.node_budget.is_some_and(|b| n - self.start_nodes > b);
        let over_time = self.deadline.is_some_and(|d| n % 64 == 0 && Instant::now() > d);
        if over_nodes || over_time {
            // the node is left for the checkpoint, so it does not count
            self.nodes.fetch_sub(1, Ordering::Relaxed);
            self.stop.store(true, Ordering::Relaxed);
            return Err(Aborted);
        }
        Ok(())
    }

    fn record(&self, node: &Node, found: &mut Found) {
        let n = node.arc.n();
        let degenerate = is_degenerate(self.geom, &node.arc);
        let entry = found.census.entry(n).or_default();
        entry.total += 1;
        if !degenerate {
            entry.nondegenerate += 1;
        }
        if self.opts.maximal_only {
            self.threshold.fetch_max(n, Ordering::Relaxed);
        }
        if n < self.threshold.load(Ordering::Relaxed) {
            return;
        }
        let local_max = found.classes.iter().map(|c| c.n).max().unwrap_or(0);
        if self.opts.keep_all_complete || n >= local_max {
            found.classes.push(ArcClass::new(self.geom, &node.arc, self.u, &node.lab, true));
            if !self.opts.keep_all_complete && n > local_max {
                found.trim();
            }
        }
    }

    /// Process one node: record it when complete, else return its accepted children.
    fn step(&self, node: &Node, found: &mut Found) -> Result<Vec<Node>, Aborted> {
        self.tick()?;
        let addable = self.addable(&node.arc);
        if addable.is_empty() {
            self.record(node, found);
            return Ok(vec![]);
        }
        let threshold = self.threshold.load(Ordering::Relaxed);
        if threshold > 0 && self.bound(&node.arc, &addable) < threshold {
            return Ok(vec![]);
        }
        let mut uf = node.lab.orbit_union_find();
        let mut seen = vec![false; self.geom.num_points()];
        let mut children = vec![];
        for &p in &addable {
            let root = uf.find(p as u32) as usize;
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut arc = node.arc.clone();
            arc.add_point(self.geom, p);
            let child = self.node(arc);
            if self.is_canonical_extension(&child, p) {
                children.push(child);
            }
        }
        Ok(children)
    }

    fn is_canonical_extension(&self, child: &Node, added: usize) -> bool {
        let del = canonical_deletion(&child.arc, &child.lab);
        if del == added {
            return true;
        }
        let mut uf = child.lab.orbit_union_find();
        uf.find(del as u32) == uf.find(added as u32)
    }

    /// Depth-first search below `root`. On abort, returns the nodes not yet processed.
    fn explore(&self, root: Node, found: &mut Found) -> Vec<Node> {
        let mut stack = vec![root];
        while let Some(node) = stack.pop() {
            match self.step(&node, found) {
                // reversed so that children are visited in order
                Ok(children) => stack.extend(children.into_iter().rev()),
                Err(Aborted) => {
                    stack.push(node);
                    return stack;
                }
            }
        }
        vec![]
    }

    /// Expand down to arcs of size `depth`, which are returned unprocessed.
    fn frontier(&self, node: Node, depth: usize, found: &mut Found, out: &mut Vec<Node>) -> Result<(), Aborted> {
        if node.arc.n() >= depth {
            out.push(node);
            return Ok(());
        }
        for child in self.step(&node, found)? {
            self.frontier(child, depth, found, out)?;
        }
        Ok(())
    }

    /// Best of several randomized greedy completions. Trials rotate between a
    /// uniform choice, preferring points not yet on the arc, and preferring
    /// points on lightly loaded hyperplanes.
    fn greedy_lower_bound(&self) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a7c5);
        let geom = self.geom;
        let mut best = 0;
        for trial in 0..self.opts.greedy_trials {
            let mut arc = Arc::empty(geom);
            loop {
                let mut addable = self.addable(&arc);
                match trial % 3 {
                    1 if addable.iter().any(|&p| arc.mult(p) == 0) => addable.retain(|&p| arc.mult(p) == 0),
                    2 => {
                        let weight = |p: usize| -> usize {
                            geom.hyps_of_point[p].iter().map(|&h| arc.load(h as usize) as usize).sum()
                        };
                        if let Some(w) = addable.iter().map(|&p| weight(p)).min() {
                            addable.retain(|&p| weight(p) == w);
                        }
                    }
                    _ => {}
                }
                let Some(&p) = addable.choose(&mut rng) else {
                    break;
                };
                arc.add_point(geom, p);
            }
            best = best.max(arc.n());
        }
        best
    }
}

/// Point of nonzero multiplicity with the smallest canonical label.
pub fn canonical_deletion(arc: &Arc, lab: &Labeling) -> usize {
    arc.support().min_by_key(|&p| lab.labeling[p]).expect("nonempty arc")
}

/// Classify complete `(n, u)`-arcs of `geom` up to equivalence.
pub fn classify(geom: &Geometry, u: usize, opts: &SearchOptions) -> Result<ClassificationResult, SearchError> {
    if u < 2 {
        return Err(SearchError::InvalidU(u));
    }
    let mut threshold = opts.min_size;
    let probe = Engine::new(geom, u, opts, threshold, 0);
    if opts.maximal_only {
        threshold = threshold.max(probe.greedy_lower_bound());
    }
    let engine = Engine::new(geom, u, opts, threshold, 0);
    let mut found = Found::default();
    let root = engine.node(Arc::empty(geom));
    let mut frontier = vec![];
    if engine.frontier(root, opts.split_depth, &mut found, &mut frontier).is_err() {
        return Err(SearchError::BudgetTooSmall);
    }
    Ok(run_frontier(&engine, frontier, found))
}

/// Continue a search from a checkpoint.
pub fn resume(geom: &Geometry, checkpoint: &Checkpoint, opts: &SearchOptions) -> Result<ClassificationResult, SearchError> {
    checkpoint.check_matches(geom, opts)?;
    let u = checkpoint.u;
    let engine = Engine::new(geom, u, opts, checkpoint.threshold, checkpoint.nodes);
    let mut found = Found { census: checkpoint.census.clone(), classes: vec![] };
    for pts in &checkpoint.classes {
        let node = engine.node(Arc::from_points(geom, pts));
        found.classes.push(ArcClass::new(geom, &node.arc, u, &node.lab, true));
    }
    let frontier = checkpoint.frontier.iter().map(|pts| engine.node(Arc::from_points(geom, pts))).collect();
    Ok(run_frontier(&engine, frontier, found))
}

fn run_frontier(engine: &Engine<'_>, frontier: Vec<Node>, mut found: Found) -> ClassificationResult {
    let opts = engine.opts;
    let outcomes: Vec<(Found, Vec<Node>)> = {
        let work = |node: Node| {
            let mut local = Found::default();
            let left = engine.explore(node, &mut local);
            (local, left)
        };
        if opts.jobs > 1 {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build().expect("thread pool");
            pool.install(|| frontier.into_par_iter().map(work).collect())
        } else {
            frontier.into_iter().map(work).collect()
        }
    };
    let mut remaining = vec![];
    for (local, left) in outcomes {
        found.merge(local, opts.keep_all_complete);
        remaining.extend(left.iter().map(|n| n.arc.points()));
    }
    let threshold = engine.threshold.load(Ordering::Relaxed);
    found.classes.retain(|c| c.n >= threshold);
    found.classes.sort_by(|a, b| (a.n, &a.canonical_form).cmp(&(b.n, &b.canonical_form)));
    found.classes.dedup_by(|a, b| a.canonical_form == b.canonical_form);
    let m_u = found.classes.iter().map(|c| c.n).max();
    let at_max: Vec<ArcClass> = found.classes.iter().filter(|c| Some(c.n) == m_u).cloned().collect();
    let nodes = engine.nodes.load(Ordering::Relaxed);
    let status = if remaining.is_empty() { Status::Final } else { Status::BudgetExhausted };
    let checkpoint = (status == Status::BudgetExhausted).then(|| Checkpoint {
        format: Checkpoint::FORMAT.to_string(),
        version: Checkpoint::VERSION,
        ring: engine.geom.ring.name,
        k: engine.geom.k,
        u: engine.u,
        sets_only: opts.sets_only,
        min_size: opts.min_size,
        maximal_only: opts.maximal_only,
        threshold,
        nodes,
        census: found.census.clone(),
        classes: found.classes.iter().map(|c| c.points.clone()).collect(),
        frontier: remaining,
    });
    ClassificationResult {
        ring: engine.geom.ring.name,
        k: engine.geom.k,
        u: engine.u,
        options: opts.clone(),
        m_u,
        nondegenerate_at_max: at_max.iter().filter(|c| !c.degenerate).count(),
        total_at_max: at_max.len(),
        complete_classes: opts.keep_all_complete.then(|| found.classes.clone()),
        classes_at_max: at_max,
        census: found.census,
        census_exhaustive: opts.min_size == 0 && !opts.maximal_only,
        nodes,
        status,
        checkpoint,
    }
}
