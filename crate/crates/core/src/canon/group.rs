//! Permutation groups given by generators: orbits, a Schreier–Sims
//! stabilizer chain for exact orders, and brute closure for small groups.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;

/// A permutation as its image list: `p[x]` is the image of `x`.
pub type Perm = Vec<u32>;

pub fn identity(n: usize) -> Perm {
    (0..n as u32).collect()
}

pub fn is_identity(p: &[u32]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

/// `a` then `b`.
pub fn compose(a: &[u32], b: &[u32]) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn inverse(a: &[u32]) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

/// Union-find over `0..n`.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    pub fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut y = x;
        while self.parent[y as usize] != r {
            let next = self.parent[y as usize];
            self.parent[y as usize] = r;
            y = next;
        }
        r
    }

    /// Union keeping the smaller root, so every root is its orbit minimum.
    pub fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

pub fn orbit_union_find<'a>(n: usize, gens: impl IntoIterator<Item = &'a Perm>) -> UnionFind {
    let mut uf = UnionFind::new(n);
    for g in gens {
        for (x, &y) in g.iter().enumerate() {
            uf.union(x as u32, y);
        }
    }
    uf
}

/// Orbits as sorted vertex lists, ordered by their minimum element.
pub fn orbits(n: usize, gens: &[Perm]) -> Vec<Vec<u32>> {
    let mut uf = orbit_union_find(n, gens);
    let mut by_root: Vec<Vec<u32>> = vec![Vec::new(); n];
    for v in 0..n as u32 {
        let r = uf.find(v);
        by_root[r as usize].push(v);
    }
    by_root.into_iter().filter(|o| !o.is_empty()).collect()
}

struct Level {
    point: u32,
    gens: Vec<Perm>,
    /// orbit point -> element mapping `point` to it
    transversal: Vec<Option<Perm>>,
    orbit: Vec<u32>,
}

impl Level {
    fn rebuild(&mut self, n: usize) {
        self.transversal = vec![None; n];
        self.transversal[self.point as usize] = Some(identity(n));
        self.orbit = vec![self.point];
        let mut queue = VecDeque::from([self.point]);
        while let Some(x) = queue.pop_front() {
            for g in &self.gens {
                let y = g[x as usize];
                if self.transversal[y as usize].is_none() {
                    let ux = self.transversal[x as usize].as_ref().unwrap();
                    self.transversal[y as usize] = Some(compose(ux, g));
                    self.orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
    }
}

/// Stabilizer chain built by deterministic Schreier–Sims.
pub struct StabChain {
    n: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// `base` is a prefix of the base; points are appended as needed.
    pub fn new(n: usize, gens: &[Perm], base: &[u32]) -> StabChain {
        let gens: Vec<Perm> = gens.iter().filter(|g| !is_identity(g)).cloned().collect();
        let mut chain = StabChain { n, levels: Vec::new() };
        for &b in base {
            chain.push_level(b);
        }
        if chain.levels.is_empty() {
            if let Some(g) = gens.first() {
                let moved = (0..n).find(|&x| g[x] != x as u32).unwrap() as u32;
                chain.push_level(moved);
            }
        }
        for g in &gens {
            chain.insert_from(0, g.clone());
        }
        for l in chain.levels.iter_mut() {
            l.rebuild(n);
        }
        chain.complete();
        chain
    }

    fn push_level(&mut self, point: u32) {
        self.levels.push(Level { point, gens: Vec::new(), transversal: Vec::new(), orbit: Vec::new() });
    }

    /// Add `g` (which fixes the base points before `from`) to every level it stabilizes.
    fn insert_from(&mut self, from: usize, g: Perm) -> usize {
        let mut i = from;
        loop {
            if i == self.levels.len() {
                let moved = (0..self.n).find(|&x| g[x] != x as u32).unwrap() as u32;
                self.push_level(moved);
            }
            self.levels[i].gens.push(g.clone());
            if g[self.levels[i].point as usize] != self.levels[i].point {
                return i;
            }
            i += 1;
        }
    }

    /// Sift from level `from`; returns the residue and the level it stopped at.
    fn sift(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for i in from..self.levels.len() {
            let l = &self.levels[i];
            let b = g[l.point as usize];
            match &l.transversal[b as usize] {
                Some(u) => g = compose(&g, &inverse(u)),
                None => return (g, i),
            }
        }
        let depth = self.levels.len();
        (g, depth)
    }

    fn complete(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let lvl = i - 1;
            let mut restart = None;
            'outer: for oi in 0..self.levels[lvl].orbit.len() {
                let beta = self.levels[lvl].orbit[oi];
                for gi in 0..self.levels[lvl].gens.len() {
                    let level = &self.levels[lvl];
                    let s = &level.gens[gi];
                    let ub = level.transversal[beta as usize].as_ref().unwrap();
                    let image = s[beta as usize];
                    let uimg = level.transversal[image as usize].as_ref().unwrap();
                    let schreier = compose(&compose(ub, s), &inverse(uimg));
                    if is_identity(&schreier) {
                        continue;
                    }
                    let (res, stop) = self.sift(schreier, lvl + 1);
                    if !is_identity(&res) {
                        let top = self.insert_from(lvl + 1, res);
                        let top = top.max(stop).min(self.levels.len() - 1);
                        for l in lvl + 1..=top {
                            let n = self.n;
                            self.levels[l].rebuild(n);
                        }
                        restart = Some(top + 1);
                        break 'outer;
                    }
                }
            }
            match restart {
                Some(next) => i = next,
                None => i -= 1,
            }
        }
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn contains(&self, g: &[u32]) -> bool {
        let (res, _) = self.sift(g.to_vec(), 0);
        is_identity(&res)
    }

    /// Size of the basic orbit at each level.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }
}

pub fn group_order(n: usize, gens: &[Perm], base: &[u32]) -> BigUint {
    StabChain::new(n, gens, base).order()
}

/// All elements of the group generated by `gens`, or `None` past `limit`.
pub fn enumerate_elements(n: usize, gens: &[Perm], limit: usize) -> Option<Vec<Perm>> {
    let id = identity(n);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(&x, g);
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Some(out)
}
