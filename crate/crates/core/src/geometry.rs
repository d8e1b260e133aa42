//! Points, hyperplanes and incidence of the projective Hjelmslev geometry
//! `PHG(k, R)`.
//!
//! Points are free rank-1 right submodules `xR`, stored by the normalized
//! representative whose earliest unit coordinate is 1. Hyperplanes are
//! represented by dual coefficient vectors `c` (left-normalized the same
//! way) and contain the points with `Σ c_i x_i = 0`.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::canon::{Adjacency, ColoredGraph};
use crate::ring::{Elem, RingName, RingTable};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("dimension {0} outside 1..=4")]
    Dimension(usize),
    #[error("vector {0:?} has no unit coordinate")]
    NotFree(Vec<Elem>),
    #[error("vector has {got} coordinates, expected {expected}")]
    Length { got: usize, expected: usize },
    #[error("cache file: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A normalized point representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PointRep {
    pub id: usize,
    pub coords: Vec<Elem>,
}

/// A normalized dual coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HyperplaneRep {
    pub id: usize,
    pub coeffs: Vec<Elem>,
}

/// Row-major bit matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix { rows, cols, words, bits: vec![0; rows * words] }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] |= 1 << (c % 64);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of columns set in both rows.
    pub fn common(&self, a: usize, b: usize) -> usize {
        self.row(a).iter().zip(self.row(b)).map(|(x, y)| (x & y).count_ones() as usize).sum()
    }
}

#[derive(Clone, Debug)]
pub struct Geometry {
    pub ring: RingTable,
    pub k: usize,
    pub points: Vec<PointRep>,
    pub hyperplanes: Vec<HyperplaneRep>,
    /// points × hyperplanes
    pub incidence: BitMatrix,
    pub hyps_of_point: Vec<Vec<u32>>,
    pub points_of_hyp: Vec<Vec<u32>>,
    /// Neighbor class of each point, equal to its quotient point id.
    pub neighbor_class: Vec<u32>,
    /// Points of the quotient geometry `PG(k, F_q)`, normalized residue vectors.
    pub quotient_points: Vec<Vec<u8>>,
    point_index: HashMap<Vec<Elem>, usize>,
    adjacency: Arc<Adjacency>,
}

/// Summary printed by `geom build`.
#[derive(Clone, Debug, Serialize)]
pub struct GeometrySummary {
    pub ring: RingName,
    pub k: usize,
    pub points: usize,
    pub hyperplanes: usize,
    pub points_per_hyperplane: usize,
    pub hyperplanes_per_point: usize,
    pub neighbor_classes: usize,
    pub neighbor_class_size: usize,
    pub min_common_hyperplanes: usize,
}

/// Right-normalize: scale so the earliest unit coordinate becomes 1.
pub fn normalize_right(ring: &RingTable, v: &[Elem]) -> Option<Vec<Elem>> {
    let j = v.iter().position(|&x| ring.is_unit(x))?;
    let s = ring.inv(v[j])?;
    Some(v.iter().map(|&x| ring.mul(x, s)).collect())
}

/// Left-normalize a dual vector.
pub fn normalize_left(ring: &RingTable, v: &[Elem]) -> Option<Vec<Elem>> {
    let j = v.iter().position(|&x| ring.is_unit(x))?;
    let s = ring.inv(v[j])?;
    Some(v.iter().map(|&x| ring.mul(s, x)).collect())
}

/// `Σ c_i x_i` with coefficients on the left.
pub fn pairing(ring: &RingTable, c: &[Elem], x: &[Elem]) -> Elem {
    c.iter().zip(x).fold(0, |acc, (&ci, &xi)| ring.add(acc, ring.mul(ci, xi)))
}

fn normalized_vectors(ring: &RingTable, k: usize) -> Vec<Vec<Elem>> {
    let n = k + 1;
    let size = ring.size;
    let total = size.pow(n as u32);
    let mut out = vec![];
    let mut v = vec![0 as Elem; n];
    for code in 0..total {
        let mut c = code;
        for slot in v.iter_mut().rev() {
            *slot = (c % size) as Elem;
            c /= size;
        }
        if let Some(j) = v.iter().position(|&x| ring.is_unit(x)) {
            if v[j] == 1 {
                out.push(v.clone());
            }
        }
    }
    out
}

/// Normalized point representatives in lexicographic order of coordinate indices.
pub fn enumerate_points(ring: &RingTable, k: usize) -> Vec<PointRep> {
    normalized_vectors(ring, k)
        .into_iter()
        .enumerate()
        .map(|(id, coords)| PointRep { id, coords })
        .collect()
}

pub fn enumerate_hyperplanes(ring: &RingTable, k: usize) -> Vec<HyperplaneRep> {
    normalized_vectors(ring, k)
        .into_iter()
        .enumerate()
        .map(|(id, coeffs)| HyperplaneRep { id, coeffs })
        .collect()
}

pub fn incident(ring: &RingTable, c: &HyperplaneRep, x: &PointRep) -> bool {
    pairing(ring, &c.coeffs, &x.coords) == 0
}

/// Number of points of `PHG(k, R)`: `q^{(m-1)k} (q^{k+1}-1)/(q-1)`.
pub fn point_count(q: usize, m: usize, k: usize) -> usize {
    q.pow(((m - 1) * k) as u32) * (q.pow(k as u32 + 1) - 1) / (q - 1)
}

impl Geometry {
    pub fn build(ring: RingTable, k: usize) -> Result<Geometry, GeometryError> {
        if !(1..=4).contains(&k) {
            return Err(GeometryError::Dimension(k));
        }
        let points = enumerate_points(&ring, k);
        let hyperplanes = enumerate_hyperplanes(&ring, k);
        let mut incidence = BitMatrix::new(points.len(), hyperplanes.len());
        let mut hyps_of_point = vec![vec![]; points.len()];
        let mut points_of_hyp = vec![vec![]; hyperplanes.len()];
        for p in &points {
            for h in &hyperplanes {
                if incident(&ring, h, p) {
                    incidence.set(p.id, h.id);
                    hyps_of_point[p.id].push(h.id as u32);
                    points_of_hyp[h.id].push(p.id as u32);
                }
            }
        }
        let mut quotient_index: HashMap<Vec<u8>, u32> = HashMap::new();
        let mut quotient_points = vec![];
        let mut neighbor_class = vec![0; points.len()];
        // residue vectors of normalized points are already normalized
        let mut residues: Vec<(Vec<u8>, usize)> = points
            .iter()
            .map(|p| (p.coords.iter().map(|&x| ring.residue(x)).collect(), p.id))
            .collect();
        residues.sort();
        for (res, id) in residues {
            let next = quotient_index.len() as u32;
            let class = *quotient_index.entry(res.clone()).or_insert_with(|| {
                quotient_points.push(res);
                next
            });
            neighbor_class[id] = class;
        }
        let point_index = points.iter().map(|p| (p.coords.clone(), p.id)).collect();
        let np = points.len() as u32;
        let edges: Vec<(u32, u32)> = hyps_of_point
            .iter()
            .enumerate()
            .flat_map(|(p, hs)| hs.iter().map(move |&h| (p as u32, np + h)))
            .collect();
        let adjacency = Arc::new(Adjacency::from_edges(points.len() + hyperplanes.len(), &edges).expect("incidence edges"));
        Ok(Geometry {
            ring,
            k,
            points,
            hyperplanes,
            incidence,
            hyps_of_point,
            points_of_hyp,
            neighbor_class,
            quotient_points,
            point_index,
            adjacency,
        })
    }

    /// Point-hyperplane incidence graph: vertices `0..P` are points,
    /// `P..P+H` hyperplanes.
    pub fn incidence_graph(&self, colors: Vec<u32>) -> ColoredGraph {
        ColoredGraph::from_adjacency(Arc::clone(&self.adjacency), colors).expect("one color per vertex")
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_hyperplanes(&self) -> usize {
        self.hyperplanes.len()
    }

    /// Id of the point spanned by `v` (normalized on the right).
    pub fn point_id(&self, v: &[Elem]) -> Result<usize, GeometryError> {
        if v.len() != self.k + 1 {
            return Err(GeometryError::Length { got: v.len(), expected: self.k + 1 });
        }
        let norm = normalize_right(&self.ring, v).ok_or_else(|| GeometryError::NotFree(v.to_vec()))?;
        Ok(self.point_index[&norm])
    }

    pub fn hyperplane_id(&self, c: &[Elem]) -> Result<usize, GeometryError> {
        if c.len() != self.k + 1 {
            return Err(GeometryError::Length { got: c.len(), expected: self.k + 1 });
        }
        let norm = normalize_left(&self.ring, c).ok_or_else(|| GeometryError::NotFree(c.to_vec()))?;
        // same normalized vector set as the points
        Ok(self.point_index[&norm])
    }

    pub fn are_neighbors(&self, a: usize, b: usize) -> bool {
        self.neighbor_class[a] == self.neighbor_class[b]
    }

    /// Neighbor classes as sorted point lists, indexed by quotient point.
    pub fn neighbor_classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![vec![]; self.quotient_points.len()];
        for (p, &c) in self.neighbor_class.iter().enumerate() {
            classes[c as usize].push(p);
        }
        classes
    }

    /// Hyperplanes through every point (constant over the geometry).
    pub fn hyperplanes_per_point(&self) -> usize {
        self.hyps_of_point[0].len()
    }

    pub fn points_per_hyperplane(&self) -> usize {
        self.points_of_hyp[0].len()
    }

    /// Minimum number of hyperplanes through two distinct points. The
    /// collineation group is transitive on points, so pairs through point 0
    /// cover every pair orbit.
    pub fn min_common_hyperplanes(&self) -> usize {
        (1..self.num_points()).map(|b| self.incidence.common(0, b)).min().unwrap_or(0)
    }

    pub fn format_point(&self, p: usize) -> String {
        let lits: Vec<String> = self.points[p].coords.iter().map(|&x| self.ring.format(x)).collect();
        format!("({})", lits.join(":"))
    }

    pub fn summary(&self) -> GeometrySummary {
        let classes = self.neighbor_classes();
        GeometrySummary {
            ring: self.ring.name,
            k: self.k,
            points: self.num_points(),
            hyperplanes: self.num_hyperplanes(),
            points_per_hyperplane: self.points_per_hyperplane(),
            hyperplanes_per_point: self.hyperplanes_per_point(),
            neighbor_classes: classes.len(),
            neighbor_class_size: classes[0].len(),
            min_common_hyperplanes: self.min_common_hyperplanes(),
        }
    }
}

const CACHE_MAGIC: &[u8; 4] = b"PHGC";
const CACHE_VERSION: u32 = 1;

impl Geometry {
    /// Binary cache: magic, version, ring name, k, counts, incidence rows.
    pub fn write_cache<W: Write>(&self, mut w: W) -> Result<(), GeometryError> {
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&CACHE_VERSION.to_le_bytes())?;
        let name = self.ring.name.as_str().as_bytes();
        w.write_all(&[name.len() as u8])?;
        w.write_all(name)?;
        w.write_all(&[self.k as u8])?;
        w.write_all(&(self.num_points() as u32).to_le_bytes())?;
        w.write_all(&(self.num_hyperplanes() as u32).to_le_bytes())?;
        for p in 0..self.num_points() {
            for word in self.incidence.row(p) {
                w.write_all(&word.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Read a cache file and check it against a freshly built geometry.
    pub fn read_cache<R: Read>(mut r: R) -> Result<Geometry, GeometryError> {
        let bad = |m: &str| GeometryError::Cache(m.to_string());
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(bad("bad magic"));
        }
        let mut u32buf = [0u8; 4];
        r.read_exact(&mut u32buf)?;
        if u32::from_le_bytes(u32buf) != CACHE_VERSION {
            return Err(bad("unsupported version"));
        }
        let mut len = [0u8; 1];
        r.read_exact(&mut len)?;
        let mut name = vec![0u8; len[0] as usize];
        r.read_exact(&mut name)?;
        let name: RingName = String::from_utf8_lossy(&name).parse().map_err(|_| bad("unknown ring"))?;
        let mut k = [0u8; 1];
        r.read_exact(&mut k)?;
        let geom = Geometry::build(crate::ring::ring(name), k[0] as usize)?;
        r.read_exact(&mut u32buf)?;
        let np = u32::from_le_bytes(u32buf) as usize;
        r.read_exact(&mut u32buf)?;
        let nh = u32::from_le_bytes(u32buf) as usize;
        if np != geom.num_points() || nh != geom.num_hyperplanes() {
            return Err(bad("counts do not match the geometry"));
        }
        let mut stored = BitMatrix::new(np, nh);
        let mut word = [0u8; 8];
        for w in stored.bits.iter_mut() {
            r.read_exact(&mut word)?;
            *w = u64::from_le_bytes(word);
        }
        if stored != geom.incidence {
            return Err(bad("incidence matrix does not match"));
        }
        Ok(geom)
    }
}
