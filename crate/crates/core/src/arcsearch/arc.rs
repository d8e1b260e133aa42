use serde::{Deserialize, Serialize};

use crate::canon::ColoredGraph;
use crate::geometry::Geometry;

/// A multiset of points with cached hyperplane loads.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    mult: Vec<u8>,
    loads: Vec<u16>,
    n: usize,
}

/// Point id and multiplicity, the serialized form of an arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointMult {
    pub point: usize,
    pub mult: u8,
}

impl Arc {
    pub fn empty(geom: &Geometry) -> Arc {
        Arc { mult: vec![0; geom.num_points()], loads: vec![0; geom.num_hyperplanes()], n: 0 }
    }

    pub fn from_points(geom: &Geometry, points: &[PointMult]) -> Arc {
        let mut arc = Arc::empty(geom);
        for pm in points {
            for _ in 0..pm.mult {
                arc.add_point(geom, pm.point);
            }
        }
        arc
    }

    /// Total multiplicity.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mult(&self, p: usize) -> u8 {
        self.mult[p]
    }

    pub fn multiplicities(&self) -> &[u8] {
        &self.mult
    }

    pub fn load(&self, h: usize) -> u16 {
        self.loads[h]
    }

    pub fn loads(&self) -> &[u16] {
        &self.loads
    }

    pub fn max_load(&self) -> u16 {
        self.loads.iter().copied().max().unwrap_or(0)
    }

    pub fn is_valid(&self, u: usize) -> bool {
        self.max_load() as usize <= u
    }

    pub fn add_point(&mut self, geom: &Geometry, p: usize) {
        self.mult[p] += 1;
        self.n += 1;
        for &h in &geom.hyps_of_point[p] {
            self.loads[h as usize] += 1;
        }
    }

    pub fn remove_point(&mut self, geom: &Geometry, p: usize) {
        assert!(self.mult[p] > 0, "point {p} is not in the arc");
        self.mult[p] -= 1;
        self.n -= 1;
        for &h in &geom.hyps_of_point[p] {
            self.loads[h as usize] -= 1;
        }
    }

    /// Points of nonzero multiplicity.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.mult.iter().enumerate().filter(|(_, &m)| m > 0).map(|(p, _)| p)
    }

    pub fn points(&self) -> Vec<PointMult> {
        self.support().map(|p| PointMult { point: p, mult: self.mult[p] }).collect()
    }

    /// Loads recomputed from the incidence matrix.
    pub fn recompute_loads(&self, geom: &Geometry) -> Vec<u16> {
        (0..geom.num_hyperplanes())
            .map(|h| geom.points_of_hyp[h].iter().map(|&p| self.mult[p as usize] as u16).sum())
            .collect()
    }
}

/// Bipartite incidence graph with points colored by multiplicity and
/// hyperplanes by the reserved color `u + 1`.
pub fn arc_graph(geom: &Geometry, arc: &Arc, u: usize) -> ColoredGraph {
    let mut colors: Vec<u32> = arc.mult.iter().map(|&m| m as u32).collect();
    colors.extend(std::iter::repeat_n(u as u32 + 1, geom.num_hyperplanes()));
    geom.incidence_graph(colors)
}

/// Points whose multiplicity can be raised by one while keeping every load ≤ u.
pub fn addable_points(geom: &Geometry, arc: &Arc, u: usize) -> Vec<usize> {
    (0..geom.num_points())
        .filter(|&p| geom.hyps_of_point[p].iter().all(|&h| (arc.loads[h as usize] as usize) < u))
        .collect()
}

/// Residue-rank test: the support generates a proper submodule iff its
/// residue vectors span less than `F_q^{k+1}`.
pub fn is_degenerate(geom: &Geometry, arc: &Arc) -> bool {
    let rows: Vec<Vec<u8>> = arc
        .support()
        .map(|p| geom.points[p].coords.iter().map(|&x| geom.ring.residue(x)).collect())
        .collect();
    field_rank(&geom.ring.field, rows) < geom.k + 1
}

pub(crate) fn field_rank(f: &crate::ring::FieldTable, mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = f.inv(rows[rank][c]).unwrap();
        let prow: Vec<u8> = rows[rank].iter().map(|&x| f.mul(x, inv)).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&prow) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        rows[rank] = prow;
        rank += 1;
    }
    rank
}
